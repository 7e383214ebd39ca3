use crate::error::{Error, Result};
use crate::hydro::flow::fill_sinks;
use crate::hydro::rivers::RiverSegment;
use crate::hydro::slope::SlopeGrid;
use crate::polygon::{polygonize_regions, Connectivity, RegionPolygon};
use crate::raster::{Grid, MaskGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaterBodyKind {
    ReservoirOrLake,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaterBody {
    pub polygon: RegionPolygon,
    /// Mean DEM elevation over the body's cells.
    pub mean_elevation: f64,
    pub kind: WaterBodyKind,
    /// Row-major indices of the member cells.
    pub cells: Vec<usize>,
}

impl WaterBody {
    pub fn area_ha(&self) -> f64 {
        self.polygon.area_ha
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaterParams {
    pub max_slope_deg: f64,
    pub min_area_ha: f64,
}

impl Default for WaterParams {
    fn default() -> Self {
        WaterParams { max_slope_deg: 1.0, min_area_ha: 5.0 }
    }
}

/// Candidate water cells: gentle slope, and either inside a filled
/// depression or perfectly flat.
pub fn water_mask(dem: &Grid, slope: &SlopeGrid, max_slope_deg: f64) -> Result<MaskGrid> {
    let h = *dem.header();
    h.check_same_shape(slope.grid().header(), "slope grid")?;
    let filled = fill_sinks(dem);
    let eligible = (0..h.len())
        .map(|i| match (dem.get_index(i), slope.grid().get_index(i)) {
            (Some(z), Some(s)) => s <= max_slope_deg && (filled.values()[i] - z > 0.0 || s == 0.0),
            _ => false,
        })
        .collect();
    MaskGrid::new(h, eligible)
}

pub fn extract_water_bodies(
    dem: &Grid,
    slope: &SlopeGrid,
    max_slope_deg: f64,
    min_area_ha: f64,
) -> Result<Vec<WaterBody>> {
    let mask = water_mask(dem, slope, max_slope_deg)?;
    let binary = Grid::from_fn(*dem.header(), |r, c| {
        if dem.get(r, c).is_none() {
            dem.nodata()
        } else {
            mask.is_eligible(r, c) as u8 as f64
        }
    })?;
    let bodies = polygonize_regions(&binary, Some(&mask), Connectivity::Four)?
        .into_iter()
        .filter(|r| r.polygon.area_ha >= min_area_ha)
        .map(|r| {
            let sum: f64 = r.cells.iter().map(|&i| dem.values()[i]).sum();
            WaterBody {
                mean_elevation: sum / r.cells.len() as f64,
                polygon: r.polygon,
                kind: WaterBodyKind::ReservoirOrLake,
                cells: r.cells,
            }
        })
        .collect();
    Ok(bodies)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaterInventory {
    pub bodies: Vec<WaterBody>,
    pub rivers: Vec<RiverSegment>,
    /// Reservoir and lake area only; rivers are reported by length.
    pub total_water_ha: f64,
    pub total_river_km: f64,
    pub district_area_ha: f64,
    /// Rounded to two decimals.
    pub water_fraction_pct: f64,
}

/// Share of `total_water_ha` in the district, in percent rounded to two
/// decimals.
pub fn water_fraction_pct(total_water_ha: f64, district_area_ha: f64) -> f64 {
    (100.0 * total_water_ha / district_area_ha * 100.0).round() / 100.0
}

pub fn water_inventory(
    bodies: Vec<WaterBody>,
    rivers: Vec<RiverSegment>,
    district_area_ha: f64,
) -> Result<WaterInventory> {
    if !(district_area_ha > 0.0 && district_area_ha.is_finite()) {
        return Err(Error::InvalidParameter(format!("district area must be positive, got {district_area_ha}")));
    }
    // Empty float sums are -0.0; add 0.0 so empty totals print as "0".
    let total_water_ha = bodies.iter().map(WaterBody::area_ha).sum::<f64>() + 0.0;
    let total_river_km = rivers.iter().map(|r| r.length_km).sum::<f64>() + 0.0;
    Ok(WaterInventory {
        water_fraction_pct: water_fraction_pct(total_water_ha, district_area_ha),
        bodies,
        rivers,
        total_water_ha,
        total_river_km,
        district_area_ha,
    })
}

impl WaterInventory {
    /// `kind,name,area_ha,length_km`, one row per body and river, then a
    /// `TOTAL` row carrying the water area and its percentage of the district.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,name,area_ha,length_km\n");
        for (k, b) in self.bodies.iter().enumerate() {
            out.push_str(&format!("reservoir,body_{},{:.4},\n", k + 1, b.area_ha()));
        }
        for (k, r) in self.rivers.iter().enumerate() {
            let name = r.name.clone().unwrap_or_else(|| format!("segment_{}", k + 1));
            out.push_str(&format!("river,{},,{:.4}\n", csv_field(&name), r.length_km));
        }
        out.push_str(&format!("TOTAL,,{:.4},{:.2}\n", self.total_water_ha, self.water_fraction_pct));
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
