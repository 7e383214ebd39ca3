//! End-to-end runs chaining the individual steps, as used by the command
//! line tool.

use crate::error::{Error, Result};
use crate::hydro::{
    extract_rivers, extract_water_bodies, fill_sinks, flow_accumulation, flow_directions, slope_map, FlowGrid,
    RiverSegment, SlopeGrid, WaterBody, WaterParams,
};
use crate::polygon::RegionPolygon;
use crate::raster::Grid;
use crate::scarcity::{
    classify_villages, distance_to_water, scarcity_zones, water_source_mask, DistanceGrid, ScarcityModel,
    ScarcityReport, Village,
};
use crate::vector::{render_svg, rivers_layer, water_layer, zones_geojson, zones_layer};

pub const DEFAULT_RIVER_THRESHOLD: u64 = 40;

/// Slope, routing, water bodies and rivers derived from one DEM.
#[derive(Debug, Clone)]
pub struct Hydrology {
    pub slope: SlopeGrid,
    pub flow: FlowGrid,
    pub bodies: Vec<WaterBody>,
    /// Empty when no cell reaches the accumulation threshold.
    pub rivers: Vec<RiverSegment>,
}

pub fn analyse_hydrology(dem: &Grid, water: WaterParams, river_threshold: u64) -> Result<Hydrology> {
    let slope = slope_map(dem)?;
    let bodies = extract_water_bodies(dem, &slope, water.max_slope_deg, water.min_area_ha)?;
    let flow = flow_accumulation(&flow_directions(&fill_sinks(dem))?)?;
    let rivers = match extract_rivers(&flow, river_threshold) {
        Ok(r) => r,
        Err(Error::ThresholdTooHigh { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(Hydrology { slope, flow, bodies, rivers })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScarcityOptions {
    pub water: WaterParams,
    pub river_threshold: u64,
    /// Count river cells as water sources, not only reservoirs and lakes.
    pub include_rivers: bool,
    pub model: ScarcityModel,
}

impl Default for ScarcityOptions {
    fn default() -> Self {
        ScarcityOptions {
            water: WaterParams::default(),
            river_threshold: DEFAULT_RIVER_THRESHOLD,
            include_rivers: true,
            model: ScarcityModel::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScarcityRun {
    pub hydrology: Hydrology,
    pub distance: DistanceGrid,
    pub report: ScarcityReport,
    pub zones: Vec<RegionPolygon>,
}

impl ScarcityRun {
    pub fn report_csv(&self) -> String {
        self.report.to_csv()
    }

    pub fn zones_geojson(&self) -> String {
        zones_geojson(&self.zones, self.distance.header().crs)
    }

    /// Zones with water bodies and rivers drawn on top.
    pub fn map_svg(&self) -> Result<String> {
        let crs = self.distance.header().crs;
        render_svg(&[
            zones_layer(&self.zones, crs),
            water_layer(&self.hydrology.bodies, crs),
            rivers_layer(&self.hydrology.rivers, crs),
        ])
    }
}

pub fn run_scarcity(dem: &Grid, villages: &[Village], options: &ScarcityOptions) -> Result<ScarcityRun> {
    let hydrology = analyse_hydrology(dem, options.water, options.river_threshold)?;
    let mask = water_source_mask(dem.header(), &hydrology.bodies, &hydrology.rivers, options.include_rivers)?;
    let distance = distance_to_water(&mask)?;
    let report = classify_villages(villages, &distance, dem, &options.model)?;
    let zones = scarcity_zones(&distance, dem, &options.model)?;
    Ok(ScarcityRun { hydrology, distance, report, zones })
}
