//! Distance-to-water analysis and three-tier scarcity zoning.

pub mod distance;

use std::io::Read;
use std::path::Path;

use crate::contour::elevation_stats;
use crate::error::{Error, Result};
use crate::hydro::{RiverSegment, WaterBody};
use crate::polygon::{polygonize, Connectivity, RegionPolygon};
use crate::raster::{GeoPoint, Grid, GridHeader, MaskGrid, SampleMethod};

pub use distance::{axis_spacing_m, distance_to_water, DistanceGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct Village {
    pub name: String,
    pub location: GeoPoint,
    /// Surveyed elevation; when absent the DEM is sampled.
    pub elevation: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScarcityClass {
    Normal,
    Critical,
    VeryCritical,
}

impl ScarcityClass {
    pub const ALL: [ScarcityClass; 3] = [ScarcityClass::Normal, ScarcityClass::Critical, ScarcityClass::VeryCritical];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            ScarcityClass::Normal => "normal",
            ScarcityClass::Critical => "critical",
            ScarcityClass::VeryCritical => "very_critical",
        }
    }

    /// Map colour: yellow, orange, red.
    pub fn color(self) -> &'static str {
        match self {
            ScarcityClass::Normal => "yellow",
            ScarcityClass::Critical => "orange",
            ScarcityClass::VeryCritical => "red",
        }
    }
}

/// Weights of the scarcity score
/// `w_distance · d / d_ref + w_elevation · max(0, (z - mean) / std)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreWeights {
    pub w_distance: f64,
    pub w_elevation: f64,
    pub d_ref_m: f64,
}

impl Default for ScoreWeights {
    fn default() -> Self {
        ScoreWeights { w_distance: 1.0, w_elevation: 0.25, d_ref_m: 5000.0 }
    }
}

impl ScoreWeights {
    pub fn validate(&self) -> Result<()> {
        let ok = self.w_distance >= 0.0 && self.w_elevation >= 0.0 && self.d_ref_m > 0.0 && self.d_ref_m.is_finite();
        if !ok || !self.w_distance.is_finite() || !self.w_elevation.is_finite() {
            return Err(Error::InvalidParameter(format!("invalid score weights {self:?}")));
        }
        Ok(())
    }

    /// Score of a site. `dem_stats` is `(mean, std)`; a zero spread drops
    /// the elevation term.
    pub fn score(&self, distance_m: f64, elevation_m: f64, dem_stats: (f64, f64)) -> f64 {
        let (mean, std) = dem_stats;
        let excess = if std > 0.0 { ((elevation_m - mean) / std).max(0.0) } else { 0.0 };
        self.w_distance * (distance_m / self.d_ref_m) + self.w_elevation * excess
    }
}

/// Score with the default weights.
pub fn scarcity_score(distance_m: f64, elevation_m: f64, dem_stats: (f64, f64)) -> f64 {
    ScoreWeights::default().score(distance_m, elevation_m, dem_stats)
}

/// Class boundaries: below `t1` is normal, below `t2` critical, otherwise
/// very critical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    t1: f64,
    t2: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { t1: 1.0, t2: 2.0 }
    }
}

impl Thresholds {
    /// Infinite thresholds are allowed; `t1 == t2` removes the middle class.
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if t1.is_nan() || t2.is_nan() || t1 > t2 {
            return Err(Error::InvalidParameter(format!("thresholds must satisfy t1 <= t2, got {t1}, {t2}")));
        }
        Ok(Thresholds { t1, t2 })
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn classify(&self, score: f64) -> ScarcityClass {
        if score < self.t1 {
            ScarcityClass::Normal
        } else if score < self.t2 {
            ScarcityClass::Critical
        } else {
            ScarcityClass::VeryCritical
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScarcityModel {
    pub weights: ScoreWeights,
    pub thresholds: Thresholds,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assessment {
    pub distance_m: f64,
    pub elevation_m: f64,
    pub score: f64,
    pub class: ScarcityClass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Assessed(Assessment),
    OutOfExtent,
    /// No surveyed elevation and the DEM has no value there.
    NoElevation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub village: Village,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScarcityReport {
    pub rows: Vec<ReportRow>,
}

impl ScarcityReport {
    pub fn assessed(&self) -> impl Iterator<Item = (&Village, &Assessment)> {
        self.rows.iter().filter_map(|r| match &r.outcome {
            Outcome::Assessed(a) => Some((&r.village, a)),
            _ => None,
        })
    }

    /// `name,lon,lat,elevation_m,distance_m,score,class`. Villages that could
    /// not be assessed keep empty numeric fields and name the reason in
    /// `class`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,lon,lat,elevation_m,distance_m,score,class\n");
        for row in &self.rows {
            let v = &row.village;
            let name = crate::hydro::water::csv_field(&v.name);
            let (lon, lat) = (v.location.lon, v.location.lat);
            match row.outcome {
                Outcome::Assessed(a) => out.push_str(&format!(
                    "{name},{lon},{lat},{:.2},{:.1},{:.4},{}\n",
                    a.elevation_m,
                    a.distance_m,
                    a.score,
                    a.class.label()
                )),
                Outcome::OutOfExtent => out.push_str(&format!("{name},{lon},{lat},,,,out_of_extent\n")),
                Outcome::NoElevation => out.push_str(&format!("{name},{lon},{lat},,,,no_elevation\n")),
            }
        }
        out
    }
}

fn dem_stats(dem: &Grid) -> Result<(f64, f64)> {
    let s = elevation_stats(dem)?;
    Ok((s.mean, s.std_dev))
}

pub fn classify_villages(
    villages: &[Village],
    distance: &DistanceGrid,
    dem: &Grid,
    model: &ScarcityModel,
) -> Result<ScarcityReport> {
    model.weights.validate()?;
    let stats = dem_stats(dem)?;
    let mut rows = Vec::with_capacity(villages.len());
    for v in villages {
        let outcome = assess(v, distance, dem, model, stats)?;
        rows.push(ReportRow { village: v.clone(), outcome });
    }
    Ok(ScarcityReport { rows })
}

fn assess(
    v: &Village,
    distance: &DistanceGrid,
    dem: &Grid,
    model: &ScarcityModel,
    stats: (f64, f64),
) -> Result<Outcome> {
    let out_of_extent = |e: &Error| matches!(e, Error::OutOfExtent { .. } | Error::LatitudeOutOfRange(_));
    let sampled = distance.grid().project(v.location).and_then(|at| distance.grid().sample(at, SampleMethod::Bilinear));
    let distance_m = match sampled {
        Ok(Some(d)) => d,
        Ok(None) => return Ok(Outcome::NoElevation),
        Err(e) if out_of_extent(&e) => return Ok(Outcome::OutOfExtent),
        Err(e) => return Err(e),
    };
    let elevation_m = match v.elevation {
        Some(z) => z,
        None => match crate::raster::sample_elevation(dem, v.location, SampleMethod::Bilinear) {
            Ok(Some(z)) => z,
            Ok(None) => return Ok(Outcome::NoElevation),
            Err(e) if out_of_extent(&e) => return Ok(Outcome::OutOfExtent),
            Err(e) => return Err(e),
        },
    };
    let score = model.weights.score(distance_m, elevation_m, stats);
    Ok(Outcome::Assessed(Assessment { distance_m, elevation_m, score, class: model.thresholds.classify(score) }))
}

/// Per-cell classes (nodata where the DEM has none).
pub fn scarcity_class_grid(distance: &DistanceGrid, dem: &Grid, model: &ScarcityModel) -> Result<Grid> {
    dem.header().check_same_shape(distance.header(), "distance grid")?;
    model.weights.validate()?;
    let stats = dem_stats(dem)?;
    Grid::from_fn(*dem.header(), |r, c| match dem.get(r, c) {
        Some(z) => {
            let score = model.weights.score(distance.distance_m(r, c), z, stats);
            model.thresholds.classify(score).code() as f64
        }
        None => dem.nodata(),
    })
}

/// Zone polygons; each polygon's `pixel_value` is its class code.
pub fn scarcity_zones(distance: &DistanceGrid, dem: &Grid, model: &ScarcityModel) -> Result<Vec<RegionPolygon>> {
    polygonize(&scarcity_class_grid(distance, dem, model)?, None, Connectivity::Four)
}

/// Water sources for the distance transform: body cells, plus river cells
/// when `include_rivers` is set.
pub fn water_source_mask(
    header: &GridHeader,
    bodies: &[WaterBody],
    rivers: &[RiverSegment],
    include_rivers: bool,
) -> Result<MaskGrid> {
    let mut wet = vec![false; header.len()];
    let cells = bodies.iter().flat_map(|b| b.cells.iter());
    let river_cells = rivers.iter().filter(|_| include_rivers).flat_map(|r| r.cells.iter());
    for &i in cells.chain(river_cells) {
        if i >= wet.len() {
            return Err(Error::DimensionMismatch(format!("cell index {i} outside a grid of {} cells", wet.len())));
        }
        wet[i] = true;
    }
    MaskGrid::new(*header, wet)
}

/// Reads `name,lon,lat[,elevation_m]` with a header row.
pub fn parse_villages(input: impl Read, source: &Path) -> Result<Vec<Village>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let bad = |line: usize, message: String| Error::Input { path: source.to_path_buf(), line, message };
    let headers = reader.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    let names: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
    let col = |n: &str| names.iter().position(|h| h == n);
    let (Some(ni), Some(xi), Some(yi)) = (col("name"), col("lon"), col("lat")) else {
        return Err(bad(1, "header must contain name, lon and lat".into()));
    };
    let zi = col("elevation_m");
    let mut villages = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(i).unwrap_or("");
        let number = |i: usize, what: &str| -> Result<f64> {
            field(i)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(line, format!("{what} {:?} is not a number", field(i))))
        };
        let location = GeoPoint::new(number(xi, "lon")?, number(yi, "lat")?);
        if !location.is_valid() {
            return Err(bad(line, format!("({}, {}) is not a valid lon/lat", location.lon, location.lat)));
        }
        let elevation = match zi {
            Some(i) if !field(i).is_empty() => Some(number(i, "elevation_m")?),
            _ => None,
        };
        villages.push(Village { name: field(ni).to_string(), location, elevation });
    }
    Ok(villages)
}

pub fn read_villages(path: impl AsRef<Path>) -> Result<Vec<Village>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::from(e).in_file(path))?;
    parse_villages(std::io::BufReader::new(file), path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{Crs, Hemisphere};

    #[test]
    fn score_examples() {
        assert_eq!(scarcity_score(0.0, 500.0, (500.0, 20.0)), 0.0);
        assert_eq!(scarcity_score(5000.0, 500.0, (500.0, 20.0)), 1.0);
        assert_eq!(scarcity_score(10_000.0, 540.0, (500.0, 20.0)), 2.5);
        assert_eq!(scarcity_score(0.0, 300.0, (500.0, 20.0)), 0.0);
    }

    #[test]
    fn classes_and_thresholds() {
        let t = Thresholds::default();
        assert_eq!(t.classify(0.99), ScarcityClass::Normal);
        assert_eq!(t.classify(1.0), ScarcityClass::Critical);
        assert_eq!(t.classify(2.0), ScarcityClass::VeryCritical);
        let inf = Thresholds::new(f64::INFINITY, f64::INFINITY).unwrap();
        assert_eq!(inf.classify(1e300), ScarcityClass::Normal);
        assert!(Thresholds::new(2.0, 1.0).is_err());
        assert!(
            ScarcityClass::Normal < ScarcityClass::Critical && ScarcityClass::Critical < ScarcityClass::VeryCritical
        );
    }

    fn geo_header() -> GridHeader {
        GridHeader::new(20, 20, 76.0, 18.0, 0.001, Crs::GeographicWgs84).unwrap()
    }

    #[test]
    fn villages_near_and_far() {
        let h = geo_header();
        let dem = Grid::from_fn(h, |r, c| 500.0 + (r + c) as f64).unwrap();
        let water = MaskGrid::from_fn(h, |r, c| r < 3 && c < 3).unwrap();
        let dist = distance_to_water(&water).unwrap();
        let c0 = h.cell_center(1, 1);
        let villages = vec![
            Village { name: "lake".into(), location: GeoPoint::new(c0.x, c0.y), elevation: Some(519.0) },
            Village { name: "far".into(), location: GeoPoint::new(76.0195, 18.0005), elevation: None },
            Village { name: "away".into(), location: GeoPoint::new(77.5, 18.0), elevation: None },
        ];
        let model = ScarcityModel { thresholds: Thresholds::new(0.3, 0.5).unwrap(), ..Default::default() };
        let report = classify_villages(&villages, &dist, &dem, &model).unwrap();
        let Outcome::Assessed(near) = report.rows[0].outcome else { panic!() };
        assert_eq!(near.distance_m, 0.0);
        assert_eq!(near.class, ScarcityClass::Normal);
        let Outcome::Assessed(far) = report.rows[1].outcome else { panic!() };
        assert!(far.score > near.score);
        assert_eq!(far.class, ScarcityClass::VeryCritical);
        assert_eq!(report.rows[2].outcome, Outcome::OutOfExtent);
        let csv = report.to_csv();
        assert!(csv.ends_with("away,77.5,18,,,,out_of_extent\n"), "{csv}");
        assert_eq!(csv, report.to_csv());
    }

    #[test]
    fn zones_tile_the_grid() {
        let h =
            GridHeader::new(21, 21, 0.0, 0.0, 1000.0, Crs::Utm { zone: 43, hemisphere: Hemisphere::North }).unwrap();
        let dem = Grid::filled(h, 600.0).unwrap();
        let water = MaskGrid::from_fn(h, |r, c| (r, c) == (10, 10)).unwrap();
        let dist = distance_to_water(&water).unwrap();
        let zones = scarcity_zones(&dist, &dem, &ScarcityModel::default()).unwrap();
        let area: f64 = zones.iter().map(|z| z.area_ha).sum();
        assert!((area - dem.valid_area_m2() / 1e4).abs() < 1e-9 * area);
        // Radially growing distance: each class is one ring around the previous.
        assert_eq!(zones.len(), 3);
        let normal = zones.iter().find(|z| z.pixel_value == 0.0).unwrap();
        assert!(normal.holes.is_empty());
        for z in zones.iter().filter(|z| z.pixel_value > 0.0) {
            assert_eq!(z.holes.len(), 1);
        }

        let all = MaskGrid::from_fn(h, |_, _| true).unwrap();
        let zones = scarcity_zones(&distance_to_water(&all).unwrap(), &dem, &ScarcityModel::default()).unwrap();
        assert_eq!(zones.len(), 1);
        assert_eq!(zones[0].pixel_value, 0.0);
    }

    #[test]
    fn village_csv() {
        let text = "name,lon,lat,elevation_m\nA,76.5,18.4,610\n\"B, east\",76.6,18.41,\n";
        let v = parse_villages(text.as_bytes(), Path::new("v.csv")).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].elevation, Some(610.0));
        assert_eq!(v[1].name, "B, east");
        assert_eq!(v[1].elevation, None);
        let err = parse_villages("name,lon,lat\nA,x,18\n".as_bytes(), Path::new("v.csv")).unwrap_err();
        assert!(matches!(err, Error::Input { line: 2, .. }), "{err}");
        assert!(parse_villages("name,lat\n".as_bytes(), Path::new("v.csv")).is_err());
    }
}
