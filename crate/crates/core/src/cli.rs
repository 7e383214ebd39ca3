//! The `terracarta` command line tool.
//!
//! Every command reads an ARC/INFO ASCII grid given by `--dem` and writes its
//! results into `--out`. Settings may also come from a `key = value` file
//! passed with `--config`, where keys are flag names without the dashes;
//! flags on the command line win.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::contour::{band_areas, elevation_stats, extract_contours, vertical_accuracy, ContourLevelSpec};
use crate::error::{Error, Result};
use crate::geodesy::{geo_to_utm_in, utm_to_geo, zone_for_lon, UtmPoint};
use crate::hydro::{
    extract_rivers, extract_water_bodies, fill_sinks, flow_accumulation, flow_directions, name_rivers, slope_map,
    water_inventory,
};
use crate::pipeline::{run_scarcity, ScarcityOptions, DEFAULT_RIVER_THRESHOLD};
use crate::polygon::{polygonize, Connectivity};
use crate::raster::{read_ascii_grid, terrain_profile, write_ascii_grid, Crs, GeoPoint, Grid, Hemisphere};
use crate::scarcity::{read_villages, ScarcityModel, ScoreWeights, Thresholds};
use crate::vector::{
    contours_geojson, contours_layer, polygons_geojson, polygons_layer, render_svg, rivers_geojson, rivers_layer,
    water_bodies_geojson, water_layer,
};

#[derive(Debug, Parser)]
#[command(name = "terracarta", version, about = "Terrain and water-resource analysis of gridded elevation data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Geojson,
    Csv,
    Svg,
    Asc,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Geojson => "geojson",
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Asc => "asc",
        }
    }
}

#[derive(Debug, Args)]
struct Shared {
    /// Elevation grid in ARC/INFO ASCII format
    #[arg(long, value_name = "PATH")]
    dem: PathBuf,
    /// Output directory, created if missing
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Output format
    #[arg(long, value_name = "FMT")]
    format: Option<Format>,
    /// File of `key = value` settings; command-line flags take precedence
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Grid CRS: `geographic` or `utm:<zone><N|S>`, e.g. `utm:43N`
    #[arg(long, value_name = "CRS")]
    crs: Option<Crs>,
}

impl Shared {
    fn load(&self) -> Result<Grid> {
        read_ascii_grid(&self.dem, self.crs)
    }

    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            let names: Vec<&str> = allowed.iter().map(|f| f.ext()).collect();
            Err(Error::InvalidParameter(format!(
                "format {} is not available here (choose {})",
                f.ext(),
                names.join(", ")
            )))
        }
    }
}

#[derive(Debug, Args)]
struct WaterArgs {
    /// Steepest slope, in degrees, still counted as standing water
    #[arg(long, value_name = "DEG", default_value_t = 1.0)]
    max_slope: f64,
    /// Smallest water body kept, in hectares
    #[arg(long, value_name = "HA", default_value_t = 5.0)]
    min_area: f64,
}

impl WaterArgs {
    fn params(&self) -> Result<crate::hydro::WaterParams> {
        positive("max-slope", self.max_slope)?;
        if !(self.min_area >= 0.0 && self.min_area.is_finite()) {
            return Err(Error::InvalidParameter(format!("min-area must be non-negative, got {}", self.min_area)));
        }
        Ok(crate::hydro::WaterParams { max_slope_deg: self.max_slope, min_area_ha: self.min_area })
    }
}

#[derive(Debug, Args)]
struct RiverArgs {
    /// Flow accumulation, in cells, at which a channel starts
    #[arg(long, value_name = "CELLS", default_value_t = DEFAULT_RIVER_THRESHOLD)]
    threshold: u64,
    /// Channel start as upstream area in km²; overrides --threshold
    #[arg(long, value_name = "KM2")]
    threshold_km2: Option<f64>,
}

impl RiverArgs {
    fn cells(&self, dem: &Grid) -> Result<u64> {
        match self.threshold_km2 {
            None if self.threshold == 0 => Err(Error::InvalidParameter("threshold must be at least 1".into())),
            None => Ok(self.threshold),
            Some(km2) => {
                positive("threshold-km2", km2)?;
                let mean_cell_m2 = dem.valid_area_m2() / dem.valid_count().max(1) as f64;
                Ok(((km2 * 1e6 / mean_cell_m2).ceil() as u64).max(1))
            }
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Contour lines at regular intervals
    Contour {
        #[command(flatten)]
        shared: Shared,
        /// Level every interval is counted from
        #[arg(long, value_name = "M", default_value_t = 0.0)]
        base: f64,
        /// Vertical spacing between contour lines
        #[arg(long, value_name = "M", default_value_t = 100.0)]
        interval: f64,
    },
    /// Area per elevation band
    Bands {
        #[command(flatten)]
        shared: Shared,
        /// Ascending band floors, comma separated
        #[arg(long, value_name = "LIST", value_delimiter = ',', required = true)]
        breaks: Vec<f64>,
    },
    /// Slope in degrees as an ASCII grid
    Slope {
        #[command(flatten)]
        shared: Shared,
    },
    /// Polygons of connected equal-valued cells
    Polygonize {
        #[command(flatten)]
        shared: Shared,
        /// Cell adjacency: four or eight
        #[arg(long, value_name = "N", default_value = "four")]
        connectivity: Connectivity,
        /// Classify into bands with these floors first; cells below the first are left out
        #[arg(long, value_name = "LIST", value_delimiter = ',')]
        breaks: Option<Vec<f64>>,
    },
    /// Reservoirs and lakes, with a water inventory
    Water {
        #[command(flatten)]
        shared: Shared,
        #[command(flatten)]
        water: WaterArgs,
        /// District area for the water percentage, in hectares (default: grid area)
        #[arg(long, value_name = "HA")]
        district_area: Option<f64>,
    },
    /// River network from D8 flow accumulation
    Rivers {
        #[command(flatten)]
        shared: Shared,
        #[command(flatten)]
        rivers: RiverArgs,
        /// CSV `name,lon,lat` of points naming the nearest river
        #[arg(long, value_name = "PATH")]
        names: Option<PathBuf>,
    },
    /// Water-scarcity report for villages and zone map
    Scarcity {
        #[command(flatten)]
        shared: Shared,
        /// CSV `name,lon,lat[,elevation_m]`
        #[arg(long, value_name = "PATH")]
        villages: PathBuf,
        #[command(flatten)]
        water: WaterArgs,
        #[command(flatten)]
        rivers: RiverArgs,
        /// Only reservoirs and lakes count as water sources
        #[arg(long)]
        reservoirs_only: bool,
        /// Weight of the distance term
        #[arg(long, value_name = "W", default_value_t = 1.0)]
        w_distance: f64,
        /// Weight of the elevation term
        #[arg(long, value_name = "W", default_value_t = 0.25)]
        w_elevation: f64,
        /// Distance that scores 1, in meters
        #[arg(long, value_name = "M", default_value_t = 5000.0)]
        d_ref: f64,
        /// Lowest score classed critical
        #[arg(long, value_name = "SCORE", default_value_t = 1.0)]
        t1: f64,
        /// Lowest score classed very critical
        #[arg(long, value_name = "SCORE", default_value_t = 2.0)]
        t2: f64,
    },
    /// Elevation profile between two points
    Profile {
        #[command(flatten)]
        shared: Shared,
        /// Start as `lon,lat`
        #[arg(long, value_name = "LON,LAT", value_parser = parse_geo, allow_hyphen_values = true)]
        from: GeoPoint,
        /// End as `lon,lat`
        #[arg(long, value_name = "LON,LAT", value_parser = parse_geo, allow_hyphen_values = true)]
        to: GeoPoint,
        /// Sample spacing in meters
        #[arg(long, value_name = "M", default_value_t = 90.0)]
        step: f64,
    },
    /// Elevation statistics, optionally checked against reference heights
    Stats {
        #[command(flatten)]
        shared: Shared,
        /// CSV `name,lon,lat,elevation_m` of surveyed heights; rows without a height are skipped
        #[arg(long, value_name = "PATH")]
        reference: Option<PathBuf>,
    },
    /// Convert a point between geographic and UTM coordinates
    Transform {
        /// Geographic point `lon,lat` to project
        #[arg(long, value_name = "LON,LAT", value_parser = parse_geo, allow_hyphen_values = true, conflicts_with = "utm")]
        point: Option<GeoPoint>,
        /// UTM point `easting,northing` to unproject; needs --zone
        #[arg(long, value_name = "E,N", value_parser = parse_pair, requires = "zone")]
        utm: Option<(f64, f64)>,
        /// UTM zone such as `43` or `43S` (default: from the longitude)
        #[arg(long, value_name = "ZONE", value_parser = parse_zone)]
        zone: Option<(u8, Hemisphere)>,
        /// File of `key = value` settings
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
    },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated numbers, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("{t:?} is not a number"));
    Ok((num(a)?, num(b)?))
}

fn parse_geo(s: &str) -> std::result::Result<GeoPoint, String> {
    let (lon, lat) = parse_pair(s)?;
    let p = GeoPoint::new(lon, lat);
    if p.is_valid() {
        Ok(p)
    } else {
        Err(format!("({lon}, {lat}) is not a valid lon/lat"))
    }
}

fn parse_zone(s: &str) -> std::result::Result<(u8, Hemisphere), String> {
    let s = s.trim().to_ascii_uppercase();
    let (digits, hemisphere) = match s.strip_suffix('S') {
        Some(d) => (d, Hemisphere::South),
        None => (s.strip_suffix('N').unwrap_or(&s), Hemisphere::North),
    };
    match digits.parse::<u8>() {
        Ok(z) if (1..=60).contains(&z) => Ok((z, hemisphere)),
        _ => Err(format!("{s:?} is not a UTM zone (1-60, optional N or S)")),
    }
}

/// Reads `key = value` lines and turns them into `--key=value` arguments.
/// `true` and `false` switch boolean flags on or leave them off.
fn config_args(path: &Path) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
    let mut args = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Input {
                path: path.to_path_buf(),
                line: n + 1,
                message: format!("expected `key = value`, got {line:?}"),
            });
        };
        let (key, value) = (key.trim().trim_start_matches("--"), value.trim());
        match value {
            "true" => args.push(format!("--{key}").into()),
            "false" => {}
            _ => args.push(format!("--{key}={value}").into()),
        }
    }
    Ok(args)
}

/// Splices settings from any `--config` file in right after the command
/// name, dropping keys that are also given on the command line.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut config = None;
    for (k, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            config = args.get(k + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        }
    }
    let Some(path) = config else { return Ok(args) };
    let Some(cmd) = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')) else {
        return Ok(args);
    };
    let at = cmd + 2;
    let given: Vec<String> = args[at..]
        .iter()
        .filter_map(|a| a.to_str()?.strip_prefix("--").map(|f| f.split('=').next().unwrap_or(f).to_string()))
        .collect();
    let mut out = args[..at].to_vec();
    out.extend(config_args(&path)?.into_iter().filter(|a| {
        let flag = a.to_string_lossy();
        let name = flag.trim_start_matches("--").split('=').next().unwrap_or("").to_string();
        !given.contains(&name)
    }));
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

/// Runs the tool and returns its exit code: 0 on success, 1 for bad input
/// or usage, 2 when an internal invariant fails.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(written) => {
            for line in written {
                println!("{line}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_internal() {
                2
            } else {
                1
            }
        }
    }
}

struct Output {
    dir: PathBuf,
    lines: Vec<String>,
}

impl Output {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::from(e).in_file(dir))?;
        Ok(Output { dir: dir.to_path_buf(), lines: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| Error::from(e).in_file(&path))?;
        self.lines.push(format!("wrote {}", path.display()));
        Ok(())
    }
}

fn execute(command: Command) -> Result<Vec<String>> {
    match command {
        Command::Contour { shared, base, interval } => {
            let format = shared.format(Format::Geojson, &[Format::Geojson, Format::Csv, Format::Svg])?;
            let dem = shared.load()?;
            let set = extract_contours(&dem, ContourLevelSpec::new(base, interval)?)?;
            let crs = dem.header().crs;
            let body = match format {
                Format::Geojson => contours_geojson(&set, crs),
                Format::Svg => render_svg(&[contours_layer(&set, crs)])?,
                _ => {
                    let mut s = String::from("level,vertices,closed\n");
                    for l in &set.lines {
                        let _ = writeln!(s, "{},{},{}", l.level, l.points.len(), l.is_closed());
                    }
                    s
                }
            };
            let mut out = Output::new(&shared.out)?;
            out.write(&format!("contours.{}", format.ext()), &body)?;
            Ok(out.lines)
        }
        Command::Bands { shared, breaks } => {
            shared.format(Format::Csv, &[Format::Csv])?;
            let table = band_areas(&shared.load()?, &breaks)?;
            let mut out = Output::new(&shared.out)?;
            out.write("bands.csv", &table.to_csv()?)?;
            Ok(out.lines)
        }
        Command::Slope { shared } => {
            shared.format(Format::Asc, &[Format::Asc])?;
            let slope = slope_map(&shared.load()?)?;
            let mut out = Output::new(&shared.out)?;
            out.write("slope.asc", &write_ascii_grid(slope.grid()))?;
            Ok(out.lines)
        }
        Command::Polygonize { shared, connectivity, breaks } => {
            let format = shared.format(Format::Geojson, &[Format::Geojson, Format::Csv, Format::Svg])?;
            let mut grid = shared.load()?;
            if let Some(breaks) = breaks {
                band_areas(&grid, &breaks)?;
                let nodata = grid.nodata();
                grid = grid.map_valid(|v| breaks.iter().rev().find(|&&b| b <= v).copied().unwrap_or(nodata))?;
            }
            let polygons = polygonize(&grid, None, connectivity)?;
            let crs = grid.header().crs;
            let body = match format {
                Format::Geojson => polygons_geojson(&polygons, crs),
                Format::Svg => render_svg(&[polygons_layer(&polygons, crs)])?,
                _ => {
                    let mut s = String::from("pixel_value,cell_count,area_ha,holes\n");
                    for p in &polygons {
                        let _ = writeln!(s, "{},{},{:.4},{}", p.pixel_value, p.cell_count, p.area_ha, p.holes.len());
                    }
                    s
                }
            };
            let mut out = Output::new(&shared.out)?;
            out.write(&format!("polygons.{}", format.ext()), &body)?;
            Ok(out.lines)
        }
        Command::Water { shared, water, district_area } => {
            let format = shared.format(Format::Geojson, &[Format::Geojson, Format::Csv, Format::Svg])?;
            let params = water.params()?;
            let dem = shared.load()?;
            let slope = slope_map(&dem)?;
            let bodies = extract_water_bodies(&dem, &slope, params.max_slope_deg, params.min_area_ha)?;
            let district = district_area.unwrap_or(dem.valid_area_m2() / 1e4);
            let crs = dem.header().crs;
            let mut out = Output::new(&shared.out)?;
            match format {
                Format::Geojson => out.write("water_bodies.geojson", &water_bodies_geojson(&bodies, crs))?,
                Format::Svg => out.write("water_bodies.svg", &render_svg(&[water_layer(&bodies, crs)])?)?,
                _ => {}
            }
            out.write("water_inventory.csv", &water_inventory(bodies, vec![], district)?.to_csv())?;
            Ok(out.lines)
        }
        Command::Rivers { shared, rivers, names } => {
            let format = shared.format(Format::Geojson, &[Format::Geojson, Format::Csv, Format::Svg])?;
            let dem = shared.load()?;
            let flow = flow_accumulation(&flow_directions(&fill_sinks(&dem))?)?;
            let mut segments = extract_rivers(&flow, rivers.cells(&dem)?)?;
            if let Some(path) = names {
                let seeds = read_villages(&path)?
                    .into_iter()
                    .map(|v| Ok((v.name, dem.project(v.location)?)))
                    .collect::<Result<Vec<_>>>()?;
                name_rivers(&mut segments, dem.header(), &seeds);
            }
            let crs = dem.header().crs;
            let body = match format {
                Format::Geojson => rivers_geojson(&segments, crs),
                Format::Svg => render_svg(&[rivers_layer(&segments, crs)])?,
                _ => {
                    let mut s = String::from("name,length_km,cells\n");
                    for r in &segments {
                        let name = r.name.as_deref().map(crate::hydro::water::csv_field).unwrap_or_default();
                        let _ = writeln!(s, "{name},{:.4},{}", r.length_km, r.cells.len());
                    }
                    s
                }
            };
            let mut out = Output::new(&shared.out)?;
            out.write(&format!("rivers.{}", format.ext()), &body)?;
            Ok(out.lines)
        }
        Command::Scarcity {
            shared,
            villages,
            water,
            rivers,
            reservoirs_only,
            w_distance,
            w_elevation,
            d_ref,
            t1,
            t2,
        } => {
            if shared.format.is_some() {
                return Err(Error::InvalidParameter(
                    "scarcity always writes report.csv, zones.geojson and map.svg; drop --format".into(),
                ));
            }
            let dem = shared.load()?;
            let weights = ScoreWeights { w_distance, w_elevation, d_ref_m: d_ref };
            weights.validate()?;
            let options = ScarcityOptions {
                water: water.params()?,
                river_threshold: rivers.cells(&dem)?,
                include_rivers: !reservoirs_only,
                model: ScarcityModel { weights, thresholds: Thresholds::new(t1, t2)? },
            };
            let run = run_scarcity(&dem, &read_villages(&villages)?, &options)?;
            let mut out = Output::new(&shared.out)?;
            out.write("report.csv", &run.report_csv())?;
            out.write("zones.geojson", &run.zones_geojson())?;
            out.write("map.svg", &run.map_svg()?)?;
            Ok(out.lines)
        }
        Command::Profile { shared, from, to, step } => {
            shared.format(Format::Csv, &[Format::Csv])?;
            let samples = terrain_profile(&shared.load()?, from, to, step)?;
            let mut s = String::from("distance_m,lon,lat,elevation_m\n");
            for p in samples {
                let z = p.elevation.map(|z| format!("{z:.2}")).unwrap_or_default();
                let _ = writeln!(s, "{:.3},{:.7},{:.7},{z}", p.distance_m, p.point.lon, p.point.lat);
            }
            let mut out = Output::new(&shared.out)?;
            out.write("profile.csv", &s)?;
            Ok(out.lines)
        }
        Command::Stats { shared, reference } => {
            shared.format(Format::Csv, &[Format::Csv])?;
            let dem = shared.load()?;
            let st = elevation_stats(&dem)?;
            let mut s = String::from("metric,value\n");
            let _ = writeln!(s, "cells,{}", st.count);
            let _ = writeln!(s, "area_ha,{:.4}", dem.valid_area_m2() / 1e4);
            let _ = writeln!(s, "min_m,{}", st.min);
            let _ = writeln!(s, "max_m,{}", st.max);
            let _ = writeln!(s, "mean_m,{:.4}", st.mean);
            let _ = writeln!(s, "std_dev_m,{:.4}", st.std_dev);
            if let Some(path) = reference {
                let rows = read_villages(&path)?;
                let points: Vec<(GeoPoint, f64)> =
                    rows.iter().filter_map(|v| v.elevation.map(|z| (v.location, z))).collect();
                let unsurveyed = rows.len() - points.len();
                let mut acc = vertical_accuracy(&dem, &points)?;
                acc.skipped += unsurveyed;
                let _ = writeln!(s, "reference_points,{}", acc.n);
                let _ = writeln!(s, "reference_skipped,{}", acc.skipped);
                let _ = writeln!(s, "mean_error_m,{:.4}", acc.mean_error);
                let _ = writeln!(s, "error_std_dev_m,{:.4}", acc.std_dev);
                let _ = writeln!(s, "rmse_m,{:.4}", acc.rmse);
            }
            print!("{s}");
            let mut out = Output::new(&shared.out)?;
            out.write("stats.csv", &s)?;
            Ok(out.lines)
        }
        Command::Transform { point, utm, zone, .. } => match (point, utm) {
            (Some(p), None) => {
                let (z, hemi) = match zone {
                    Some(z) => z,
                    None => (zone_for_lon(p.lon), if p.lat < 0.0 { Hemisphere::South } else { Hemisphere::North }),
                };
                let u = geo_to_utm_in(p, z, hemi)?;
                Ok(vec![format!(
                    "easting,northing,zone\n{:.3},{:.3},{}",
                    u.easting,
                    u.northing,
                    Crs::Utm { zone: z, hemisphere: hemi }
                )])
            }
            (None, Some((easting, northing))) => {
                let (zone, hemisphere) = zone.expect("clap requires --zone with --utm");
                let g = utm_to_geo(UtmPoint { easting, northing, zone, hemisphere })?;
                Ok(vec![format!("lon,lat\n{:.9},{:.9}", g.lon, g.lat)])
            }
            _ => Err(Error::InvalidParameter("give either --point or --utm".into())),
        },
    }
}
