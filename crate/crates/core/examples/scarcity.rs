//! Runs the full water-scarcity assessment on the sample district and
//! writes the report, zone layer and map.

use terracarta::pipeline::{run_scarcity, ScarcityOptions};
use terracarta::raster::read_ascii_grid;
use terracarta::scarcity::{read_villages, ScoreWeights, Thresholds};

const DEM: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/mini_district.asc");
const VILLAGES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/villages.csv");

fn main() -> terracarta::Result<()> {
    let dem = read_ascii_grid(DEM, None)?;
    let villages = read_villages(VILLAGES)?;

    // A small district needs a shorter reference distance than the default.
    let mut options = ScarcityOptions::default();
    options.model.weights = ScoreWeights { d_ref_m: 1500.0, ..ScoreWeights::default() };
    options.model.thresholds = Thresholds::new(0.5, 1.2)?;

    let run = run_scarcity(&dem, &villages, &options)?;
    print!("{}", run.report_csv());
    println!(
        "{} water bodies, {} river segments, {} zone polygons",
        run.hydrology.bodies.len(),
        run.hydrology.rivers.len(),
        run.zones.len()
    );

    let dir = std::env::temp_dir();
    std::fs::write(dir.join("report.csv"), run.report_csv())?;
    std::fs::write(dir.join("zones.geojson"), run.zones_geojson())?;
    std::fs::write(dir.join("map.svg"), run.map_svg()?)?;
    println!("wrote report.csv, zones.geojson and map.svg to {}", dir.display());
    Ok(())
}
