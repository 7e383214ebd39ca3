//! Rebuilds a DEM from its own contour lines and reports how close the
//! reconstruction comes.

use terracarta::contour::{dem_from_contours, extract_contours, ContourLevelSpec};
use terracarta::raster::read_ascii_grid;

const DEM: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/mini_district.asc");

fn main() -> terracarta::Result<()> {
    let dem = read_ascii_grid(DEM, None)?;
    for interval in [2.0, 5.0, 10.0] {
        let contours = extract_contours(&dem, ContourLevelSpec::new(0.0, interval)?)?;
        let rebuilt = dem_from_contours(&contours, dem.header())?;

        let errors: Vec<f64> = dem
            .values()
            .iter()
            .zip(rebuilt.values())
            .filter(|(a, b)| !dem.is_nodata(**a) && !rebuilt.is_nodata(**b))
            .map(|(a, b)| b - a)
            .collect();
        let rmse = (errors.iter().map(|e| e * e).sum::<f64>() / errors.len().max(1) as f64).sqrt();
        let worst = errors.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        println!(
            "interval {interval:>4} m: {:>4} lines, {} of {} cells rebuilt, rmse {rmse:.2} m, worst {worst:.2} m",
            contours.len(),
            errors.len(),
            dem.valid_count()
        );
    }
    Ok(())
}
