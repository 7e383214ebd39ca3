//! Slope in degrees, summarised as a histogram.

use terracarta::hydro::slope_map;
use terracarta::raster::read_ascii_grid;

const DEM: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/mini_district.asc");

fn main() -> terracarta::Result<()> {
    let dem = read_ascii_grid(DEM, None)?;
    let slope = slope_map(&dem)?;

    let mut bins = [0usize; 6];
    for s in slope.grid().valid_values() {
        bins[((s / 1.0) as usize).min(bins.len() - 1)] += 1;
    }
    for (k, n) in bins.iter().enumerate() {
        let label = if k + 1 == bins.len() { format!("{k}+ deg") } else { format!("{k}-{} deg", k + 1) };
        println!("{label:>9}  {n:>5}  {}", "#".repeat(n / 40));
    }
    Ok(())
}
