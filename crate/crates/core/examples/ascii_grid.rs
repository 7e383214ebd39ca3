//! Reads an ASCII grid, prints its header and summary statistics, and writes
//! it back out.

use terracarta::contour::elevation_stats;
use terracarta::raster::{read_ascii_grid, write_ascii_grid};

const DEM: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/mini_district.asc");

fn main() -> terracarta::Result<()> {
    let dem = read_ascii_grid(DEM, None)?;
    let h = dem.header();
    println!("{} x {} cells, crs {}, lower-left ({}, {})", h.ncols, h.nrows, h.crs, h.xllcorner, h.yllcorner);

    let stats = elevation_stats(&dem)?;
    println!("elevation {:.1}..{:.1} m, mean {:.1} m, sd {:.1} m", stats.min, stats.max, stats.mean, stats.std_dev);
    println!("area {:.1} ha", dem.valid_area_m2() / 1e4);

    let text = write_ascii_grid(&dem);
    for line in text.lines().take(6) {
        println!("  {line}");
    }
    Ok(())
}
