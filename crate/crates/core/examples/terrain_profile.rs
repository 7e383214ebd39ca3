//! Elevation along a straight line across the sample district.

use terracarta::raster::{read_ascii_grid, terrain_profile, GeoPoint};

const DEM: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/mini_district.asc");

fn main() -> terracarta::Result<()> {
    let dem = read_ascii_grid(DEM, None)?;
    let from = GeoPoint::new(76.425, 18.352);
    let to = GeoPoint::new(76.425, 18.301);
    let profile = terrain_profile(&dem, from, to, 250.0)?;

    for s in &profile {
        match s.elevation {
            Some(z) => {
                println!("{:>7.0} m  {z:>6.1} m  {}", s.distance_m, "=".repeat(((z - 440.0) / 2.0).max(0.0) as usize))
            }
            None => println!("{:>7.0} m  nodata", s.distance_m),
        }
    }
    Ok(())
}
