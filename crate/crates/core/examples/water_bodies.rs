//! Finds reservoirs and lakes in the sample district and prints the water
//! inventory.

use terracarta::hydro::{extract_water_bodies, slope_map, water_inventory, WaterParams};
use terracarta::raster::read_ascii_grid;

const DEM: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/mini_district.asc");

fn main() -> terracarta::Result<()> {
    let dem = read_ascii_grid(DEM, None)?;
    let slope = slope_map(&dem)?;
    let params = WaterParams::default();
    let bodies = extract_water_bodies(&dem, &slope, params.max_slope_deg, params.min_area_ha)?;

    for (k, b) in bodies.iter().enumerate() {
        println!("body_{}: {:.2} ha at {:.1} m, {} cells", k + 1, b.area_ha(), b.mean_elevation, b.cells.len());
    }
    let district_ha = dem.valid_area_m2() / 1e4;
    let inventory = water_inventory(bodies, Vec::new(), district_ha)?;
    print!("{}", inventory.to_csv());
    println!("{}% of the district is open water", inventory.water_fraction_pct);
    Ok(())
}
