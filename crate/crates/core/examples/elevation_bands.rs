//! Area of the sample district in each 25 m elevation band.

use terracarta::contour::band_areas;
use terracarta::raster::read_ascii_grid;

const DEM: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/mini_district.asc");

fn main() -> terracarta::Result<()> {
    let dem = read_ascii_grid(DEM, None)?;
    let breaks: Vec<f64> = (0..6).map(|k| 450.0 + 25.0 * k as f64).collect();
    let table = band_areas(&dem, &breaks)?;

    print!("{}", table.to_csv()?);
    println!("total {:.2} ha over {} cells", table.total_area_ha(), table.total_cells());
    Ok(())
}
