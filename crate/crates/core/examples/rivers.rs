//! Fills sinks, routes flow and extracts a named river network.

use terracarta::hydro::{extract_rivers, fill_sinks, flow_accumulation, flow_directions, name_rivers};
use terracarta::raster::{read_ascii_grid, Coord};

const DEM: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/mini_district.asc");

fn main() -> terracarta::Result<()> {
    let dem = read_ascii_grid(DEM, None)?;
    let filled = fill_sinks(&dem);
    let flow = flow_accumulation(&flow_directions(&filled)?)?;
    let acc = flow.accumulation().expect("accumulation was just computed");
    println!("largest catchment drains {} cells", acc.iter().max().unwrap_or(&0));

    let mut rivers = extract_rivers(&flow, 40)?;
    name_rivers(&mut rivers, dem.header(), &[("Manjra".into(), Coord::new(76.40875, 18.31625))]);

    let total: f64 = rivers.iter().map(|r| r.length_km).sum();
    println!("{} segments, {total:.2} km", rivers.len());
    for r in &rivers {
        println!("  {:<8} {:>5.2} km  {} cells", r.name.as_deref().unwrap_or("-"), r.length_km, r.cells.len());
    }
    Ok(())
}
