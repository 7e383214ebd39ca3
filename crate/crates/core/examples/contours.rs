//! Extracts 10 m contours from the sample district and writes them as
//! GeoJSON and SVG.

use terracarta::contour::{extract_contours, ContourLevelSpec};
use terracarta::raster::read_ascii_grid;
use terracarta::vector::{contours_geojson, contours_layer, render_svg};

const DEM: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/mini_district.asc");

fn main() -> terracarta::Result<()> {
    let dem = read_ascii_grid(DEM, None)?;
    let crs = dem.header().crs;
    let set = extract_contours(&dem, ContourLevelSpec::new(0.0, 10.0)?)?;

    for level in set.levels() {
        let lines: Vec<_> = set.lines.iter().filter(|l| l.level == level).collect();
        let vertices: usize = lines.iter().map(|l| l.points.len()).sum();
        println!("{level:>6} m  {:>3} lines  {vertices:>5} vertices", lines.len());
    }

    let dir = std::env::temp_dir();
    std::fs::write(dir.join("contours.geojson"), contours_geojson(&set, crs))?;
    std::fs::write(dir.join("contours.svg"), render_svg(&[contours_layer(&set, crs)])?)?;
    println!("wrote contours.geojson and contours.svg to {}", dir.display());
    Ok(())
}
