//! Turns a small classified grid into polygons, with four and eight
//! connectivity.

use terracarta::polygon::{polygonize, Connectivity};
use terracarta::raster::{Crs, Grid, GridHeader, Hemisphere};

fn main() -> terracarta::Result<()> {
    #[rustfmt::skip]
    let classes = [
        1., 1., 2., 2., 2.,
        1., 2., 1., 1., 2.,
        2., 1., 1., 1., 2.,
        2., 2., 2., 2., 2.,
        3., 3., 2., 1., 1.,
    ];
    let crs = Crs::Utm { zone: 43, hemisphere: Hemisphere::North };
    let header = GridHeader::new(5, 5, 400_000.0, 2_000_000.0, 30.0, crs)?;
    let grid = Grid::new(header, classes.to_vec())?;

    for connectivity in [Connectivity::Four, Connectivity::Eight] {
        let polygons = polygonize(&grid, None, connectivity)?;
        println!("{connectivity:?}: {} polygons", polygons.len());
        for p in &polygons {
            println!(
                "  value {} cells {:>2} area {:.2} ha, {} outer vertices, {} holes",
                p.pixel_value,
                p.cell_count,
                p.area_ha,
                p.outer_ring.len(),
                p.holes.len()
            );
        }
    }
    Ok(())
}
