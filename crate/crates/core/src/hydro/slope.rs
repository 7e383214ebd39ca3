use crate::error::{Error, Result};
use crate::raster::{Grid, DEFAULT_NODATA};

/// Slope in degrees from horizontal; border cells and cells next to nodata
/// are nodata.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeGrid(Grid);

impl SlopeGrid {
    pub fn grid(&self) -> &Grid {
        &self.0
    }

    pub fn into_grid(self) -> Grid {
        self.0
    }

    pub fn slope_deg(&self, row: usize, col: usize) -> Option<f64> {
        self.0.get(row, col)
    }
}

/// Horn's 3x3 finite-difference gradient at an interior cell, in meters per
/// meter. `dz/dx` is positive eastward, `dz/dy` positive southward.
pub fn horn_gradient(dem: &Grid, row: usize, col: usize) -> Option<(f64, f64)> {
    if row == 0 || col == 0 || row + 1 >= dem.nrows() || col + 1 >= dem.ncols() {
        return None;
    }
    let z = |dr: usize, dc: usize| dem.get(row + dr - 1, col + dc - 1);
    let (a, b, c) = (z(0, 0)?, z(0, 1)?, z(0, 2)?);
    let (d, _e, f) = (z(1, 0)?, z(1, 1)?, z(1, 2)?);
    let (g, h, i) = (z(2, 0)?, z(2, 1)?, z(2, 2)?);
    let (dx, dy) = dem.header().cell_size_m(row);
    let dzdx = ((c + 2.0 * f + i) - (a + 2.0 * d + g)) / (8.0 * dx);
    let dzdy = ((g + 2.0 * h + i) - (a + 2.0 * b + c)) / (8.0 * dy);
    Some((dzdx, dzdy))
}

pub fn slope_map(dem: &Grid) -> Result<SlopeGrid> {
    if dem.nrows() < 3 || dem.ncols() < 3 {
        return Err(Error::GridTooSmall(format!(
            "slope needs at least 3x3 cells, got {}x{}",
            dem.ncols(),
            dem.nrows()
        )));
    }
    let header = dem.header().with_nodata(DEFAULT_NODATA);
    let grid = Grid::from_fn(header, |r, c| match horn_gradient(dem, r, c) {
        Some((gx, gy)) => gx.hypot(gy).atan().to_degrees(),
        None => DEFAULT_NODATA,
    })?;
    Ok(SlopeGrid(grid))
}
