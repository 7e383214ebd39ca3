//! Contour lines, elevation bands and DEM statistics.

mod bands;
mod interpolate;
mod marching;
mod stats;

pub use bands::{band_areas, BandRow, BandTable};
pub use interpolate::{dem_from_contours, IdwParams};
pub use marching::{chain_segments, level_segments, ContourLine, Crossing, LatticeEdge, Segment};
pub use stats::{elevation_stats, vertical_accuracy, AccuracyStats, ElevationStats};

use crate::error::{Error, Result};
use crate::raster::Grid;

/// Contours start at `base` and repeat every `interval` meters upward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourLevelSpec {
    pub base: f64,
    pub interval: f64,
}

impl ContourLevelSpec {
    pub fn new(base: f64, interval: f64) -> Result<Self> {
        if !(interval.is_finite() && interval > 0.0) || !base.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "contour interval must be positive and base finite (base {base}, interval {interval})"
            )));
        }
        Ok(ContourLevelSpec { base, interval })
    }
}

/// Levels `base + k * interval`, `k >= 0`, that fall inside `[zmin, zmax]`,
/// ascending.
pub fn contour_levels(zmin: f64, zmax: f64, spec: ContourLevelSpec) -> Vec<f64> {
    if !(zmin <= zmax) {
        return Vec::new();
    }
    let ContourLevelSpec { base, interval } = spec;
    let first = ((zmin - base) / interval).ceil().max(0.0);
    let last = ((zmax - base) / interval).floor();
    if last < first {
        return Vec::new();
    }
    let mut levels = Vec::with_capacity((last - first) as usize + 1);
    let mut k = first;
    while k <= last {
        let z = base + k * interval;
        if z >= zmin && z <= zmax && levels.last().is_none_or(|&p| z > p) {
            levels.push(z);
        }
        k += 1.0;
    }
    levels
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContourSet {
    pub lines: Vec<ContourLine>,
}

impl ContourSet {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Distinct levels present, ascending.
    pub fn levels(&self) -> Vec<f64> {
        let mut levels: Vec<f64> = self.lines.iter().map(|l| l.level).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        levels
    }
}

/// Extracts every contour of `spec` that falls within the grid's valid range.
pub fn extract_contours(grid: &Grid, spec: ContourLevelSpec) -> Result<ContourSet> {
    if grid.nrows() < 2 || grid.ncols() < 2 {
        return Err(Error::GridTooSmall(format!(
            "contouring needs at least 2x2 cells, got {}x{}",
            grid.ncols(),
            grid.nrows()
        )));
    }
    let (zmin, zmax) = grid.min_max().ok_or_else(|| Error::GridTooSmall("grid holds no valid cells".into()))?;
    let nudge = 1e-9 * spec.interval;
    let lines = contour_levels(zmin, zmax, spec)
        .into_iter()
        .flat_map(|level| chain_segments(level, &level_segments(grid, level, nudge)))
        .collect();
    Ok(ContourSet { lines })
}
