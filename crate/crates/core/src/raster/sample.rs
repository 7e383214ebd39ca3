//! Point sampling and terrain profiles.

use super::{Coord, Crs, GeoPoint, Grid};
use crate::error::{Error, Result};
use crate::geodesy::{geo_to_utm_in, great_circle_distance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleMethod {
    /// Value of the containing cell.
    Nearest,
    /// Bilinear blend of the four surrounding cell centers.
    #[default]
    Bilinear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub distance_m: f64,
    /// `None` where the profile crosses nodata.
    pub elevation: Option<f64>,
    pub point: GeoPoint,
}

impl Grid {
    /// Position of a geographic point in this grid's CRS.
    pub fn project(&self, p: GeoPoint) -> Result<Coord> {
        match self.header().crs {
            Crs::GeographicWgs84 => Ok(Coord::new(p.lon, p.lat)),
            Crs::Utm { zone, hemisphere } => {
                let u = geo_to_utm_in(p, zone, hemisphere)?;
                Ok(Coord::new(u.easting, u.northing))
            }
        }
    }

    /// Samples at a position in the grid's own CRS. `Ok(None)` signals nodata.
    pub fn sample(&self, at: Coord, method: SampleMethod) -> Result<Option<f64>> {
        let h = self.header();
        if !h.contains(at) || !at.x.is_finite() || !at.y.is_finite() {
            return Err(Error::OutOfExtent { x: at.x, y: at.y });
        }
        // Fractional column/row measured from the north-west corner.
        let fc = (at.x - h.xllcorner) / h.cellsize;
        let fr = (h.ytop() - at.y) / h.cellsize;
        match method {
            SampleMethod::Nearest => {
                let col = (fc.floor() as usize).min(h.ncols - 1);
                let row = (fr.floor() as usize).min(h.nrows - 1);
                Ok(self.get(row, col))
            }
            SampleMethod::Bilinear => {
                let (c0, tx) = lerp_index(fc - 0.5, h.ncols);
                let (r0, ty) = lerp_index(fr - 0.5, h.nrows);
                let c1 = (c0 + 1).min(h.ncols - 1);
                let r1 = (r0 + 1).min(h.nrows - 1);
                let corners = [self.get(r0, c0), self.get(r0, c1), self.get(r1, c0), self.get(r1, c1)];
                let [Some(z00), Some(z01), Some(z10), Some(z11)] = corners else {
                    return Ok(None);
                };
                let top = z00 + (z01 - z00) * tx;
                let bottom = z10 + (z11 - z10) * tx;
                Ok(Some(top + (bottom - top) * ty))
            }
        }
    }
}

/// Splits a fractional center-lattice coordinate into a base index and a
/// blend weight, clamping to the outermost centers.
fn lerp_index(f: f64, n: usize) -> (usize, f64) {
    if n == 1 || f <= 0.0 {
        return (0, 0.0);
    }
    let last = (n - 1) as f64;
    if f >= last {
        return (n - 2, 1.0);
    }
    let i = f.floor();
    (i as usize, f - i)
}

/// Elevation at a geographic point. For UTM grids the point is projected into
/// the grid's zone first.
pub fn sample_elevation(grid: &Grid, p: GeoPoint, method: SampleMethod) -> Result<Option<f64>> {
    grid.sample(grid.project(p)?, method)
}

/// Samples the segment `a -> b` every `step_m` meters of great-circle
/// distance, always ending with the exact endpoint. Intermediate points are
/// interpolated linearly in longitude/latitude. Equal endpoints give a single
/// sample.
pub fn terrain_profile(grid: &Grid, a: GeoPoint, b: GeoPoint, step_m: f64) -> Result<Vec<ProfileSample>> {
    if !(step_m.is_finite() && step_m > 0.0) {
        return Err(Error::InvalidParameter(format!("profile step must be positive, got {step_m}")));
    }
    for p in [a, b] {
        let c = grid.project(p)?;
        if !grid.header().contains(c) {
            return Err(Error::OutOfExtent { x: c.x, y: c.y });
        }
    }
    let total = great_circle_distance(a, b);
    let at = |distance_m: f64, point: GeoPoint| -> Result<ProfileSample> {
        Ok(ProfileSample { distance_m, elevation: sample_elevation(grid, point, SampleMethod::Bilinear)?, point })
    };
    if total == 0.0 {
        return Ok(vec![at(0.0, a)?]);
    }
    let mut samples = Vec::with_capacity((total / step_m) as usize + 2);
    let mut k = 0usize;
    loop {
        let d = k as f64 * step_m;
        if d >= total {
            break;
        }
        let t = d / total;
        let p = GeoPoint::new(a.lon + (b.lon - a.lon) * t, a.lat + (b.lat - a.lat) * t);
        samples.push(at(d, p)?);
        k += 1;
    }
    samples.push(at(total, b)?);
    Ok(samples)
}
