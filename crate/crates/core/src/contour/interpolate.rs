//! Rebuilding a DEM from contour lines by inverse-distance weighting.

use super::ContourSet;
use crate::error::{Error, Result};
use crate::raster::{Coord, Crs, Grid, GridHeader, METERS_PER_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdwParams {
    pub power: f64,
    /// Number of nearest contour vertices blended per cell.
    pub neighbours: usize,
    /// Search radius in target cells; cells with no vertex this close become nodata.
    pub cutoff_cells: f64,
}

impl Default for IdwParams {
    fn default() -> Self {
        IdwParams { power: 2.0, neighbours: 12, cutoff_cells: 10.0 }
    }
}

#[derive(Clone, Copy)]
struct Vertex {
    x: f64,
    y: f64,
    z: f64,
}

/// Local metric frame shared by the contour vertices and the target cells.
struct Frame {
    origin: Coord,
    kx: f64,
    ky: f64,
}

impl Frame {
    fn new(h: &GridHeader) -> Frame {
        let origin = Coord::new((h.xllcorner + h.xmax()) / 2.0, (h.yllcorner + h.ytop()) / 2.0);
        match h.crs {
            Crs::Utm { .. } => Frame { origin, kx: 1.0, ky: 1.0 },
            Crs::GeographicWgs84 => {
                Frame { origin, kx: METERS_PER_DEGREE * origin.y.to_radians().cos(), ky: METERS_PER_DEGREE }
            }
        }
    }

    fn to_m(&self, c: Coord) -> (f64, f64) {
        ((c.x - self.origin.x) * self.kx, (c.y - self.origin.y) * self.ky)
    }
}

fn densified_vertices(contours: &ContourSet, frame: &Frame, spacing: f64) -> Vec<Vertex> {
    let mut out = Vec::new();
    for line in &contours.lines {
        let pts: Vec<(f64, f64)> = line.points.iter().map(|&p| frame.to_m(p)).collect();
        if let Some(&(x, y)) = pts.first() {
            out.push(Vertex { x, y, z: line.level });
        }
        for w in pts.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            let len = (x1 - x0).hypot(y1 - y0);
            let steps = (len / spacing).ceil().max(1.0) as usize;
            for k in 1..=steps {
                let t = k as f64 / steps as f64;
                out.push(Vertex { x: x0 + (x1 - x0) * t, y: y0 + (y1 - y0) * t, z: line.level });
            }
        }
    }
    out
}

/// Uniform bucket index over vertices for fixed-radius queries.
struct Buckets {
    size: f64,
    x0: f64,
    y0: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
}

impl Buckets {
    fn new(vertices: &[Vertex], size: f64) -> Buckets {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for v in vertices {
            x0 = x0.min(v.x);
            y0 = y0.min(v.y);
            x1 = x1.max(v.x);
            y1 = y1.max(v.y);
        }
        let nx = ((x1 - x0) / size).floor() as usize + 1;
        let ny = ((y1 - y0) / size).floor() as usize + 1;
        let mut cells = vec![Vec::new(); nx * ny];
        for (i, v) in vertices.iter().enumerate() {
            let bx = ((v.x - x0) / size) as usize;
            let by = ((v.y - y0) / size) as usize;
            cells[by.min(ny - 1) * nx + bx.min(nx - 1)].push(i as u32);
        }
        Buckets { size, x0, y0, nx, ny, cells }
    }

    fn around(&self, x: f64, y: f64) -> impl Iterator<Item = u32> + '_ {
        let bx = ((x - self.x0) / self.size).floor() as i64;
        let by = ((y - self.y0) / self.size).floor() as i64;
        (by - 1..=by + 1)
            .flat_map(move |j| (bx - 1..=bx + 1).map(move |i| (i, j)))
            .filter(|&(i, j)| i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny)
            .flat_map(move |(i, j)| self.cells[j as usize * self.nx + i as usize].iter().copied())
    }
}

/// Interpolates a grid on `target` from contour vertices. Polylines are first
/// densified so that vertices are at most one cell apart. Each cell takes the
/// inverse-distance-weighted mean of its nearest vertices within the cutoff;
/// a cell that coincides with vertices takes their level directly.
pub fn dem_from_contours(contours: &ContourSet, target: &GridHeader) -> Result<Grid> {
    dem_from_contours_with(contours, target, IdwParams::default())
}

pub fn dem_from_contours_with(contours: &ContourSet, target: &GridHeader, params: IdwParams) -> Result<Grid> {
    target.validate()?;
    if params.neighbours == 0 || !(params.cutoff_cells > 0.0) || !(params.power > 0.0) {
        return Err(Error::InvalidParameter("IDW needs positive power, neighbours and cutoff".into()));
    }
    let frame = Frame::new(target);
    let cell_m = target.cell_size_m(target.nrows / 2).1;
    let vertices = densified_vertices(contours, &frame, cell_m);
    if vertices.is_empty() {
        return Err(Error::EmptyContourSet);
    }
    let cutoff = params.cutoff_cells * cell_m;
    let buckets = Buckets::new(&vertices, cutoff);
    let mut near: Vec<(f64, u32)> = Vec::new();

    Grid::from_fn(*target, |row, col| {
        let (x, y) = frame.to_m(target.cell_center(row, col));
        near.clear();
        near.extend(buckets.around(x, y).filter_map(|i| {
            let v = vertices[i as usize];
            let d2 = (v.x - x).powi(2) + (v.y - y).powi(2);
            (d2 <= cutoff * cutoff).then_some((d2, i))
        }));
        if near.is_empty() {
            return target.nodata;
        }
        near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        near.truncate(params.neighbours);
        idw(&near, &vertices, params.power)
    })
}

fn idw(near: &[(f64, u32)], vertices: &[Vertex], power: f64) -> f64 {
    let exact: Vec<f64> = near.iter().filter(|(d2, _)| *d2 == 0.0).map(|&(_, i)| vertices[i as usize].z).collect();
    if !exact.is_empty() {
        let z0 = exact[0];
        return z0 + exact.iter().map(|z| z - z0).sum::<f64>() / exact.len() as f64;
    }
    // Blend deviations from the first level so a constant field is reproduced
    // bit for bit.
    let z0 = vertices[near[0].1 as usize].z;
    let (mut num, mut den) = (0.0, 0.0);
    for &(d2, i) in near {
        let w = d2.powf(-power / 2.0);
        num += w * (vertices[i as usize].z - z0);
        den += w;
    }
    z0 + num / den
}
