//! Raster polygonization: one polygon per connected region of equal-valued
//! cells, traced along cell edges.
//!
//! Outer rings run counter-clockwise and holes clockwise (in map coordinates,
//! y up). Where two cells of a region touch only at a corner, the ring either
//! passes through the corner (eight-connectivity) or keeps the cells apart
//! (four-connectivity).

use std::collections::HashMap;

use crate::error::Result;
use crate::raster::{Coord, Crs, Grid, GridHeader, MaskGrid, METERS_PER_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    #[default]
    Four,
    Eight,
}

impl std::str::FromStr for Connectivity {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "4" | "four" => Ok(Connectivity::Four),
            "8" | "eight" => Ok(Connectivity::Eight),
            _ => Err(crate::Error::InvalidParameter(format!("unknown connectivity {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionPolygon {
    /// Closed ring (first vertex repeated last), counter-clockwise.
    pub outer_ring: Vec<Coord>,
    /// Closed rings, clockwise.
    pub holes: Vec<Vec<Coord>>,
    pub pixel_value: f64,
    pub cell_count: usize,
    /// Sum of member cell areas.
    pub area_ha: f64,
}

impl RegionPolygon {
    /// Area from the ring geometry (outer minus holes) by the shoelace
    /// formula. UTM coordinates are used as-is; geographic rings are projected
    /// equirectangularly about the outer ring's mean vertex, so the result is
    /// approximate there.
    pub fn shoelace_area_ha(&self, crs: Crs) -> f64 {
        let n = self.outer_ring.len().saturating_sub(1).max(1) as f64;
        let cy = self.outer_ring.iter().take(n as usize).map(|p| p.y).sum::<f64>() / n;
        let origin = self.outer_ring.first().copied().unwrap_or(Coord::new(0.0, 0.0));
        let (kx, ky) = match crs {
            Crs::Utm { .. } => (1.0, 1.0),
            Crs::GeographicWgs84 => (METERS_PER_DEGREE * cy.to_radians().cos(), METERS_PER_DEGREE),
        };
        let ring_area = |ring: &[Coord]| -> f64 {
            let pts: Vec<(f64, f64)> = ring.iter().map(|p| ((p.x - origin.x) * kx, (p.y - origin.y) * ky)).collect();
            signed_area(&pts)
        };
        let mut a = ring_area(&self.outer_ring);
        for h in &self.holes {
            a += ring_area(h);
        }
        a / 10_000.0
    }
}

/// Area of a polygon in hectares: the raster-sum recorded at polygonization.
pub fn polygon_area_ha(poly: &RegionPolygon) -> f64 {
    poly.area_ha
}

fn signed_area(pts: &[(f64, f64)]) -> f64 {
    let mut s = 0.0;
    for w in pts.windows(2) {
        s += w[0].0 * w[1].1 - w[1].0 * w[0].1;
    }
    s / 2.0
}

/// A traced region with the raster indices of its cells.
#[derive(Debug, Clone)]
pub(crate) struct Region {
    pub polygon: RegionPolygon,
    pub cells: Vec<usize>,
}

pub fn polygonize(grid: &Grid, mask: Option<&MaskGrid>, connectivity: Connectivity) -> Result<Vec<RegionPolygon>> {
    Ok(polygonize_regions(grid, mask, connectivity)?.into_iter().map(|r| r.polygon).collect())
}

const UNLABELED: u32 = u32::MAX;

pub(crate) fn polygonize_regions(
    grid: &Grid,
    mask: Option<&MaskGrid>,
    connectivity: Connectivity,
) -> Result<Vec<Region>> {
    let h = *grid.header();
    if let Some(m) = mask {
        h.check_same_shape(m.header(), "mask")?;
    }
    let eligible = |i: usize| grid.get_index(i).is_some() && mask.is_none_or(|m| m.eligible()[i]);

    let (labels, components) = label_components(grid, &eligible, connectivity);

    let mut regions: Vec<Region> = components
        .into_iter()
        .enumerate()
        .map(|(label, cells)| {
            let pixel_value = grid.values()[cells[0]];
            let area_m2: f64 = cells.iter().map(|&i| h.cell_area_m2(i / h.ncols)).sum();
            let (outer_ring, holes) = trace_rings(&h, &labels, label as u32, &cells, connectivity);
            Region {
                polygon: RegionPolygon {
                    outer_ring,
                    holes,
                    pixel_value,
                    cell_count: cells.len(),
                    area_ha: area_m2 / 10_000.0,
                },
                cells,
            }
        })
        .collect();
    // Components were discovered in scan order, so the first cell is the
    // north-west-most one.
    regions.sort_by(|a, b| a.polygon.pixel_value.total_cmp(&b.polygon.pixel_value).then(a.cells[0].cmp(&b.cells[0])));
    Ok(regions)
}

fn label_components(
    grid: &Grid,
    eligible: &impl Fn(usize) -> bool,
    connectivity: Connectivity,
) -> (Vec<u32>, Vec<Vec<usize>>) {
    let h = grid.header();
    let (nrows, ncols) = (h.nrows as isize, h.ncols as isize);
    let values = grid.values();
    let mut labels = vec![UNLABELED; h.len()];
    let mut components = Vec::new();
    let offsets: &[(isize, isize)] = match connectivity {
        Connectivity::Four => &[(0, 1), (1, 0), (0, -1), (-1, 0)],
        Connectivity::Eight => &[(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)],
    };
    let mut stack = Vec::new();
    for start in 0..h.len() {
        if labels[start] != UNLABELED || !eligible(start) {
            continue;
        }
        let label = components.len() as u32;
        let value = values[start];
        let mut cells = vec![start];
        labels[start] = label;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (r, c) = ((i / h.ncols) as isize, (i % h.ncols) as isize);
            for &(dr, dc) in offsets {
                let (rr, cc) = (r + dr, c + dc);
                if rr < 0 || cc < 0 || rr >= nrows || cc >= ncols {
                    continue;
                }
                let j = rr as usize * h.ncols + cc as usize;
                if labels[j] == UNLABELED && values[j] == value && eligible(j) {
                    labels[j] = label;
                    cells.push(j);
                    stack.push(j);
                }
            }
        }
        cells.sort_unstable();
        components.push(cells);
    }
    (labels, components)
}

#[derive(Clone, Copy)]
struct Edge {
    from: (u32, u32),
    to: (u32, u32),
    dir: u8,
}

const EAST: u8 = 0;
const NORTH: u8 = 1;
const WEST: u8 = 2;
const SOUTH: u8 = 3;

/// Traces the boundary of one component. Lattice vertices are `(i, y)` with
/// `i` the column line from the west and `y` the row line from the south.
fn trace_rings(
    h: &GridHeader,
    labels: &[u32],
    label: u32,
    cells: &[usize],
    connectivity: Connectivity,
) -> (Vec<Coord>, Vec<Vec<Coord>>) {
    let (nrows, ncols) = (h.nrows, h.ncols);
    let member = |r: isize, c: isize| -> bool {
        r >= 0
            && c >= 0
            && (r as usize) < nrows
            && (c as usize) < ncols
            && labels[r as usize * ncols + c as usize] == label
    };

    let mut edges = Vec::new();
    for &i in cells {
        let (r, c) = (i / ncols, i % ncols);
        let (ri, ci) = (r as isize, c as isize);
        let (x0, x1) = (c as u32, c as u32 + 1);
        let yb = (nrows - r - 1) as u32;
        let yt = yb + 1;
        if !member(ri + 1, ci) {
            edges.push(Edge { from: (x0, yb), to: (x1, yb), dir: EAST });
        }
        if !member(ri, ci + 1) {
            edges.push(Edge { from: (x1, yb), to: (x1, yt), dir: NORTH });
        }
        if !member(ri - 1, ci) {
            edges.push(Edge { from: (x1, yt), to: (x0, yt), dir: WEST });
        }
        if !member(ri, ci - 1) {
            edges.push(Edge { from: (x0, yt), to: (x0, yb), dir: SOUTH });
        }
    }

    let mut outgoing: HashMap<(u32, u32), [usize; 2]> = HashMap::with_capacity(edges.len());
    for (k, e) in edges.iter().enumerate() {
        outgoing.entry(e.from).and_modify(|slot| slot[1] = k).or_insert([k, usize::MAX]);
    }

    let mut used = vec![false; edges.len()];
    let mut outer = None;
    let mut holes = Vec::new();
    for start in 0..edges.len() {
        if used[start] {
            continue;
        }
        let mut ring: Vec<(u32, u32, u8)> = Vec::new();
        let mut k = start;
        loop {
            used[k] = true;
            let e = edges[k];
            ring.push((e.from.0, e.from.1, e.dir));
            let slot = outgoing[&e.to];
            let next = if slot[1] == usize::MAX {
                slot[0]
            } else {
                let want = match connectivity {
                    Connectivity::Four => (e.dir + 1) % 4,
                    Connectivity::Eight => (e.dir + 3) % 4,
                };
                if edges[slot[0]].dir == want {
                    slot[0]
                } else {
                    slot[1]
                }
            };
            if next == start {
                break;
            }
            k = next;
        }
        let (coords, area2) = finish_ring(h, &ring);
        if area2 > 0 && outer.is_none() {
            outer = Some(coords);
        } else {
            holes.push(coords);
        }
    }
    (outer.unwrap_or_default(), holes)
}

/// Drops collinear vertices, rotates the ring to start at its north-west-most
/// vertex, closes it and converts to map coordinates. Also returns twice the
/// signed lattice area.
fn finish_ring(h: &GridHeader, ring: &[(u32, u32, u8)]) -> (Vec<Coord>, i64) {
    let n = ring.len();
    // A vertex is a corner when the edge leaving it turns relative to the
    // edge arriving at it.
    let corners: Vec<(u32, u32)> =
        (0..n).filter(|&k| ring[(k + n - 1) % n].2 != ring[k].2).map(|k| (ring[k].0, ring[k].1)).collect();
    let start = (0..corners.len()).min_by_key(|&k| (std::cmp::Reverse(corners[k].1), corners[k].0)).unwrap_or(0);
    let mut lattice: Vec<(u32, u32)> = corners[start..].iter().chain(&corners[..start]).copied().collect();
    lattice.push(lattice[0]);
    let area2: i64 = lattice.windows(2).map(|w| w[0].0 as i64 * w[1].1 as i64 - w[1].0 as i64 * w[0].1 as i64).sum();
    let coords = lattice
        .iter()
        .map(|&(i, y)| Coord::new(h.xllcorner + i as f64 * h.cellsize, h.yllcorner + y as f64 * h.cellsize))
        .collect();
    (coords, area2)
}
