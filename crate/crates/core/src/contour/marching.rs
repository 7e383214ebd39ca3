//! Marching squares over the lattice of cell centers.
//!
//! Each square has corners at four neighbouring cell centers. A corner counts
//! as "above" when its value is `>= level`; values exactly on the level are
//! nudged upward so no vertex lands on a lattice node. Saddles are resolved by
//! the mean of the four corners: a mean at or above the level joins the high
//! corners.

use std::collections::HashMap;

use crate::raster::{Coord, Grid};

/// An edge of the center lattice. `Horizontal { row, col }` joins the centers
/// of `(row, col)` and `(row, col + 1)`; `Vertical { row, col }` joins
/// `(row, col)` and `(row + 1, col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeEdge {
    Horizontal { row: usize, col: usize },
    Vertical { row: usize, col: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub edge: LatticeEdge,
    pub at: Coord,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Crossing,
    pub b: Crossing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourLine {
    pub level: f64,
    pub points: Vec<Coord>,
}

impl ContourLine {
    pub fn is_closed(&self) -> bool {
        self.points.len() > 2 && self.points.first() == self.points.last()
    }
}

struct Crossings<'a> {
    grid: &'a Grid,
    level: f64,
    nudge: f64,
    cache: HashMap<LatticeEdge, Coord>,
}

impl Crossings<'_> {
    fn z(&self, row: usize, col: usize) -> f64 {
        let z = self.grid.value(row, col);
        if z == self.level {
            z + self.nudge
        } else {
            z
        }
    }

    fn point(&mut self, edge: LatticeEdge) -> Crossing {
        let (r0, c0, r1, c1) = match edge {
            LatticeEdge::Horizontal { row, col } => (row, col, row, col + 1),
            LatticeEdge::Vertical { row, col } => (row, col, row + 1, col),
        };
        let at = match self.cache.get(&edge) {
            Some(p) => *p,
            None => {
                let (z0, z1) = (self.z(r0, c0), self.z(r1, c1));
                let t = (self.level - z0) / (z1 - z0);
                let h = self.grid.header();
                let (p0, p1) = (h.cell_center(r0, c0), h.cell_center(r1, c1));
                let p = Coord::new(p0.x + (p1.x - p0.x) * t, p0.y + (p1.y - p0.y) * t);
                self.cache.insert(edge, p);
                p
            }
        };
        Crossing { edge, at }
    }
}

/// All marching-squares segments for one level, in raster scan order of the
/// squares. Squares touching nodata emit nothing.
pub fn level_segments(grid: &Grid, level: f64, nudge: f64) -> Vec<Segment> {
    let (nrows, ncols) = (grid.nrows(), grid.ncols());
    let mut out = Vec::new();
    if nrows < 2 || ncols < 2 {
        return out;
    }
    let mut xs = Crossings { grid, level, nudge, cache: HashMap::new() };
    for r in 0..nrows - 1 {
        for c in 0..ncols - 1 {
            if [(r, c), (r, c + 1), (r + 1, c + 1), (r + 1, c)].iter().any(|&(rr, cc)| grid.get(rr, cc).is_none()) {
                continue;
            }
            let tl = xs.z(r, c);
            let tr = xs.z(r, c + 1);
            let br = xs.z(r + 1, c + 1);
            let bl = xs.z(r + 1, c);
            let up = [tl >= level, tr >= level, br >= level, bl >= level];
            let top = LatticeEdge::Horizontal { row: r, col: c };
            let right = LatticeEdge::Vertical { row: r, col: c + 1 };
            let bottom = LatticeEdge::Horizontal { row: r + 1, col: c };
            let left = LatticeEdge::Vertical { row: r, col: c };

            let mut crossed = Vec::with_capacity(4);
            if up[0] != up[1] {
                crossed.push(top);
            }
            if up[1] != up[2] {
                crossed.push(right);
            }
            if up[2] != up[3] {
                crossed.push(bottom);
            }
            if up[3] != up[0] {
                crossed.push(left);
            }
            let mut emit = |e0: LatticeEdge, e1: LatticeEdge| {
                let seg = Segment { a: xs.point(e0), b: xs.point(e1) };
                out.push(seg);
            };
            match crossed.len() {
                0 => {}
                2 => emit(crossed[0], crossed[1]),
                4 => {
                    let centre_up = (tl + tr + br + bl) / 4.0 >= level;
                    // Cut off whichever diagonal pair is *not* joined through the centre.
                    let cut_tl_br = up[0] != centre_up;
                    if cut_tl_br {
                        emit(top, left);
                        emit(right, bottom);
                    } else {
                        emit(top, right);
                        emit(bottom, left);
                    }
                }
                _ => unreachable!("a square has an even number of crossed edges"),
            }
        }
    }
    out
}

/// Links segments that share a lattice edge into polylines. Open chains start
/// at their first dangling end in scan order; closed loops repeat their first
/// vertex at the end.
pub fn chain_segments(level: f64, segments: &[Segment]) -> Vec<ContourLine> {
    let mut by_edge: HashMap<LatticeEdge, Vec<usize>> = HashMap::new();
    for (i, s) in segments.iter().enumerate() {
        by_edge.entry(s.a.edge).or_default().push(i);
        by_edge.entry(s.b.edge).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();

    let walk = |start_seg: usize, start: Crossing, used: &mut Vec<bool>| -> Vec<Coord> {
        let mut pts = vec![start.at];
        let mut seg = start_seg;
        let mut from = start.edge;
        loop {
            used[seg] = true;
            let s = &segments[seg];
            let next = if s.a.edge == from { s.b } else { s.a };
            if pts.last() != Some(&next.at) {
                pts.push(next.at);
            }
            match by_edge[&next.edge].iter().copied().find(|&j| !used[j]) {
                Some(j) => {
                    seg = j;
                    from = next.edge;
                }
                None => break,
            }
        }
        pts
    };

    for (i, s) in segments.iter().enumerate() {
        if used[i] {
            continue;
        }
        for end in [s.a, s.b] {
            if by_edge[&end.edge].len() == 1 {
                let pts = walk(i, end, &mut used);
                if pts.len() >= 2 {
                    lines.push(ContourLine { level, points: pts });
                }
                break;
            }
        }
    }
    for (i, s) in segments.iter().enumerate() {
        if used[i] {
            continue;
        }
        let mut pts = walk(i, s.a, &mut used);
        if pts.len() >= 2 && pts.first() != pts.last() {
            pts.push(pts[0]);
        }
        if pts.len() >= 2 {
            lines.push(ContourLine { level, points: pts });
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{Crs, GridHeader, Hemisphere};

    fn grid(rows: &[&[f64]]) -> Grid {
        let h = GridHeader::new(
            rows[0].len(),
            rows.len(),
            0.0,
            0.0,
            1.0,
            Crs::Utm { zone: 43, hemisphere: Hemisphere::North },
        )
        .unwrap();
        Grid::new(h, rows.concat()).unwrap()
    }

    #[test]
    fn north_low_south_high_single_square() {
        // Centers at (0.5, 1.5) / (1.5, 1.5) on top and y = 0.5 below.
        let g = grid(&[&[0.0, 0.0], &[10.0, 10.0]]);
        let segs = level_segments(&g, 5.0, 1e-9);
        assert_eq!(segs.len(), 1);
        let lines = chain_segments(5.0, &segs);
        assert_eq!(lines.len(), 1);
        let pts = &lines[0].points;
        assert_eq!(pts.len(), 2);
        assert!(!lines[0].is_closed());
        let mut xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs, vec![0.5, 1.5]);
        assert!(pts.iter().all(|p| p.y == 1.0));
    }

    #[test]
    fn saddle_mean_above_joins_high_corners() {
        // High corners TL and BR, mean 5.5 >= 5: the high diagonal is joined,
        // so the low corners TR and BL are each cut off.
        let g = grid(&[&[10.0, 0.0], &[2.0, 10.0]]);
        let segs = level_segments(&g, 5.0, 1e-9);
        assert_eq!(segs.len(), 2);
        let edges: Vec<_> = segs.iter().map(|s| (s.a.edge, s.b.edge)).collect();
        assert!(edges.contains(&(LatticeEdge::Horizontal { row: 0, col: 0 }, LatticeEdge::Vertical { row: 0, col: 1 })));
        assert!(edges.contains(&(LatticeEdge::Horizontal { row: 1, col: 0 }, LatticeEdge::Vertical { row: 0, col: 0 })));
    }

    #[test]
    fn saddle_mean_below_separates_high_corners() {
        let g = grid(&[&[10.0, 0.0], &[0.0, 6.0]]);
        let segs = level_segments(&g, 5.0, 1e-9);
        let edges: Vec<_> = segs.iter().map(|s| (s.a.edge, s.b.edge)).collect();
        assert!(edges.contains(&(LatticeEdge::Horizontal { row: 0, col: 0 }, LatticeEdge::Vertical { row: 0, col: 0 })));
        assert!(edges.contains(&(LatticeEdge::Vertical { row: 0, col: 1 }, LatticeEdge::Horizontal { row: 1, col: 0 })));
    }

    #[test]
    fn corner_on_level_is_nudged_above() {
        let g = grid(&[&[5.0, 0.0], &[0.0, 0.0]]);
        let segs = level_segments(&g, 5.0, 1e-9);
        assert_eq!(segs.len(), 1);
        let s = segs[0];
        assert_ne!(s.a.at, s.b.at);
        // Both crossings sit a hair away from the top-left center.
        for p in [s.a.at, s.b.at] {
            let d = ((p.x - 0.5).powi(2) + (p.y - 1.5).powi(2)).sqrt();
            assert!(d > 0.0 && d < 1e-9);
        }
    }

    #[test]
    fn nodata_squares_are_skipped() {
        let g = grid(&[&[0.0, 0.0, 0.0], &[10.0, -9999.0, 10.0]]);
        assert!(level_segments(&g, 5.0, 1e-9).is_empty());
    }

    #[test]
    fn plateau_makes_closed_loop() {
        let g = grid(&[&[0.0, 0.0, 0.0, 0.0], &[0.0, 10.0, 10.0, 0.0], &[0.0, 10.0, 10.0, 0.0], &[0.0, 0.0, 0.0, 0.0]]);
        let lines = chain_segments(5.0, &level_segments(&g, 5.0, 1e-9));
        assert_eq!(lines.len(), 1);
        assert!(lines[0].is_closed());
        assert_eq!(lines[0].points.len(), 9);
    }
}
