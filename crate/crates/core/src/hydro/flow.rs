//! Depression filling, D8 flow directions and flow accumulation.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::raster::{Grid, GridHeader};

pub const DEFAULT_FILL_EPSILON: f64 = 1e-5;

/// D8 neighbours, listed in tie-breaking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    E,
    SE,
    S,
    SW,
    W,
    NW,
    N,
    NE,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::E,
        Direction::SE,
        Direction::S,
        Direction::SW,
        Direction::W,
        Direction::NW,
        Direction::N,
        Direction::NE,
    ];

    /// `(d_row, d_col)`, rows growing southward.
    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::E => (0, 1),
            Direction::SE => (1, 1),
            Direction::S => (1, 0),
            Direction::SW => (1, -1),
            Direction::W => (0, -1),
            Direction::NW => (-1, -1),
            Direction::N => (-1, 0),
            Direction::NE => (-1, 1),
        }
    }

    pub fn is_diagonal(self) -> bool {
        let (dr, dc) = self.offset();
        dr != 0 && dc != 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowCell {
    To(Direction),
    /// Outlet: a cell with no lower neighbour.
    Sink,
    NoData,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowGrid {
    header: GridHeader,
    directions: Vec<FlowCell>,
    accumulation: Option<Vec<u64>>,
}

fn neighbour(h: &GridHeader, index: usize, d: Direction) -> Option<usize> {
    let (r, c) = h.row_col(index);
    let (dr, dc) = d.offset();
    let (rr, cc) = (r as isize + dr, c as isize + dc);
    if rr < 0 || cc < 0 || rr as usize >= h.nrows || cc as usize >= h.ncols {
        None
    } else {
        Some(h.index(rr as usize, cc as usize))
    }
}

impl FlowGrid {
    /// Builds a flow grid from explicit directions. Every `To` must point at
    /// an in-grid cell that is not `NoData`.
    pub fn from_directions(header: GridHeader, directions: Vec<FlowCell>) -> Result<Self> {
        header.validate()?;
        if directions.len() != header.len() {
            return Err(Error::CellCountMismatch { expected: header.len(), found: directions.len() });
        }
        for (i, cell) in directions.iter().enumerate() {
            if let FlowCell::To(d) = cell {
                let ok = neighbour(&header, i, *d).is_some_and(|j| directions[j] != FlowCell::NoData);
                if !ok {
                    let (row, col) = header.row_col(i);
                    return Err(Error::InvalidDirection { row, col });
                }
            }
        }
        Ok(FlowGrid { header, directions, accumulation: None })
    }

    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn directions(&self) -> &[FlowCell] {
        &self.directions
    }

    pub fn direction(&self, row: usize, col: usize) -> FlowCell {
        self.directions[self.header.index(row, col)]
    }

    /// Upstream cell counts (self included), once computed.
    pub fn accumulation(&self) -> Option<&[u64]> {
        self.accumulation.as_deref()
    }

    pub fn downstream(&self, index: usize) -> Option<usize> {
        match self.directions[index] {
            FlowCell::To(d) => neighbour(&self.header, index, d),
            _ => None,
        }
    }

    pub fn is_valid(&self, index: usize) -> bool {
        self.directions[index] != FlowCell::NoData
    }

    pub fn valid_count(&self) -> usize {
        self.directions.iter().filter(|d| **d != FlowCell::NoData).count()
    }

    /// For every valid cell, the index of the sink it drains to.
    pub fn catchments(&self) -> Result<Vec<Option<usize>>> {
        let n = self.directions.len();
        let mut sink = vec![None; n];
        let mut path = Vec::new();
        for start in 0..n {
            if !self.is_valid(start) || sink[start].is_some() {
                continue;
            }
            path.clear();
            let mut cur = start;
            let outlet = loop {
                if let Some(s) = sink[cur] {
                    break s;
                }
                path.push(cur);
                if path.len() > n {
                    return Err(Error::CycleDetected);
                }
                match self.downstream(cur) {
                    Some(next) => cur = next,
                    None => break cur,
                }
            };
            for &i in &path {
                sink[i] = Some(outlet);
            }
        }
        Ok(sink)
    }
}

#[derive(PartialEq)]
struct Queued {
    z: f64,
    seq: u64,
    index: usize,
}

impl Eq for Queued {}

impl Ord for Queued {
    // Reversed: BinaryHeap is a max-heap and we want the lowest cell first,
    // oldest first among equals.
    fn cmp(&self, other: &Self) -> Ordering {
        other.z.total_cmp(&self.z).then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Cells on the grid edge or next to nodata: where water may leave the grid.
fn is_edge(dem: &Grid, index: usize) -> bool {
    let h = dem.header();
    let (r, c) = h.row_col(index);
    if r == 0 || c == 0 || r + 1 == h.nrows || c + 1 == h.ncols {
        return true;
    }
    Direction::ALL.iter().any(|&d| neighbour(h, index, d).is_none_or(|j| dem.get_index(j).is_none()))
}

/// Priority-flood depression filling with the default epsilon gradient.
pub fn fill_sinks(dem: &Grid) -> Grid {
    fill_sinks_with(dem, DEFAULT_FILL_EPSILON)
}

/// Raises every closed depression so that each valid cell has a descending
/// path to the grid edge (or to nodata). Each cell reached from a neighbour
/// ends at least `epsilon` above it, which orients flats toward their outlet.
pub fn fill_sinks_with(dem: &Grid, epsilon: f64) -> Grid {
    let h = *dem.header();
    let mut filled = dem.values().to_vec();
    let mut seen = vec![false; h.len()];
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    for i in 0..h.len() {
        if dem.get_index(i).is_some() && is_edge(dem, i) {
            seen[i] = true;
            heap.push(Queued { z: filled[i], seq, index: i });
            seq += 1;
        }
    }
    while let Some(Queued { z, index, .. }) = heap.pop() {
        for d in Direction::ALL {
            let Some(j) = neighbour(&h, index, d) else { continue };
            if seen[j] || dem.get_index(j).is_none() {
                continue;
            }
            seen[j] = true;
            filled[j] = filled[j].max(z + epsilon);
            heap.push(Queued { z: filled[j], seq, index: j });
            seq += 1;
        }
    }
    Grid::new(h, filled).expect("filled grid keeps the input shape")
}

fn step_distance(h: &GridHeader, row: usize, d: Direction) -> f64 {
    let (dx, dy) = h.cell_size_m(row);
    match d {
        Direction::E | Direction::W => dx,
        Direction::N | Direction::S => dy,
        _ => dx.hypot(dy),
    }
}

/// Raw D8 rule: each cell drains to its steepest strictly-lower neighbour;
/// cells without one become sinks wherever they are.
pub fn d8_directions(dem: &Grid) -> FlowGrid {
    let h = *dem.header();
    let directions = (0..h.len())
        .map(|i| {
            let Some(z) = dem.get_index(i) else {
                return FlowCell::NoData;
            };
            let row = i / h.ncols;
            let mut best: Option<(f64, Direction)> = None;
            for d in Direction::ALL {
                let Some(zn) = neighbour(&h, i, d).and_then(|j| dem.get_index(j)) else {
                    continue;
                };
                let drop = (z - zn) / step_distance(&h, row, d);
                if drop > 0.0 && best.is_none_or(|(b, _)| drop > b) {
                    best = Some((drop, d));
                }
            }
            best.map_or(FlowCell::Sink, |(_, d)| FlowCell::To(d))
        })
        .collect();
    FlowGrid { header: h, directions, accumulation: None }
}

/// D8 directions on a depression-filled DEM. Sinks are only allowed on the
/// grid edge or next to nodata; an interior sink means the DEM was not filled.
pub fn flow_directions(dem_filled: &Grid) -> Result<FlowGrid> {
    let flow = d8_directions(dem_filled);
    for (i, cell) in flow.directions.iter().enumerate() {
        if *cell == FlowCell::Sink && !is_edge(dem_filled, i) {
            let (row, col) = flow.header.row_col(i);
            return Err(Error::NotSinkFilled { row, col });
        }
    }
    Ok(flow)
}

/// Counts, for every cell, the cells whose flow passes through it (itself
/// included), processing cells in topological order.
pub fn flow_accumulation(flow: &FlowGrid) -> Result<FlowGrid> {
    let n = flow.directions.len();
    let mut indegree = vec![0u32; n];
    for i in 0..n {
        if let Some(j) = flow.downstream(i) {
            indegree[j] += 1;
        }
    }
    let mut acc: Vec<u64> = (0..n).map(|i| flow.is_valid(i) as u64).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| flow.is_valid(i) && indegree[i] == 0).collect();
    let mut processed = 0;
    while let Some(i) = queue.pop_front() {
        processed += 1;
        if let Some(j) = flow.downstream(i) {
            acc[j] += acc[i];
            indegree[j] -= 1;
            if indegree[j] == 0 {
                queue.push_back(j);
            }
        }
    }
    if processed != flow.valid_count() {
        return Err(Error::CycleDetected);
    }
    Ok(FlowGrid { accumulation: Some(acc), ..flow.clone() })
}
