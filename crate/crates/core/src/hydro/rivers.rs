use crate::error::{Error, Result};
use crate::hydro::flow::FlowGrid;
use crate::raster::{Coord, GridHeader};

#[derive(Debug, Clone, PartialEq)]
pub struct RiverSegment {
    /// Cell centers in flow order.
    pub path: Vec<Coord>,
    /// Row-major cell indices matching `path`.
    pub cells: Vec<usize>,
    pub length_km: f64,
    pub name: Option<String>,
}

/// Metric distance between two 8-adjacent cells. East-west spacing uses the
/// mean of both rows' spacing so the result is symmetric.
pub fn step_length_m(h: &GridHeader, from: usize, to: usize) -> f64 {
    let (r0, c0) = h.row_col(from);
    let (r1, c1) = h.row_col(to);
    let dx = 0.5 * (h.cell_size_m(r0).0 + h.cell_size_m(r1).0);
    let dy = h.cell_size_m(r0).1;
    match (r0 != r1, c0 != c1) {
        (false, false) => 0.0,
        (false, true) => dx,
        (true, false) => dy,
        (true, true) => dx.hypot(dy),
    }
}

pub fn path_length_km(h: &GridHeader, cells: &[usize]) -> f64 {
    cells.windows(2).map(|w| step_length_m(h, w[0], w[1])).sum::<f64>() / 1000.0 + 0.0
}

/// Channel network of cells with accumulation at or above `threshold`,
/// split into segments at heads and junctions (cells fed by two or more
/// channel cells). A segment ends on the next junction, which it shares with
/// the segment leaving it, or at an outlet. A junction that is itself an
/// outlet starts no segment.
pub fn extract_rivers(flow: &FlowGrid, threshold: u64) -> Result<Vec<RiverSegment>> {
    let acc =
        flow.accumulation().ok_or_else(|| Error::InvalidParameter("flow accumulation has not been computed".into()))?;
    let h = *flow.header();
    let channel: Vec<bool> = acc.iter().map(|&a| a >= threshold && a > 0).collect();
    if !channel.iter().any(|&c| c) {
        let max = acc.iter().copied().max().unwrap_or(0);
        return Err(Error::ThresholdTooHigh { threshold, max });
    }
    let mut inflow = vec![0u32; h.len()];
    for i in 0..h.len() {
        if channel[i] {
            if let Some(j) = flow.downstream(i) {
                inflow[j] += 1;
            }
        }
    }
    let mut segments = Vec::new();
    for start in (0..h.len()).filter(|&i| channel[i] && inflow[i] != 1) {
        let mut cells = vec![start];
        let mut cur = start;
        while let Some(next) = flow.downstream(cur) {
            cells.push(next);
            if inflow[next] >= 2 {
                break;
            }
            cur = next;
        }
        if cells.len() == 1 && inflow[start] >= 2 {
            continue;
        }
        segments.push(RiverSegment {
            path: cells
                .iter()
                .map(|&i| {
                    let (r, c) = h.row_col(i);
                    h.cell_center(r, c)
                })
                .collect(),
            length_km: path_length_km(&h, &cells),
            cells,
            name: None,
        });
    }
    Ok(segments)
}

/// Names segments from seed points: each seed names the segment passing
/// nearest to it and then every unnamed segment downstream of that one.
/// Earlier seeds win.
pub fn name_rivers(segments: &mut [RiverSegment], header: &GridHeader, seeds: &[(String, Coord)]) {
    for (name, at) in seeds {
        let nearest = segments
            .iter()
            .enumerate()
            .flat_map(|(k, s)| s.path.iter().map(move |p| (k, *p)))
            .map(|(k, p)| {
                let (x, y) = header.to_local_m(*at, p);
                (k, x * x + y * y)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let Some((mut k, _)) = nearest else { return };
        let mut hops = 0;
        loop {
            if segments[k].name.is_none() {
                segments[k].name = Some(name.clone());
            }
            let last = *segments[k].cells.last().expect("segments are non-empty");
            match segments.iter().position(|s| s.cells[0] == last && s.cells.len() > 1) {
                Some(next) if hops < segments.len() => {
                    k = next;
                    hops += 1;
                }
                _ => break,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydro::flow::{flow_accumulation, Direction, FlowCell};
    use crate::raster::{Crs, Hemisphere};

    fn utm(ncols: usize, nrows: usize) -> GridHeader {
        GridHeader::new(ncols, nrows, 0.0, 0.0, 90.0, Crs::Utm { zone: 43, hemisphere: Hemisphere::North }).unwrap()
    }

    #[test]
    fn chain_threshold_five() {
        let mut dirs = vec![FlowCell::To(Direction::E); 10];
        dirs[9] = FlowCell::Sink;
        let flow = flow_accumulation(&FlowGrid::from_directions(utm(10, 1), dirs).unwrap()).unwrap();
        let rivers = extract_rivers(&flow, 5).unwrap();
        assert_eq!(rivers.len(), 1);
        assert_eq!(rivers[0].cells, (4..10).collect::<Vec<_>>());
        assert!((rivers[0].length_km - 0.45).abs() < 1e-12);
        assert!(matches!(extract_rivers(&flow, 11), Err(Error::ThresholdTooHigh { threshold: 11, max: 10 })));
    }

    #[test]
    fn diagonal_steps() {
        let h = utm(3, 3);
        let len = path_length_km(&h, &[0, 4, 8]);
        assert!((len * 1000.0 - 2.0 * 90.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn y_junction_makes_three_segments() {
        // Two arms meet at (2,2) then run south to an outlet at (4,2).
        let h = utm(5, 5);
        let mut dirs = vec![FlowCell::Sink; 25];
        let set = |d: &mut Vec<FlowCell>, r: usize, c: usize, to: Direction| d[r * 5 + c] = FlowCell::To(to);
        set(&mut dirs, 0, 0, Direction::SE);
        set(&mut dirs, 1, 1, Direction::SE);
        set(&mut dirs, 0, 4, Direction::SW);
        set(&mut dirs, 1, 3, Direction::SW);
        set(&mut dirs, 2, 2, Direction::S);
        set(&mut dirs, 3, 2, Direction::S);
        let flow = flow_accumulation(&FlowGrid::from_directions(h, dirs).unwrap()).unwrap();
        let rivers = extract_rivers(&flow, 2).unwrap();
        let cells: Vec<Vec<usize>> = rivers.iter().map(|r| r.cells.clone()).collect();
        assert_eq!(cells, vec![vec![6, 12], vec![8, 12], vec![12, 17, 22]]);
        let mut named = rivers.clone();
        name_rivers(&mut named, &h, &[("Terna".into(), h.cell_center(1, 1))]);
        let names: Vec<_> = named.iter().map(|r| r.name.as_deref()).collect();
        assert_eq!(names, vec![Some("Terna"), None, Some("Terna")]);
    }

    #[test]
    fn reversal_keeps_length() {
        let h = GridHeader::new(6, 6, 76.0, 18.0, 0.001, Crs::GeographicWgs84).unwrap();
        let path = [0, 7, 8, 14, 20, 21, 27];
        let rev: Vec<usize> = path.iter().rev().copied().collect();
        assert!((path_length_km(&h, &path) - path_length_km(&h, &rev)).abs() < 1e-15);
    }
}
