use crate::error::{Error, Result};
use crate::raster::{Crs, Grid, GridHeader, MaskGrid, METERS_PER_DEGREE};

/// Meters from each cell center to the nearest water cell center.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceGrid(Grid);

impl DistanceGrid {
    pub fn header(&self) -> &GridHeader {
        self.0.header()
    }

    pub fn grid(&self) -> &Grid {
        &self.0
    }

    pub fn distance_m(&self, row: usize, col: usize) -> f64 {
        self.0.value(row, col)
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }
}

/// Column and row spacing in meters used by the distance transform.
/// Geographic grids use the east-west spacing at the grid's middle latitude
/// for every row, so distances stay a true metric.
pub fn axis_spacing_m(h: &GridHeader) -> (f64, f64) {
    match h.crs {
        Crs::Utm { .. } => (h.cellsize, h.cellsize),
        Crs::GeographicWgs84 => {
            let dy = h.cellsize * METERS_PER_DEGREE;
            let mid = 0.5 * (h.yllcorner + h.ytop());
            (dy * mid.to_radians().cos(), dy)
        }
    }
}

/// Lower envelope of the parabolas `a·(p - q)² + f[q]` over finite `f[q]`.
fn envelope_1d(f: &[f64], a: f64, out: &mut [f64], v: &mut Vec<usize>, z: &mut Vec<f64>) {
    v.clear();
    z.clear();
    for q in (0..f.len()).filter(|&q| f[q].is_finite()) {
        loop {
            let Some(&p) = v.last() else {
                v.push(q);
                z.push(f64::NEG_INFINITY);
                break;
            };
            let (pf, qf) = (p as f64, q as f64);
            let s = ((f[q] + a * qf * qf) - (f[p] + a * pf * pf)) / (2.0 * a * (qf - pf));
            if s <= *z.last().expect("z tracks v") {
                v.pop();
                z.pop();
                continue;
            }
            v.push(q);
            z.push(s);
            break;
        }
    }
    if v.is_empty() {
        out.fill(f64::INFINITY);
        return;
    }
    let mut k = 0;
    for (p, o) in out.iter_mut().enumerate() {
        while k + 1 < v.len() && z[k + 1] < p as f64 {
            k += 1;
        }
        let d = p as f64 - v[k] as f64;
        *o = a * (d * d) + f[v[k]];
    }
}

/// Exact Euclidean distance transform: a pass down every column, then a pass
/// along every row over the column results.
pub fn distance_to_water(water: &MaskGrid) -> Result<DistanceGrid> {
    if water.count() == 0 {
        return Err(Error::NoWaterCells);
    }
    let h = *water.header();
    let (nr, nc) = (h.nrows, h.ncols);
    let (dx, dy) = axis_spacing_m(&h);
    let wx = dx / dy;

    let mut sq = vec![f64::INFINITY; h.len()];
    let (mut v, mut z) = (Vec::new(), Vec::new());
    let mut f = vec![0.0; nr];
    let mut out = vec![0.0; nr];
    for c in 0..nc {
        for r in 0..nr {
            f[r] = if water.eligible()[r * nc + c] { 0.0 } else { f64::INFINITY };
        }
        envelope_1d(&f, 1.0, &mut out, &mut v, &mut z);
        for r in 0..nr {
            sq[r * nc + c] = out[r];
        }
    }
    let mut row_out = vec![0.0; nc];
    for r in 0..nr {
        let row = &sq[r * nc..(r + 1) * nc];
        envelope_1d(row, wx * wx, &mut row_out, &mut v, &mut z);
        sq[r * nc..(r + 1) * nc].copy_from_slice(&row_out);
    }
    let values = sq.into_iter().map(|d2| dy * d2.sqrt()).collect();
    Ok(DistanceGrid(Grid::new(h, values)?))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::raster::Hemisphere;
    use rand::{Rng, SeedableRng};

    /// Nearest water cell by exhaustive scan.
    pub(crate) fn brute_force(water: &MaskGrid) -> Vec<f64> {
        let h = water.header();
        let (dx, dy) = axis_spacing_m(h);
        let a = (dx / dy) * (dx / dy);
        let wet: Vec<(usize, usize)> = (0..h.len()).filter(|&i| water.eligible()[i]).map(|i| h.row_col(i)).collect();
        (0..h.len())
            .map(|i| {
                let (r, c) = h.row_col(i);
                let d2 = wet
                    .iter()
                    .map(|&(wr, wc)| {
                        let di = c as f64 - wc as f64;
                        let dj = r as f64 - wr as f64;
                        a * (di * di) + dj * dj
                    })
                    .fold(f64::INFINITY, f64::min);
                dy * d2.sqrt()
            })
            .collect()
    }

    fn utm(ncols: usize, nrows: usize) -> GridHeader {
        GridHeader::new(ncols, nrows, 0.0, 0.0, 90.0, Crs::Utm { zone: 43, hemisphere: Hemisphere::North }).unwrap()
    }

    #[test]
    fn single_source() {
        let m = MaskGrid::from_fn(utm(3, 3), |r, c| (r, c) == (1, 1)).unwrap();
        let d = distance_to_water(&m).unwrap();
        assert_eq!(d.distance_m(1, 1), 0.0);
        assert_eq!(d.distance_m(0, 1), 90.0);
        assert_eq!(d.distance_m(1, 2), 90.0);
        assert_eq!(d.distance_m(2, 2), 90.0 * 2f64.sqrt());
    }

    #[test]
    fn all_water_and_no_water() {
        let all = MaskGrid::from_fn(utm(4, 3), |_, _| true).unwrap();
        assert!(distance_to_water(&all).unwrap().values().iter().all(|&d| d == 0.0));
        let none = MaskGrid::from_fn(utm(4, 3), |_, _| false).unwrap();
        assert!(matches!(distance_to_water(&none), Err(Error::NoWaterCells)));
    }

    #[test]
    fn random_masks_match_brute_force() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        for _ in 0..50 {
            let (nc, nr) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
            let p = rng.gen_range(0.02..0.5);
            let mut m = MaskGrid::from_fn(utm(nc, nr), |_, _| rng.gen_bool(p)).unwrap();
            if m.count() == 0 {
                m = MaskGrid::from_fn(utm(nc, nr), |r, c| (r, c) == (0, 0)).unwrap();
            }
            assert_eq!(distance_to_water(&m).unwrap().values(), brute_force(&m).as_slice());
        }
    }

    #[test]
    fn geographic_spacing_is_anisotropic() {
        let h = GridHeader::new(9, 7, 76.0, 59.9, 0.01, Crs::GeographicWgs84).unwrap();
        let m = MaskGrid::from_fn(h, |r, c| (r, c) == (3, 4)).unwrap();
        let d = distance_to_water(&m).unwrap();
        let (dx, dy) = axis_spacing_m(&h);
        assert!((d.distance_m(3, 5) - dx).abs() < 1e-9);
        assert!((d.distance_m(4, 4) - dy).abs() < 1e-9);
        assert!(dx < 0.51 * dy);
        assert_eq!(d.values(), brute_force(&m).as_slice());
    }
}
