use crate::error::{Error, Result};
use crate::raster::Grid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandRow {
    /// Lower bound of the band in meters; `-inf` for the underflow band.
    pub band_floor: f64,
    pub area_ha: f64,
    pub cell_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandTable {
    /// One row per break, in break order, including empty bands.
    pub rows: Vec<BandRow>,
    /// Cells below the first break.
    pub underflow: BandRow,
}

impl BandTable {
    pub fn total_area_ha(&self) -> f64 {
        self.rows.iter().map(|r| r.area_ha).sum::<f64>() + self.underflow.area_ha
    }

    pub fn total_cells(&self) -> usize {
        self.rows.iter().map(|r| r.cell_count).sum::<usize>() + self.underflow.cell_count
    }

    /// CSV with header `band_floor_m,area_ha,cell_count`. The underflow band
    /// is appended as `underflow` only when it holds cells.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["band_floor_m", "area_ha", "cell_count"])?;
        for r in &self.rows {
            w.write_record([r.band_floor.to_string(), r.area_ha.to_string(), r.cell_count.to_string()])?;
        }
        if self.underflow.cell_count > 0 {
            w.write_record([
                "underflow".to_string(),
                self.underflow.area_ha.to_string(),
                self.underflow.cell_count.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Hectares of grid area per elevation band. A value `z` belongs to band `i`
/// when `breaks[i] <= z < breaks[i + 1]`; the last band is open above.
pub fn band_areas(grid: &Grid, breaks: &[f64]) -> Result<BandTable> {
    if breaks.is_empty() || breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedBreaks);
    }
    let nb = breaks.len();
    let mut counts = vec![0usize; nb + 1];
    let mut areas = vec![0.0f64; nb + 1]; // m²
    let mut row_counts = vec![0usize; nb + 1];
    let h = grid.header();
    for row in 0..h.nrows {
        row_counts.iter_mut().for_each(|c| *c = 0);
        for col in 0..h.ncols {
            if let Some(z) = grid.get(row, col) {
                // Slot 0 is the underflow band; slot i + 1 is band i.
                let slot = breaks.partition_point(|&b| b <= z);
                row_counts[slot] += 1;
            }
        }
        let cell_m2 = h.cell_area_m2(row);
        for (slot, &n) in row_counts.iter().enumerate() {
            if n > 0 {
                counts[slot] += n;
                areas[slot] += n as f64 * cell_m2;
            }
        }
    }
    let rows = breaks
        .iter()
        .enumerate()
        .map(|(i, &b)| BandRow { band_floor: b, area_ha: areas[i + 1] / 10_000.0, cell_count: counts[i + 1] })
        .collect();
    Ok(BandTable {
        rows,
        underflow: BandRow { band_floor: f64::NEG_INFINITY, area_ha: areas[0] / 10_000.0, cell_count: counts[0] },
    })
}
