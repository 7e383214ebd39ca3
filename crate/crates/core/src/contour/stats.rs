use crate::error::{Error, Result};
use crate::raster::{sample_elevation, GeoPoint, Grid, SampleMethod};

/// Population statistics over the valid cells of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElevationStats {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
}

pub fn elevation_stats(grid: &Grid) -> Result<ElevationStats> {
    let (min, max) = grid.min_max().ok_or(Error::AllNoData)?;
    let count = grid.valid_count();
    let mean = grid.valid_values().sum::<f64>() / count as f64;
    let var = grid.valid_values().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count as f64;
    Ok(ElevationStats { count, mean, std_dev: var.sqrt(), min, max })
}

/// Error statistics of a DEM against reference heights (DEM minus reference).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyStats {
    pub n: usize,
    /// Reference points outside the extent or over nodata.
    pub skipped: usize,
    pub mean_error: f64,
    /// Population standard deviation of the errors.
    pub std_dev: f64,
    pub rmse: f64,
}

impl AccuracyStats {
    pub fn from_errors(errors: &[f64]) -> Result<Self> {
        if errors.is_empty() {
            return Err(Error::NoUsablePoints);
        }
        let n = errors.len() as f64;
        let mean = errors.iter().sum::<f64>() / n;
        let var = errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n;
        let mse = errors.iter().map(|e| e * e).sum::<f64>() / n;
        Ok(AccuracyStats { n: errors.len(), skipped: 0, mean_error: mean, std_dev: var.sqrt(), rmse: mse.sqrt() })
    }
}

/// Compares bilinear DEM samples with reference heights such as GPS
/// measurements. Points that fall outside the grid or on nodata are counted
/// in `skipped`.
pub fn vertical_accuracy(grid: &Grid, reference: &[(GeoPoint, f64)]) -> Result<AccuracyStats> {
    let mut errors = Vec::with_capacity(reference.len());
    let mut skipped = 0;
    for &(p, z) in reference {
        match sample_elevation(grid, p, SampleMethod::Bilinear) {
            Ok(Some(v)) => errors.push(v - z),
            Ok(None) | Err(crate::Error::OutOfExtent { .. }) | Err(crate::Error::LatitudeOutOfRange(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let mut stats = AccuracyStats::from_errors(&errors)?;
    stats.skipped = skipped;
    Ok(stats)
}
