//! Single-band grids, their headers and the coordinate types shared by every
//! other module.
//!
//! Row 0 is the northernmost row. Cell `(row, col)` covers
//! `[xll + col*cs, xll + (col+1)*cs] x [ytop - (row+1)*cs, ytop - row*cs]`
//! where `ytop = yllcorner + nrows*cellsize`.

mod ascii;
mod sample;

pub use ascii::{format_sig6, parse_ascii_grid, parse_ascii_grid_with_crs, read_ascii_grid, write_ascii_grid};
pub use sample::{sample_elevation, terrain_profile, ProfileSample, SampleMethod};

use std::fmt;

use crate::error::{Error, Result};
use crate::geodesy::EARTH_RADIUS_M;

pub const DEFAULT_NODATA: f64 = -9999.0;

/// Meters per degree of arc on the reference sphere.
pub(crate) const METERS_PER_DEGREE: f64 = std::f64::consts::PI / 180.0 * EARTH_RADIUS_M;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hemisphere {
    North,
    South,
}

/// Coordinate reference system of a grid. Geographic grids are in degrees of
/// longitude/latitude on WGS84; UTM grids are in meters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Crs {
    GeographicWgs84,
    Utm { zone: u8, hemisphere: Hemisphere },
}

impl Crs {
    pub fn is_geographic(&self) -> bool {
        matches!(self, Crs::GeographicWgs84)
    }
}

impl fmt::Display for Crs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Crs::GeographicWgs84 => f.write_str("geographic"),
            Crs::Utm { zone, hemisphere } => {
                let h = match hemisphere {
                    Hemisphere::North => 'N',
                    Hemisphere::South => 'S',
                };
                write!(f, "utm:{zone}{h}")
            }
        }
    }
}

impl std::str::FromStr for Crs {
    type Err = Error;

    /// Accepts `geographic`, `wgs84`, `latlon` or `utm:<zone><N|S>` (e.g. `utm:43N`).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "geographic" | "wgs84" | "latlon" => return Ok(Crs::GeographicWgs84),
            _ => {}
        }
        let bad = || Error::InvalidParameter(format!("unrecognised CRS {s:?}"));
        let rest = lower.strip_prefix("utm:").ok_or_else(bad)?;
        let (digits, hemi) = match rest.char_indices().last() {
            Some((i, 'n')) => (&rest[..i], Hemisphere::North),
            Some((i, 's')) => (&rest[..i], Hemisphere::South),
            _ => (rest, Hemisphere::North),
        };
        let zone: u8 = digits.parse().map_err(|_| bad())?;
        if !(1..=60).contains(&zone) {
            return Err(Error::InvalidZone(zone));
        }
        Ok(Crs::Utm { zone, hemisphere: hemi })
    }
}

/// A position in a grid's own CRS: degrees for geographic grids, meters for UTM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coord {
    pub x: f64,
    pub y: f64,
}

impl Coord {
    pub const fn new(x: f64, y: f64) -> Self {
        Coord { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    /// Degrees east.
    pub lon: f64,
    /// Degrees north.
    pub lat: f64,
}

impl GeoPoint {
    pub const fn new(lon: f64, lat: f64) -> Self {
        GeoPoint { lon, lat }
    }

    pub fn is_valid(&self) -> bool {
        (-90.0..=90.0).contains(&self.lat) && (-180.0..=180.0).contains(&self.lon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridHeader {
    pub ncols: usize,
    pub nrows: usize,
    pub xllcorner: f64,
    pub yllcorner: f64,
    pub cellsize: f64,
    pub nodata: f64,
    pub crs: Crs,
}

impl GridHeader {
    pub fn new(ncols: usize, nrows: usize, xllcorner: f64, yllcorner: f64, cellsize: f64, crs: Crs) -> Result<Self> {
        let header = GridHeader { ncols, nrows, xllcorner, yllcorner, cellsize, nodata: DEFAULT_NODATA, crs };
        header.validate()?;
        Ok(header)
    }

    pub fn with_nodata(mut self, nodata: f64) -> Self {
        self.nodata = nodata;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.ncols == 0 || self.nrows == 0 {
            return Err(Error::InvalidGrid("ncols and nrows must be at least 1".into()));
        }
        if self.ncols.checked_mul(self.nrows).is_none() {
            return Err(Error::InvalidGrid("ncols * nrows overflows".into()));
        }
        if !(self.cellsize.is_finite() && self.cellsize > 0.0) {
            return Err(Error::InvalidGrid(format!("cellsize must be positive, got {}", self.cellsize)));
        }
        if !(self.xllcorner.is_finite() && self.yllcorner.is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        if !self.nodata.is_finite() {
            return Err(Error::InvalidGrid("nodata sentinel must be finite".into()));
        }
        if self.crs.is_geographic() {
            // Allow for cellsizes such as 0.000833333 that do not tile a degree exactly.
            const SLACK: f64 = 1e-6;
            let (x0, x1) = (self.xllcorner, self.xmax());
            let (y0, y1) = (self.yllcorner, self.ytop());
            if x0 < -180.0 - SLACK || x1 > 180.0 + SLACK || y0 < -90.0 - SLACK || y1 > 90.0 + SLACK {
                return Err(Error::InvalidGrid(format!(
                    "geographic extent [{x0}, {x1}] x [{y0}, {y1}] exceeds [-180, 180] x [-90, 90]"
                )));
            }
        }
        if let Crs::Utm { zone, .. } = self.crs {
            if !(1..=60).contains(&zone) {
                return Err(Error::InvalidZone(zone));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ncols * self.nrows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn xmax(&self) -> f64 {
        self.xllcorner + self.ncols as f64 * self.cellsize
    }

    pub fn ytop(&self) -> f64 {
        self.yllcorner + self.nrows as f64 * self.cellsize
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.ncols + col
    }

    #[inline]
    pub fn row_col(&self, index: usize) -> (usize, usize) {
        (index / self.ncols, index % self.ncols)
    }

    pub fn same_shape(&self, other: &GridHeader) -> bool {
        self.ncols == other.ncols && self.nrows == other.nrows
    }

    pub(crate) fn check_same_shape(&self, other: &GridHeader, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                other.ncols, other.nrows, self.ncols, self.nrows
            )))
        }
    }

    pub fn cell_center(&self, row: usize, col: usize) -> Coord {
        Coord { x: self.xllcorner + (col as f64 + 0.5) * self.cellsize, y: self.row_center_y(row) }
    }

    pub fn row_center_y(&self, row: usize) -> f64 {
        self.ytop() - (row as f64 + 0.5) * self.cellsize
    }

    /// Corner of the vertex lattice: `i` counts columns from the west edge,
    /// `j` counts rows from the north edge.
    pub fn vertex(&self, i: usize, j: usize) -> Coord {
        Coord { x: self.xllcorner + i as f64 * self.cellsize, y: self.ytop() - j as f64 * self.cellsize }
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x >= self.xllcorner && c.x <= self.xmax() && c.y >= self.yllcorner && c.y <= self.ytop()
    }

    /// East-west and north-south extent of one cell in meters for the given row.
    /// Geographic grids use the spherical model: the east-west size shrinks
    /// with the cosine of the row's center latitude.
    pub fn cell_size_m(&self, row: usize) -> (f64, f64) {
        match self.crs {
            Crs::Utm { .. } => (self.cellsize, self.cellsize),
            Crs::GeographicWgs84 => {
                let dy = self.cellsize * METERS_PER_DEGREE;
                let lat = self.row_center_y(row).to_radians();
                (dy * lat.cos(), dy)
            }
        }
    }

    /// Area of any cell in `row`, in square meters.
    pub fn cell_area_m2(&self, row: usize) -> f64 {
        match self.crs {
            Crs::Utm { .. } => self.cellsize * self.cellsize,
            Crs::GeographicWgs84 => {
                let side = self.cellsize * METERS_PER_DEGREE;
                side * side * self.row_center_y(row).to_radians().cos()
            }
        }
    }

    /// Converts offsets in CRS units around `origin` into local meters.
    /// Geographic grids use an equirectangular projection about `origin`.
    pub(crate) fn to_local_m(&self, origin: Coord, c: Coord) -> (f64, f64) {
        match self.crs {
            Crs::Utm { .. } => (c.x - origin.x, c.y - origin.y),
            Crs::GeographicWgs84 => {
                let k = origin.y.to_radians().cos();
                ((c.x - origin.x) * METERS_PER_DEGREE * k, (c.y - origin.y) * METERS_PER_DEGREE)
            }
        }
    }
}

/// A single-band raster with row-major values, row 0 northernmost.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    header: GridHeader,
    values: Vec<f64>,
}

impl Grid {
    pub fn new(header: GridHeader, values: Vec<f64>) -> Result<Self> {
        header.validate()?;
        if values.len() != header.len() {
            return Err(Error::CellCountMismatch { expected: header.len(), found: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite() && *v != header.nodata) {
            let (row, col) = header.row_col(i);
            return Err(Error::InvalidGrid(format!("non-finite value at row {row}, col {col}")));
        }
        Ok(Grid { header, values })
    }

    pub fn from_fn(header: GridHeader, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(header.len());
        for row in 0..header.nrows {
            for col in 0..header.ncols {
                values.push(f(row, col));
            }
        }
        Grid::new(header, values)
    }

    pub fn filled(header: GridHeader, value: f64) -> Result<Self> {
        Grid::new(header, vec![value; header.len()])
    }

    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn ncols(&self) -> usize {
        self.header.ncols
    }

    pub fn nrows(&self) -> usize {
        self.header.nrows
    }

    pub fn nodata(&self) -> f64 {
        self.header.nodata
    }

    #[inline]
    pub fn is_nodata(&self, v: f64) -> bool {
        v == self.header.nodata
    }

    /// Raw stored value, nodata sentinel included.
    #[inline]
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[self.header.index(row, col)]
    }

    /// Valid value at `(row, col)`, or `None` for nodata.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        let v = self.value(row, col);
        (!self.is_nodata(v)).then_some(v)
    }

    #[inline]
    pub fn get_index(&self, index: usize) -> Option<f64> {
        let v = self.values[index];
        (!self.is_nodata(v)).then_some(v)
    }

    pub fn valid_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied().filter(move |v| !self.is_nodata(*v))
    }

    pub fn valid_count(&self) -> usize {
        self.valid_values().count()
    }

    /// Minimum and maximum over valid cells.
    pub fn min_max(&self) -> Option<(f64, f64)> {
        self.valid_values().fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
    }

    /// Total area of valid cells in square meters.
    pub fn valid_area_m2(&self) -> f64 {
        (0..self.nrows())
            .map(|r| {
                let n = (0..self.ncols()).filter(|&c| self.get(r, c).is_some()).count();
                n as f64 * self.header.cell_area_m2(r)
            })
            .sum()
    }

    /// New grid with the same header whose values are `f(value)` on valid
    /// cells; nodata stays nodata.
    pub fn map_valid(&self, mut f: impl FnMut(f64) -> f64) -> Result<Grid> {
        let nodata = self.nodata();
        let values = self.values.iter().map(|&v| if v == nodata { v } else { f(v) }).collect();
        Grid::new(self.header, values)
    }

    pub fn with_crs(mut self, crs: Crs) -> Result<Grid> {
        self.header.crs = crs;
        self.header.validate()?;
        Ok(self)
    }
}

/// Per-cell eligibility flags aligned with a companion raster.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskGrid {
    header: GridHeader,
    eligible: Vec<bool>,
}

impl MaskGrid {
    pub fn new(header: GridHeader, eligible: Vec<bool>) -> Result<Self> {
        header.validate()?;
        if eligible.len() != header.len() {
            return Err(Error::CellCountMismatch { expected: header.len(), found: eligible.len() });
        }
        Ok(MaskGrid { header, eligible })
    }

    pub fn from_fn(header: GridHeader, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut eligible = Vec::with_capacity(header.len());
        for row in 0..header.nrows {
            for col in 0..header.ncols {
                eligible.push(f(row, col));
            }
        }
        MaskGrid::new(header, eligible)
    }

    /// Cells that are valid and non-zero in `grid` become eligible.
    pub fn from_grid(grid: &Grid) -> MaskGrid {
        let eligible = grid.values().iter().map(|&v| !grid.is_nodata(v) && v != 0.0).collect();
        MaskGrid { header: *grid.header(), eligible }
    }

    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn eligible(&self) -> &[bool] {
        &self.eligible
    }

    #[inline]
    pub fn is_eligible(&self, row: usize, col: usize) -> bool {
        self.eligible[self.header.index(row, col)]
    }

    pub fn count(&self) -> usize {
        self.eligible.iter().filter(|&&e| e).count()
    }
}
