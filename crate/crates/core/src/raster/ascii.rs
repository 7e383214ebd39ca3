//! ARC/INFO ASCII Grid reader and writer.
//!
//! ```text
//! ncols         4
//! nrows         2
//! xllcorner     0.0
//! yllcorner     0.0
//! cellsize      50.0
//! NODATA_value  -9999
//! -9999 20 100 36
//! 3 8 35 10
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::{Crs, Grid, GridHeader, DEFAULT_NODATA};
use crate::error::{Error, Result};

#[derive(Default)]
struct RawHeader {
    ncols: Option<usize>,
    nrows: Option<usize>,
    x: Option<(f64, bool)>,
    y: Option<(f64, bool)>,
    cellsize: Option<f64>,
    nodata: Option<f64>,
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str) -> Result<()> {
    if slot.is_some() {
        return Err(Error::MalformedHeader(format!("duplicate key {key}")));
    }
    *slot = Some(value);
    Ok(())
}

fn header_real(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::MalformedHeader(format!("{key}: expected a number, got {value:?}")))
}

fn header_count(key: &str, value: &str) -> Result<usize> {
    match value.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::MalformedHeader(format!("{key}: expected a positive integer, got {value:?}"))),
    }
}

fn is_header_line(first_token: &str) -> bool {
    first_token.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && !matches!(first_token.to_ascii_lowercase().as_str(), "nan" | "inf" | "infinity")
}

/// Parses an ASCII Grid, inferring a geographic CRS. Fails if the declared
/// extent does not fit in longitude/latitude bounds; use
/// [`parse_ascii_grid_with_crs`] for projected grids.
pub fn parse_ascii_grid(bytes: &[u8]) -> Result<Grid> {
    parse_ascii_grid_with_crs(bytes, Crs::GeographicWgs84)
}

pub fn parse_ascii_grid_with_crs(bytes: &[u8], crs: Crs) -> Result<Grid> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::MalformedHeader(format!("input is not UTF-8: {e}")))?;

    let mut raw = RawHeader::default();
    let mut body_start = text.len();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let mut tokens = line.split_ascii_whitespace();
        match tokens.next() {
            None => {}
            Some(key) if is_header_line(key) => {
                let value = tokens.next().ok_or_else(|| Error::MalformedHeader(format!("{key}: missing value")))?;
                if let Some(extra) = tokens.next() {
                    return Err(Error::MalformedHeader(format!("{key}: unexpected token {extra:?}")));
                }
                match key.to_ascii_lowercase().as_str() {
                    "ncols" => set_once(&mut raw.ncols, header_count(key, value)?, "ncols")?,
                    "nrows" => set_once(&mut raw.nrows, header_count(key, value)?, "nrows")?,
                    "xllcorner" => set_once(&mut raw.x, (header_real(key, value)?, false), "xll")?,
                    "xllcenter" => set_once(&mut raw.x, (header_real(key, value)?, true), "xll")?,
                    "yllcorner" => set_once(&mut raw.y, (header_real(key, value)?, false), "yll")?,
                    "yllcenter" => set_once(&mut raw.y, (header_real(key, value)?, true), "yll")?,
                    "cellsize" => set_once(&mut raw.cellsize, header_real(key, value)?, "cellsize")?,
                    "nodata_value" => set_once(&mut raw.nodata, header_real(key, value)?, "nodata_value")?,
                    _ => return Err(Error::MalformedHeader(format!("unknown key {key:?}"))),
                }
            }
            Some(_) => {
                body_start = offset;
                break;
            }
        }
        offset += line.len();
    }

    let missing = |k: &str| Error::MalformedHeader(format!("missing mandatory key {k}"));
    let ncols = raw.ncols.ok_or_else(|| missing("ncols"))?;
    let nrows = raw.nrows.ok_or_else(|| missing("nrows"))?;
    let (x, x_center) = raw.x.ok_or_else(|| missing("xllcorner"))?;
    let (y, y_center) = raw.y.ok_or_else(|| missing("yllcorner"))?;
    let cellsize = raw.cellsize.ok_or_else(|| missing("cellsize"))?;
    if cellsize <= 0.0 {
        return Err(Error::MalformedHeader(format!("cellsize must be positive, got {cellsize}")));
    }
    let nodata = raw.nodata.unwrap_or(DEFAULT_NODATA);
    let expected = ncols.checked_mul(nrows).ok_or_else(|| Error::MalformedHeader("ncols * nrows overflows".into()))?;

    let header = GridHeader {
        ncols,
        nrows,
        xllcorner: if x_center { x - cellsize / 2.0 } else { x },
        yllcorner: if y_center { y - cellsize / 2.0 } else { y },
        cellsize,
        nodata,
        crs,
    };
    header.validate()?;

    let mut values = Vec::with_capacity(expected);
    let mut found = 0usize;
    let mut bad_cell = None;
    for token in text[body_start..].split_ascii_whitespace() {
        if found < expected && bad_cell.is_none() {
            match token.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => bad_cell = Some((token.to_string(), found)),
            }
        }
        found += 1;
    }
    if found != expected {
        return Err(Error::CellCountMismatch { expected, found });
    }
    if let Some((token, index)) = bad_cell {
        return Err(Error::NonNumericCell { token, index });
    }
    Grid::new(header, values)
}

pub fn read_ascii_grid(path: impl AsRef<Path>, crs: Option<Crs>) -> Result<Grid> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::from(e).in_file(path))?;
    parse_ascii_grid_with_crs(&bytes, crs.unwrap_or(Crs::GeographicWgs84)).map_err(|e| e.in_file(path))
}

/// Formats `v` with six significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-4, 6)`, scientific otherwise, trailing zeros dropped.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_fraction(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (5 - exp) as usize;
    trim_fraction(&format!("{v:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Serializes a grid: lowercase keys, corner origin, LF line endings,
/// header reals in shortest round-trip form, cell values to six
/// significant digits, nodata cells as the exact sentinel token.
pub fn write_ascii_grid(grid: &Grid) -> String {
    let h = grid.header();
    let mut out = String::with_capacity(64 + h.len() * 8);
    let _ = writeln!(out, "ncols {}", h.ncols);
    let _ = writeln!(out, "nrows {}", h.nrows);
    let _ = writeln!(out, "xllcorner {}", h.xllcorner);
    let _ = writeln!(out, "yllcorner {}", h.yllcorner);
    let _ = writeln!(out, "cellsize {}", h.cellsize);
    let _ = writeln!(out, "nodata_value {}", h.nodata);
    let nodata_token = h.nodata.to_string();
    for row in 0..h.nrows {
        for col in 0..h.ncols {
            if col > 0 {
                out.push(' ');
            }
            match grid.get(row, col) {
                Some(v) => out.push_str(&format_sig6(v)),
                None => out.push_str(&nodata_token),
            }
        }
        out.push('\n');
    }
    out
}
