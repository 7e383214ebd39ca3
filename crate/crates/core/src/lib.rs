//! Terrain and water-resource analysis on gridded elevation models.
//!
//! The crate reads ARC/INFO ASCII grids ([`raster`]) and derives contours and
//! elevation bands ([`contour`]), region polygons ([`polygon`]), slope, flow
//! routing, water bodies and rivers ([`hydro`]), and a village-level
//! water-scarcity assessment ([`scarcity`], [`pipeline`]). Results are
//! written as CSV, GeoJSON or SVG ([`vector`]). The `terracarta` binary
//! wraps all of this behind one command per task ([`cli`]).
//!
//! ```no_run
//! use terracarta::pipeline::{run_scarcity, ScarcityOptions};
//! use terracarta::raster::read_ascii_grid;
//! use terracarta::scarcity::read_villages;
//!
//! let dem = read_ascii_grid("district.asc", None)?;
//! let villages = read_villages("villages.csv")?;
//! let run = run_scarcity(&dem, &villages, &ScarcityOptions::default())?;
//! print!("{}", run.report_csv());
//! # Ok::<(), terracarta::Error>(())
//! ```

pub mod cli;
pub mod contour;
pub mod error;
pub mod geodesy;
pub mod hydro;
pub mod pipeline;
pub mod polygon;
pub mod raster;
pub mod scarcity;
pub mod vector;

pub use error::{Error, Result};
