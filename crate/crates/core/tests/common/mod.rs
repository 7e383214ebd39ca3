#![allow(dead_code)]

use std::path::PathBuf;

use terracarta::raster::{Crs, Grid, GridHeader};

pub const SIZE: usize = 64;
pub const CELL: f64 = 0.000833333;
pub const XLL: f64 = 76.40;
pub const YLL: f64 = 18.30;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

fn base(r: f64, c: f64) -> f64 {
    470.0 + 2.0 * c + 1.2 * (r - 44.0).abs()
}

/// Flat-bottomed bowl sunk 25 m below the surface at its center.
fn bowl(z: f64, r: f64, c: f64, center: (f64, f64), flat: f64, outer: f64) -> f64 {
    let d = ((r - center.0).powi(2) + (c - center.1).powi(2)).sqrt();
    let floor = base(center.0, center.1) - 25.0;
    let t = smoothstep((d - flat) / (outer - flat));
    floor + t * (z - floor)
}

/// The bundled 64x64 test district: a surface rising eastward and away from
/// an east-west drainage line at row 44, an east-west ridge at row 24, a deep
/// valley on the western drainage line and two flat-bottomed bowls in the
/// north-west and north-east.
pub fn mini_district() -> Grid {
    let h = GridHeader::new(SIZE, SIZE, XLL, YLL, CELL, Crs::GeographicWgs84).unwrap();
    let grid = Grid::from_fn(h, |r, c| {
        let (r, c) = (r as f64, c as f64);
        let ridge = 20.0 * (-((r - 24.0) / 2.5).powi(2)).exp() * smoothstep((c - 16.0) / 8.0);
        let valley = -12.0 * (-((r - 44.0) / 2.0).powi(2)).exp() * (1.0 - smoothstep((c - 28.0) / 12.0));
        let mut z = base(r, c) + ridge + valley;
        z = bowl(z, r, c, (12.0, 12.0), 5.0, 8.0);
        z = bowl(z, r, c, (14.0, 50.0), 3.5, 6.0);
        z
    })
    .unwrap();
    // Store exactly what the file holds.
    terracarta::raster::parse_ascii_grid(terracarta::raster::write_ascii_grid(&grid).as_bytes()).unwrap()
}

/// Villages as `(name, row, col, surveyed elevation)`.
pub const VILLAGES: [(&str, usize, usize, Option<f64>); 6] = [
    ("Lakeside", 15, 12, None),
    ("Riverbend", 44, 10, Some(497.5)),
    ("Northgate", 4, 30, None),
    ("Ridgeview", 30, 26, None),
    ("Eastfield", 40, 56, None),
    ("Southcorner", 62, 62, None),
];

pub fn villages_csv() -> String {
    let h = mini_district().header().to_owned();
    let mut s = String::from("name,lon,lat,elevation_m\n");
    for (name, r, c, z) in VILLAGES {
        let p = h.cell_center(r, c);
        let z = z.map(|z| z.to_string()).unwrap_or_default();
        s.push_str(&format!("{name},{:.7},{:.7},{z}\n", p.x, p.y));
    }
    s
}
