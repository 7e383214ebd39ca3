//! Deterministic SVG map rendering.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::raster::{Coord, Crs};

pub const CANVAS_WIDTH: f64 = 1024.0;

#[derive(Debug, Clone, PartialEq)]
pub enum SvgShape {
    /// Outer ring followed by holes, filled with the even-odd rule.
    Polygon {
        rings: Vec<Vec<Coord>>,
        fill: String,
    },
    Line {
        points: Vec<Coord>,
        stroke: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgLayer {
    pub name: String,
    pub crs: Crs,
    pub shapes: Vec<SvgShape>,
}

impl SvgLayer {
    pub fn new(name: impl Into<String>, crs: Crs) -> Self {
        SvgLayer { name: name.into(), crs, shapes: Vec::new() }
    }

    fn coords(&self) -> impl Iterator<Item = &Coord> {
        self.shapes.iter().flat_map(|s| match s {
            SvgShape::Polygon { rings, .. } => rings.iter().flatten().collect::<Vec<_>>(),
            SvgShape::Line { points, .. } => points.iter().collect(),
        })
    }
}

struct Frame {
    minx: f64,
    maxy: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    fn apply(&self, c: &Coord) -> (f64, f64) {
        ((c.x - self.minx) * self.sx, (self.maxy - c.y) * self.sy)
    }
}

fn path_data(rings: &[Vec<Coord>], frame: &Frame, close: bool) -> String {
    let mut d = String::new();
    for ring in rings {
        for (k, c) in ring.iter().enumerate() {
            let (x, y) = frame.apply(c);
            let cmd = if k == 0 { "M" } else { "L" };
            if !d.is_empty() {
                d.push(' ');
            }
            let _ = write!(d, "{cmd} {x:.2} {y:.2}");
        }
        if close {
            d.push_str(" Z");
        }
    }
    d
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders layers onto a canvas 1024 px wide whose height keeps the data's
/// aspect ratio (ground distances for geographic data). One `<g>` per layer,
/// in order.
pub fn render_svg(layers: &[SvgLayer]) -> Result<String> {
    let mut all = layers.iter().flat_map(SvgLayer::coords).peekable();
    if all.peek().is_none() {
        return Err(Error::EmptyLayerSet);
    }
    let crs = layers[0].crs;
    if layers.iter().any(|l| l.crs != crs) {
        return Err(Error::InvalidParameter("layers must share one CRS".into()));
    }
    let (mut minx, mut miny, mut maxx, mut maxy) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for c in all {
        minx = minx.min(c.x);
        maxx = maxx.max(c.x);
        miny = miny.min(c.y);
        maxy = maxy.max(c.y);
    }
    let kx = match crs {
        Crs::GeographicWgs84 => (0.5 * (miny + maxy)).to_radians().cos(),
        Crs::Utm { .. } => 1.0,
    };
    let (w, h) = ((maxx - minx) * kx, maxy - miny);
    let scale = if w > 0.0 {
        CANVAS_WIDTH / w
    } else if h > 0.0 {
        CANVAS_WIDTH / h
    } else {
        1.0
    };
    let height = (h * scale).round().max(1.0);
    let frame = Frame { minx, maxy, sx: scale * kx, sy: scale };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS_WIDTH}" height="{height}" viewBox="0 0 {CANVAS_WIDTH} {height}">"#
    );
    for layer in layers {
        let _ = writeln!(out, r#"  <g id="{}">"#, escape(&layer.name));
        for shape in &layer.shapes {
            match shape {
                SvgShape::Polygon { rings, fill } => {
                    let _ = writeln!(
                        out,
                        r#"    <path d="{}" fill="{}" fill-rule="evenodd" stroke="black" stroke-width="0.5"/>"#,
                        path_data(rings, &frame, true),
                        escape(fill)
                    );
                }
                SvgShape::Line { points, stroke } => {
                    let _ = writeln!(
                        out,
                        r#"    <path d="{}" fill="none" stroke="{}" stroke-width="1"/>"#,
                        path_data(std::slice::from_ref(points), &frame, false),
                        escape(stroke)
                    );
                }
            }
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Hemisphere;

    fn square() -> SvgLayer {
        let ring = vec![
            Coord::new(0.0, 0.0),
            Coord::new(100.0, 0.0),
            Coord::new(100.0, 50.0),
            Coord::new(0.0, 50.0),
            Coord::new(0.0, 0.0),
        ];
        let mut l = SvgLayer::new("zones", Crs::Utm { zone: 43, hemisphere: Hemisphere::North });
        l.shapes.push(SvgShape::Polygon { rings: vec![ring], fill: "yellow".into() });
        l
    }

    #[test]
    fn single_square() {
        let svg = render_svg(&[square()]).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains(r#"width="1024" height="512""#), "{svg}");
        assert!(
            svg.contains(r#"d="M 0.00 512.00 L 1024.00 512.00 L 1024.00 0.00 L 0.00 0.00 L 0.00 512.00 Z""#),
            "{svg}"
        );
        assert!(svg.contains(r#"fill="yellow""#));
        assert_eq!(svg, render_svg(&[square()]).unwrap());
    }

    #[test]
    fn empty_layers() {
        assert!(matches!(render_svg(&[]), Err(Error::EmptyLayerSet)));
        let empty = SvgLayer::new("x", Crs::GeographicWgs84);
        assert!(matches!(render_svg(&[empty]), Err(Error::EmptyLayerSet)));
    }

    #[test]
    fn mixed_crs_rejected() {
        let mut other = square();
        other.crs = Crs::GeographicWgs84;
        assert!(render_svg(&[square(), other]).is_err());
    }
}
