//! Vector outputs: GeoJSON layers and SVG maps.

pub mod geojson;
pub mod svg;

pub use geojson::{
    contours_geojson, crs_name, feature_collection, polygons_geojson, rivers_geojson, water_bodies_geojson,
    zones_geojson,
};
pub use svg::{render_svg, SvgLayer, SvgShape, CANVAS_WIDTH};

use crate::contour::ContourSet;
use crate::hydro::{RiverSegment, WaterBody};
use crate::polygon::RegionPolygon;
use crate::raster::Crs;
use crate::scarcity::ScarcityClass;

fn polygon_shape(p: &RegionPolygon, fill: &str) -> SvgShape {
    SvgShape::Polygon {
        rings: std::iter::once(&p.outer_ring).chain(&p.holes).cloned().collect(),
        fill: fill.to_string(),
    }
}

/// Scarcity zones filled yellow, orange and red by class.
pub fn zones_layer(zones: &[RegionPolygon], crs: Crs) -> SvgLayer {
    let mut layer = SvgLayer::new("scarcity_zones", crs);
    for z in zones {
        if let Some(class) = ScarcityClass::from_code(z.pixel_value as u8) {
            layer.shapes.push(polygon_shape(z, class.color()));
        }
    }
    layer
}

pub fn water_layer(bodies: &[WaterBody], crs: Crs) -> SvgLayer {
    let mut layer = SvgLayer::new("water_bodies", crs);
    layer.shapes.extend(bodies.iter().map(|b| polygon_shape(&b.polygon, "#3a7bd5")));
    layer
}

pub fn rivers_layer(rivers: &[RiverSegment], crs: Crs) -> SvgLayer {
    let mut layer = SvgLayer::new("rivers", crs);
    layer.shapes.extend(rivers.iter().map(|r| SvgShape::Line { points: r.path.clone(), stroke: "#1f4e99".into() }));
    layer
}

pub fn contours_layer(set: &ContourSet, crs: Crs) -> SvgLayer {
    let mut layer = SvgLayer::new("contours", crs);
    layer
        .shapes
        .extend(set.lines.iter().map(|l| SvgShape::Line { points: l.points.clone(), stroke: "#8b5a2b".into() }));
    layer
}

/// Polygons shaded on a grey ramp by `pixel_value`, darkest for the highest.
pub fn polygons_layer(polygons: &[RegionPolygon], crs: Crs) -> SvgLayer {
    let (lo, hi) =
        polygons.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.pixel_value), hi.max(p.pixel_value)));
    let mut layer = SvgLayer::new("polygons", crs);
    for p in polygons {
        let t = if hi > lo { (p.pixel_value - lo) / (hi - lo) } else { 0.0 };
        let g = (230.0 - 180.0 * t).round() as u8;
        layer.shapes.push(polygon_shape(p, &format!("#{g:02x}{g:02x}{g:02x}")));
    }
    layer
}
