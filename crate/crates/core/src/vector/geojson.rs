//! GeoJSON feature collections. Coordinates are written in the source
//! grid's CRS, which is named in a top-level `crs` member.

use serde_json::{json, Map, Value};

use crate::contour::ContourSet;
use crate::hydro::{RiverSegment, WaterBody};
use crate::polygon::RegionPolygon;
use crate::raster::{Coord, Crs, Hemisphere};
use crate::scarcity::ScarcityClass;

/// OGC name of a CRS, e.g. `EPSG:32643` for UTM 43N.
pub fn crs_name(crs: Crs) -> String {
    match crs {
        Crs::GeographicWgs84 => "urn:ogc:def:crs:OGC:1.3:CRS84".to_string(),
        Crs::Utm { zone, hemisphere } => {
            let base = if hemisphere == Hemisphere::North { 32600 } else { 32700 };
            format!("urn:ogc:def:crs:EPSG::{}", base + zone as u32)
        }
    }
}

fn position(c: &Coord) -> Value {
    json!([c.x, c.y])
}

fn line(points: &[Coord]) -> Value {
    Value::Array(points.iter().map(position).collect())
}

fn polygon_geometry(p: &RegionPolygon) -> Value {
    let rings: Vec<Value> = std::iter::once(&p.outer_ring).chain(&p.holes).map(|r| line(r)).collect();
    json!({ "type": "Polygon", "coordinates": rings })
}

fn feature(geometry: Value, properties: Map<String, Value>) -> Value {
    json!({ "type": "Feature", "properties": properties, "geometry": geometry })
}

pub fn feature_collection(crs: Crs, features: Vec<Value>) -> String {
    let doc = json!({
        "type": "FeatureCollection",
        "crs": { "type": "name", "properties": { "name": crs_name(crs) } },
        "features": features,
    });
    let mut s = serde_json::to_string(&doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn props(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn contours_geojson(set: &ContourSet, crs: Crs) -> String {
    let features = set
        .lines
        .iter()
        .map(|l| {
            feature(json!({ "type": "LineString", "coordinates": line(&l.points) }), props([("level", json!(l.level))]))
        })
        .collect();
    feature_collection(crs, features)
}

pub fn polygons_geojson(polygons: &[RegionPolygon], crs: Crs) -> String {
    let features = polygons
        .iter()
        .map(|p| {
            feature(
                polygon_geometry(p),
                props([
                    ("pixel_value", json!(p.pixel_value)),
                    ("cell_count", json!(p.cell_count)),
                    ("area_ha", json!(p.area_ha)),
                ]),
            )
        })
        .collect();
    feature_collection(crs, features)
}

pub fn water_bodies_geojson(bodies: &[WaterBody], crs: Crs) -> String {
    let features = bodies
        .iter()
        .enumerate()
        .map(|(k, b)| {
            feature(
                polygon_geometry(&b.polygon),
                props([
                    ("name", json!(format!("body_{}", k + 1))),
                    ("area_ha", json!(b.area_ha())),
                    ("mean_elevation_m", json!(b.mean_elevation)),
                ]),
            )
        })
        .collect();
    feature_collection(crs, features)
}

pub fn rivers_geojson(rivers: &[RiverSegment], crs: Crs) -> String {
    let features = rivers
        .iter()
        .map(|r| {
            feature(
                json!({ "type": "LineString", "coordinates": line(&r.path) }),
                props([("name", json!(r.name)), ("length_km", json!(r.length_km))]),
            )
        })
        .collect();
    feature_collection(crs, features)
}

/// Zone polygons whose `pixel_value` is a scarcity class code.
pub fn zones_geojson(zones: &[RegionPolygon], crs: Crs) -> String {
    let features = zones
        .iter()
        .filter_map(|z| {
            let class = ScarcityClass::from_code(z.pixel_value as u8)?;
            Some(feature(
                polygon_geometry(z),
                props([
                    ("class", json!(class.label())),
                    ("color", json!(class.color())),
                    ("area_ha", json!(z.area_ha)),
                ]),
            ))
        })
        .collect();
    feature_collection(crs, features)
}
