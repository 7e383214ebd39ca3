//! Converts between geographic coordinates and UTM, and measures a
//! great-circle distance.

use terracarta::geodesy::{geo_to_utm, great_circle_distance, utm_to_geo, zone_for_lon};
use terracarta::raster::GeoPoint;

fn main() -> terracarta::Result<()> {
    let places = [("Latur", GeoPoint::new(76.5604, 18.4088)), ("Pune", GeoPoint::new(73.8567, 18.5204))];

    for (name, p) in places {
        let zone = zone_for_lon(p.lon);
        let u = geo_to_utm(p, zone)?;
        let back = utm_to_geo(u)?;
        println!(
            "{name:<6} ({:.4}, {:.4}) -> zone {}: E {:.2} N {:.2} -> ({:.9}, {:.9})",
            p.lon, p.lat, u.zone, u.easting, u.northing, back.lon, back.lat
        );
    }
    let d = great_circle_distance(places[0].1, places[1].1);
    println!("great-circle distance {:.1} km", d / 1000.0);
    Ok(())
}
