//! WGS84 <-> UTM conversion and great-circle distance.
//!
//! The projection uses the Krüger series in the third flattening, carried to
//! sixth order, which is accurate to a few nanometers within a UTM zone.

use crate::error::{Error, Result};
use crate::raster::{GeoPoint, Hemisphere};

/// Spherical Earth radius used for distances and cell areas.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

const WGS84_A: f64 = 6_378_137.0;
const WGS84_F: f64 = 1.0 / 298.257_223_563;
const UTM_K0: f64 = 0.9996;
const FALSE_EASTING: f64 = 500_000.0;
const FALSE_NORTHING_SOUTH: f64 = 10_000_000.0;
const MAX_LATITUDE: f64 = 84.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtmPoint {
    pub easting: f64,
    pub northing: f64,
    pub zone: u8,
    pub hemisphere: Hemisphere,
}

/// Longitude of a zone's central meridian, degrees.
pub fn central_meridian(zone: u8) -> f64 {
    -183.0 + 6.0 * zone as f64
}

/// Standard zone for a longitude (no Norway/Svalbard exceptions).
pub fn zone_for_lon(lon: f64) -> u8 {
    let z = ((lon + 180.0) / 6.0).floor() as i32 + 1;
    z.clamp(1, 60) as u8
}

struct Series {
    e: f64,
    /// Rectifying radius times the scale factor.
    k0_a: f64,
    alpha: [f64; 6],
    beta: [f64; 6],
}

fn series() -> &'static Series {
    static SERIES: std::sync::OnceLock<Series> = std::sync::OnceLock::new();
    SERIES.get_or_init(|| {
        let f = WGS84_F;
        let n = f / (2.0 - f);
        let (n2, n3) = (n * n, n * n * n);
        let (n4, n5, n6) = (n3 * n, n3 * n2, n3 * n3);
        let a = WGS84_A / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
        let alpha = [
            n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0 - 127.0 * n5 / 288.0 + 7891.0 * n6 / 37800.0,
            13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0 + 281.0 * n5 / 630.0 - 1983433.0 * n6 / 1935360.0,
            61.0 * n3 / 240.0 - 103.0 * n4 / 140.0 + 15061.0 * n5 / 26880.0 + 167603.0 * n6 / 181440.0,
            49561.0 * n4 / 161280.0 - 179.0 * n5 / 168.0 + 6601661.0 * n6 / 7257600.0,
            34729.0 * n5 / 80640.0 - 3418889.0 * n6 / 1995840.0,
            212378941.0 * n6 / 319334400.0,
        ];
        let beta = [
            n / 2.0 - 2.0 * n2 / 3.0 + 37.0 * n3 / 96.0 - n4 / 360.0 - 81.0 * n5 / 512.0 + 96199.0 * n6 / 604800.0,
            n2 / 48.0 + n3 / 15.0 - 437.0 * n4 / 1440.0 + 46.0 * n5 / 105.0 - 1118711.0 * n6 / 3870720.0,
            17.0 * n3 / 480.0 - 37.0 * n4 / 840.0 - 209.0 * n5 / 4480.0 + 5569.0 * n6 / 90720.0,
            4397.0 * n4 / 161280.0 - 11.0 * n5 / 504.0 - 830251.0 * n6 / 7257600.0,
            4583.0 * n5 / 161280.0 - 108847.0 * n6 / 3991680.0,
            20648693.0 * n6 / 638668800.0,
        ];
        Series { e: (f * (2.0 - f)).sqrt(), k0_a: UTM_K0 * a, alpha, beta }
    })
}

/// Conformal-latitude tangent from the geodetic one.
fn tau_prime(tau: f64, e: f64) -> f64 {
    let sigma = (e * (e * tau / (1.0 + tau * tau).sqrt()).atanh()).sinh();
    tau * (1.0 + sigma * sigma).sqrt() - sigma * (1.0 + tau * tau).sqrt()
}

fn check_zone(zone: u8) -> Result<()> {
    if (1..=60).contains(&zone) {
        Ok(())
    } else {
        Err(Error::InvalidZone(zone))
    }
}

/// Projects `p` into `zone`; the hemisphere follows the sign of the latitude.
/// Points far from the zone's central meridian still project, with degrading
/// accuracy.
pub fn geo_to_utm(p: GeoPoint, zone: u8) -> Result<UtmPoint> {
    let hemisphere = if p.lat < 0.0 { Hemisphere::South } else { Hemisphere::North };
    geo_to_utm_in(p, zone, hemisphere)
}

/// Like [`geo_to_utm`] but with the false northing of a fixed hemisphere, as
/// needed when sampling a grid that straddles the equator.
pub fn geo_to_utm_in(p: GeoPoint, zone: u8, hemisphere: Hemisphere) -> Result<UtmPoint> {
    check_zone(zone)?;
    if !(p.lat.abs() < MAX_LATITUDE) || !p.lon.is_finite() {
        return Err(Error::LatitudeOutOfRange(p.lat));
    }
    let s = series();
    let phi = p.lat.to_radians();
    let lam = (p.lon - central_meridian(zone)).to_radians();

    let tp = tau_prime(phi.tan(), s.e);
    let xi_p = tp.atan2(lam.cos());
    let eta_p = (lam.sin() / (tp * tp + lam.cos() * lam.cos()).sqrt()).asinh();

    let mut xi = xi_p;
    let mut eta = eta_p;
    for (j, a) in s.alpha.iter().enumerate() {
        let k = 2.0 * (j + 1) as f64;
        xi += a * (k * xi_p).sin() * (k * eta_p).cosh();
        eta += a * (k * xi_p).cos() * (k * eta_p).sinh();
    }

    let easting = FALSE_EASTING + s.k0_a * eta;
    let mut northing = s.k0_a * xi;
    if hemisphere == Hemisphere::South {
        northing += FALSE_NORTHING_SOUTH;
    }
    Ok(UtmPoint { easting, northing, zone, hemisphere })
}

pub fn utm_to_geo(u: UtmPoint) -> Result<GeoPoint> {
    check_zone(u.zone)?;
    let s = series();
    let northing = match u.hemisphere {
        Hemisphere::North => u.northing,
        Hemisphere::South => u.northing - FALSE_NORTHING_SOUTH,
    };
    let xi = northing / s.k0_a;
    let eta = (u.easting - FALSE_EASTING) / s.k0_a;

    let mut xi_p = xi;
    let mut eta_p = eta;
    for (j, b) in s.beta.iter().enumerate() {
        let k = 2.0 * (j + 1) as f64;
        xi_p -= b * (k * xi).sin() * (k * eta).cosh();
        eta_p -= b * (k * xi).cos() * (k * eta).sinh();
    }

    let sinh_eta = eta_p.sinh();
    let sin_xi = xi_p.sin();
    let cos_xi = xi_p.cos();
    let tau_p = sin_xi / (sinh_eta * sinh_eta + cos_xi * cos_xi).sqrt();

    // Newton iteration for tau from tau'.
    let e = s.e;
    let e2 = e * e;
    let mut tau = tau_p;
    for _ in 0..8 {
        let tp = tau_prime(tau, e);
        let dtau = (tau_p - tp) / (1.0 + tp * tp).sqrt() * (1.0 + (1.0 - e2) * tau * tau)
            / ((1.0 - e2) * (1.0 + tau * tau).sqrt());
        tau += dtau;
        if dtau.abs() < 1e-14 * tau.abs().max(1.0) {
            break;
        }
    }
    let lat = tau.atan().to_degrees();
    let lam = sinh_eta.atan2(cos_xi).to_degrees();
    Ok(GeoPoint { lon: central_meridian(u.zone) + lam, lat })
}

/// Great-circle distance on the reference sphere. The central angle is the
/// law-of-cosines angle, evaluated in haversine form so that short distances
/// keep full precision.
pub fn great_circle_distance(a: GeoPoint, b: GeoPoint) -> f64 {
    let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
    let dp = p2 - p1;
    let dl = (b.lon - a.lon).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * h.sqrt().min(1.0).asin() * EARTH_RADIUS_M
}
