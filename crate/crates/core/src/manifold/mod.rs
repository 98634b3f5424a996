//! Constant-curvature spaces and the oblate spheroid.
//!
//! Each [`Manifold`] supports uniform sampling with respect to its area (or
//! volume) measure and exact geodesic distances. Spheres and the spheroid
//! also solve the direct geodesic problem, which the earth experiment needs
//! to lay out right triangles.

mod spheroid;

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use spheroid::Ellipsoid;

/// Rejection attempts allowed before spheroid sampling is declared broken.
const MAX_REJECTIONS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ManifoldError {
    #[error("invalid manifold parameter: {0}")]
    InvalidParameter(String),
    #[error("point does not belong to a {0} manifold")]
    PointMismatch(&'static str),
    #[error("inverse geodesic iteration did not converge (nearly antipodal points)")]
    SpheroidNonConvergence,
    #[error("direct geodesics are not available on a {0} manifold")]
    UnsupportedManifold(&'static str),
    #[error("rejection sampling exceeded {0} attempts")]
    RejectionCap(usize),
}

/// A Riemannian surface (or 3-sphere) with known geometry.
///
/// Serialized as a tagged JSON object, e.g.
/// `{"type": "hyperbolic", "curvatureScale": 1, "diskRadius": 1.76}`.
/// Spheroid radii are in kilometres; other lengths are unitless.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "type",
    rename_all_fields = "camelCase",
    try_from = "ManifoldRepr",
    into = "ManifoldRepr"
)]
pub enum Manifold {
    Sphere2 { radius: f64 },
    Sphere3 { radius: f64 },
    HyperbolicDisk { curvature_scale: f64, disk_radius: f64 },
    EuclideanDisk { radius: f64 },
    Spheroid { equatorial_radius: f64, polar_radius: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", rename_all_fields = "camelCase")]
enum ManifoldRepr {
    Sphere2 { radius: f64 },
    Sphere3 { radius: f64 },
    Hyperbolic { curvature_scale: f64, disk_radius: f64 },
    Euclidean { radius: f64 },
    Spheroid { equatorial_radius: f64, polar_radius: f64 },
}

impl TryFrom<ManifoldRepr> for Manifold {
    type Error = ManifoldError;

    fn try_from(r: ManifoldRepr) -> Result<Self, Self::Error> {
        let m = match r {
            ManifoldRepr::Sphere2 { radius } => Manifold::Sphere2 { radius },
            ManifoldRepr::Sphere3 { radius } => Manifold::Sphere3 { radius },
            ManifoldRepr::Hyperbolic {
                curvature_scale,
                disk_radius,
            } => Manifold::HyperbolicDisk {
                curvature_scale,
                disk_radius,
            },
            ManifoldRepr::Euclidean { radius } => Manifold::EuclideanDisk { radius },
            ManifoldRepr::Spheroid {
                equatorial_radius,
                polar_radius,
            } => Manifold::Spheroid {
                equatorial_radius,
                polar_radius,
            },
        };
        m.validate()?;
        Ok(m)
    }
}

impl From<Manifold> for ManifoldRepr {
    fn from(m: Manifold) -> Self {
        match m {
            Manifold::Sphere2 { radius } => ManifoldRepr::Sphere2 { radius },
            Manifold::Sphere3 { radius } => ManifoldRepr::Sphere3 { radius },
            Manifold::HyperbolicDisk {
                curvature_scale,
                disk_radius,
            } => ManifoldRepr::Hyperbolic {
                curvature_scale,
                disk_radius,
            },
            Manifold::EuclideanDisk { radius } => ManifoldRepr::Euclidean { radius },
            Manifold::Spheroid {
                equatorial_radius,
                polar_radius,
            } => ManifoldRepr::Spheroid {
                equatorial_radius,
                polar_radius,
            },
        }
    }
}

/// Coordinates of a point on a [`Manifold`].
///
/// Sphere points are ambient vectors of norm equal to the radius. Hyperbolic
/// points use geodesic polar coordinates `(r, theta)`; spheroid points are
/// geodetic `(lat, lon)` in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Ambient3([f64; 3]),
    Ambient4([f64; 4]),
    Polar { r: f64, theta: f64 },
    Planar { x: f64, y: f64 },
    Geodetic { lat: f64, lon: f64 },
}

impl Point {
    /// Flat coordinate list, as stored in graph sidecar files.
    pub fn coords(&self) -> Vec<f64> {
        match *self {
            Point::Ambient3(v) => v.to_vec(),
            Point::Ambient4(v) => v.to_vec(),
            Point::Polar { r, theta } => vec![r, theta],
            Point::Planar { x, y } => vec![x, y],
            Point::Geodetic { lat, lon } => vec![lat, lon],
        }
    }
}

fn positive(name: &str, x: f64) -> Result<(), ManifoldError> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(ManifoldError::InvalidParameter(format!(
            "{name} must be a positive finite length, got {x}"
        )))
    }
}

fn dot<const N: usize>(p: &[f64; N], q: &[f64; N]) -> f64 {
    p.iter().zip(q).map(|(a, b)| a * b).sum()
}

impl Manifold {
    pub fn sphere2(radius: f64) -> Result<Self, ManifoldError> {
        let m = Manifold::Sphere2 { radius };
        m.validate().map(|_| m)
    }

    pub fn sphere3(radius: f64) -> Result<Self, ManifoldError> {
        let m = Manifold::Sphere3 { radius };
        m.validate().map(|_| m)
    }

    pub fn hyperbolic(curvature_scale: f64, disk_radius: f64) -> Result<Self, ManifoldError> {
        let m = Manifold::HyperbolicDisk {
            curvature_scale,
            disk_radius,
        };
        m.validate().map(|_| m)
    }

    /// Hyperbolic disk centred at the origin whose area is `area`.
    pub fn hyperbolic_with_area(curvature_scale: f64, area: f64) -> Result<Self, ManifoldError> {
        positive("area", area)?;
        positive("curvatureScale", curvature_scale)?;
        let k = curvature_scale;
        let disk_radius = k * (1.0 + area / (2.0 * PI * k * k)).acosh();
        Manifold::hyperbolic(k, disk_radius)
    }

    pub fn euclidean(radius: f64) -> Result<Self, ManifoldError> {
        let m = Manifold::EuclideanDisk { radius };
        m.validate().map(|_| m)
    }

    pub fn spheroid(equatorial_radius: f64, polar_radius: f64) -> Result<Self, ManifoldError> {
        let m = Manifold::Spheroid {
            equatorial_radius,
            polar_radius,
        };
        m.validate().map(|_| m)
    }

    pub fn validate(&self) -> Result<(), ManifoldError> {
        match *self {
            Manifold::Sphere2 { radius }
            | Manifold::Sphere3 { radius }
            | Manifold::EuclideanDisk { radius } => positive("radius", radius),
            Manifold::HyperbolicDisk {
                curvature_scale,
                disk_radius,
            } => {
                positive("curvatureScale", curvature_scale)?;
                positive("diskRadius", disk_radius)
            }
            Manifold::Spheroid {
                equatorial_radius,
                polar_radius,
            } => {
                positive("equatorialRadius", equatorial_radius)?;
                positive("polarRadius", polar_radius)?;
                if polar_radius > equatorial_radius {
                    return Err(ManifoldError::InvalidParameter(format!(
                        "spheroid must be oblate: polar radius {polar_radius} exceeds equatorial radius {equatorial_radius}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Manifold::Sphere2 { .. } => "sphere2",
            Manifold::Sphere3 { .. } => "sphere3",
            Manifold::HyperbolicDisk { .. } => "hyperbolic",
            Manifold::EuclideanDisk { .. } => "euclidean",
            Manifold::Spheroid { .. } => "spheroid",
        }
    }

    /// Constant sectional curvature, when the manifold has one.
    pub fn sectional_curvature(&self) -> Option<f64> {
        match *self {
            Manifold::Sphere2 { radius } | Manifold::Sphere3 { radius } => {
                Some(1.0 / (radius * radius))
            }
            Manifold::HyperbolicDisk {
                curvature_scale, ..
            } => Some(-1.0 / (curvature_scale * curvature_scale)),
            Manifold::EuclideanDisk { .. } => Some(0.0),
            Manifold::Spheroid {
                equatorial_radius,
                polar_radius,
            } if equatorial_radius == polar_radius => {
                Some(1.0 / (equatorial_radius * equatorial_radius))
            }
            Manifold::Spheroid { .. } => None,
        }
    }

    /// Largest geodesic distance between two points of the sampled region.
    pub fn diameter(&self) -> f64 {
        match *self {
            Manifold::Sphere2 { radius } | Manifold::Sphere3 { radius } => PI * radius,
            Manifold::HyperbolicDisk { disk_radius, .. } => 2.0 * disk_radius,
            Manifold::EuclideanDisk { radius } => 2.0 * radius,
            Manifold::Spheroid {
                equatorial_radius, ..
            } => PI * equatorial_radius,
        }
    }

    /// Draw a point uniformly with respect to the area/volume measure.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Point, ManifoldError> {
        match *self {
            Manifold::Sphere2 { radius } => {
                let v = gaussian_direction::<3, R>(rng);
                Ok(Point::Ambient3(v.map(|x| x * radius)))
            }
            Manifold::Sphere3 { radius } => {
                let v = gaussian_direction::<4, R>(rng);
                Ok(Point::Ambient4(v.map(|x| x * radius)))
            }
            Manifold::HyperbolicDisk {
                curvature_scale: k,
                disk_radius,
            } => {
                // Radial density proportional to sinh(r / k); invert its CDF.
                let theta = rng.random::<f64>() * 2.0 * PI;
                let u: f64 = rng.random();
                let span = (disk_radius / k).cosh() - 1.0;
                let r = (k * (1.0 + u * span).acosh()).min(disk_radius);
                Ok(Point::Polar { r, theta })
            }
            Manifold::EuclideanDisk { radius } => {
                let theta = rng.random::<f64>() * 2.0 * PI;
                let r = radius * rng.random::<f64>().sqrt();
                Ok(Point::Planar {
                    x: r * theta.cos(),
                    y: r * theta.sin(),
                })
            }
            Manifold::Spheroid {
                equatorial_radius: a,
                polar_radius: b,
            } => {
                let ell = Ellipsoid { a, b };
                // Propose with density proportional to cos(lat), then accept with
                // the remaining factor M N of the area element, maximal at the poles.
                let max = ell.curvature_radius_product(PI / 2.0);
                for _ in 0..MAX_REJECTIONS {
                    let lat = (2.0 * rng.random::<f64>() - 1.0).asin();
                    let lon = rng.random::<f64>() * 2.0 * PI - PI;
                    let accept = ell.curvature_radius_product(lat) / max;
                    if rng.random::<f64>() <= accept {
                        return Ok(Point::Geodetic { lat, lon });
                    }
                }
                Err(ManifoldError::RejectionCap(MAX_REJECTIONS))
            }
        }
    }

    /// Geodesic distance between two points of this manifold.
    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64, ManifoldError> {
        match (*self, p, q) {
            (Manifold::Sphere2 { radius }, Point::Ambient3(p), Point::Ambient3(q)) => {
                Ok(radius * (dot(p, q) / (radius * radius)).clamp(-1.0, 1.0).acos())
            }
            (Manifold::Sphere3 { radius }, Point::Ambient4(p), Point::Ambient4(q)) => {
                Ok(radius * (dot(p, q) / (radius * radius)).clamp(-1.0, 1.0).acos())
            }
            (
                Manifold::HyperbolicDisk {
                    curvature_scale: k, ..
                },
                Point::Polar { r: r1, theta: t1 },
                Point::Polar { r: r2, theta: t2 },
            ) => {
                let arg = (r1 / k).cosh() * (r2 / k).cosh()
                    - (r1 / k).sinh() * (r2 / k).sinh() * (t1 - t2).cos();
                Ok(k * arg.max(1.0).acosh())
            }
            (
                Manifold::EuclideanDisk { .. },
                Point::Planar { x: x1, y: y1 },
                Point::Planar { x: x2, y: y2 },
            ) => Ok((x1 - x2).hypot(y1 - y2)),
            (
                Manifold::Spheroid {
                    equatorial_radius: a,
                    polar_radius: b,
                },
                Point::Geodetic { lat: lat1, lon: lon1 },
                Point::Geodetic { lat: lat2, lon: lon2 },
            ) => Ellipsoid { a, b }
                .inverse(*lat1, *lon1, *lat2, *lon2)
                .ok_or(ManifoldError::SpheroidNonConvergence),
            (m, _, _) => Err(ManifoldError::PointMismatch(m.name())),
        }
    }

    /// Follow the geodesic leaving `p` with initial `azimuth` (radians,
    /// clockwise from north) for arclength `s`.
    pub fn geodesic_direct(&self, p: &Point, azimuth: f64, s: f64) -> Result<Point, ManifoldError> {
        match (*self, p) {
            (Manifold::Sphere2 { radius }, Point::Ambient3(v)) => {
                let n = v.map(|x| x / radius);
                let lat = n[2].clamp(-1.0, 1.0).asin();
                let lon = n[1].atan2(n[0]);
                let (sl, cl) = lat.sin_cos();
                let (so, co) = lon.sin_cos();
                let east = [-so, co, 0.0];
                let north = [-sl * co, -sl * so, cl];
                let (sa, ca) = azimuth.sin_cos();
                let t: [f64; 3] = std::array::from_fn(|i| ca * north[i] + sa * east[i]);
                let (ss, cs) = (s / radius).sin_cos();
                Ok(Point::Ambient3(std::array::from_fn(|i| {
                    radius * (cs * n[i] + ss * t[i])
                })))
            }
            (
                Manifold::Spheroid {
                    equatorial_radius: a,
                    polar_radius: b,
                },
                Point::Geodetic { lat, lon },
            ) => {
                let (lat2, lon2) = Ellipsoid { a, b }.direct(*lat, *lon, azimuth, s);
                Ok(Point::Geodetic {
                    lat: lat2,
                    lon: lon2,
                })
            }
            (Manifold::Sphere2 { .. }, _) | (Manifold::Spheroid { .. }, _) => {
                Err(ManifoldError::PointMismatch(self.name()))
            }
            (m, _) => Err(ManifoldError::UnsupportedManifold(m.name())),
        }
    }

    /// Rebuild a point from its flat coordinate list.
    pub fn point_from_coords(&self, c: &[f64]) -> Result<Point, ManifoldError> {
        let bad = || ManifoldError::PointMismatch(self.name());
        let p = match (self, c.len()) {
            (Manifold::Sphere2 { .. }, 3) => Point::Ambient3([c[0], c[1], c[2]]),
            (Manifold::Sphere3 { .. }, 4) => Point::Ambient4([c[0], c[1], c[2], c[3]]),
            (Manifold::HyperbolicDisk { .. }, 2) => Point::Polar { r: c[0], theta: c[1] },
            (Manifold::EuclideanDisk { .. }, 2) => Point::Planar { x: c[0], y: c[1] },
            (Manifold::Spheroid { .. }, 2) => Point::Geodetic { lat: c[0], lon: c[1] },
            _ => return Err(bad()),
        };
        if c.iter().all(|x| x.is_finite()) {
            Ok(p)
        } else {
            Err(bad())
        }
    }

    /// Point on a sphere or spheroid from latitude and longitude in radians.
    pub fn point_at_lat_lon(&self, lat: f64, lon: f64) -> Result<Point, ManifoldError> {
        match *self {
            Manifold::Sphere2 { radius } => {
                let (sl, cl) = lat.sin_cos();
                let (so, co) = lon.sin_cos();
                Ok(Point::Ambient3([radius * cl * co, radius * cl * so, radius * sl]))
            }
            Manifold::Spheroid { .. } => Ok(Point::Geodetic { lat, lon }),
            m => Err(ManifoldError::UnsupportedManifold(m.name())),
        }
    }
}

fn gaussian_direction<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> [f64; N] {
    loop {
        let v: [f64; N] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-12 {
            return v.map(|x| x / norm);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;
    use proptest::prelude::*;

    fn within_sigmas(count: usize, n: usize, prob: f64, sigmas: f64) -> bool {
        let expected = n as f64 * prob;
        let sd = (n as f64 * prob * (1.0 - prob)).sqrt();
        (count as f64 - expected).abs() <= sigmas * sd
    }

    #[test]
    fn sphere_sampling_is_centred() {
        let m = Manifold::sphere2(1.0).unwrap();
        let mut rng = Seed(1).stream(0);
        let n = 100_000;
        let zs: Vec<f64> = (0..n)
            .map(|_| match m.sample_point(&mut rng).unwrap() {
                Point::Ambient3(v) => v[2],
                _ => unreachable!(),
            })
            .collect();
        let mean = zs.iter().sum::<f64>() / n as f64;
        // Var(z) = 1/3 for a uniform point on the unit sphere.
        let se = (1.0f64 / 3.0 / n as f64).sqrt();
        assert!(mean.abs() < 4.0 * se, "{mean}");
    }

    #[test]
    fn sphere_points_have_radius_norm() {
        let m = Manifold::sphere2(2.5).unwrap();
        let mut rng = Seed(3).stream(0);
        for _ in 0..1000 {
            let Point::Ambient3(v) = m.sample_point(&mut rng).unwrap() else {
                unreachable!()
            };
            assert!((dot(&v, &v).sqrt() - 2.5).abs() < 2.5e-12);
        }
    }

    #[test]
    fn hyperbolic_radial_law() {
        let m = Manifold::hyperbolic(1.0, 2.0).unwrap();
        let mut rng = Seed(2).stream(0);
        let n = 100_000;
        let inner = (0..n)
            .filter(|_| match m.sample_point(&mut rng).unwrap() {
                Point::Polar { r, .. } => r <= 1.0,
                _ => unreachable!(),
            })
            .count();
        let prob = (1f64.cosh() - 1.0) / (2f64.cosh() - 1.0);
        assert!((prob - 0.1966).abs() < 1e-4);
        assert!(within_sigmas(inner, n, prob, 4.0), "{inner}");
    }

    #[test]
    fn euclidean_area_ratio() {
        let m = Manifold::euclidean(1.0).unwrap();
        let mut rng = Seed(4).stream(0);
        let n = 100_000;
        let inner = (0..n)
            .filter(|_| match m.sample_point(&mut rng).unwrap() {
                Point::Planar { x, y } => x.hypot(y) <= 0.5,
                _ => unreachable!(),
            })
            .count();
        assert!(within_sigmas(inner, n, 0.25, 4.0), "{inner}");
    }

    #[test]
    fn spheroid_sampling_matches_area_fraction() {
        // Area fraction of the band |lat| <= 30 degrees on a strongly flattened spheroid,
        // by Simpson quadrature of the area element M N cos(lat).
        let (a, b) = (1.0, 0.6);
        let m = Manifold::spheroid(a, b).unwrap();
        let ell = Ellipsoid { a, b };
        let integrate = |hi: f64| {
            let steps = 2000;
            let h = hi / steps as f64;
            let g = |x: f64| ell.curvature_radius_product(x) * x.cos();
            let mut s = g(0.0) + g(hi);
            for i in 1..steps {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
            }
            s * h / 3.0
        };
        let prob = integrate(PI / 6.0) / integrate(PI / 2.0);
        let mut rng = Seed(5).stream(0);
        let n = 100_000;
        let band = (0..n)
            .filter(|_| match m.sample_point(&mut rng).unwrap() {
                Point::Geodetic { lat, .. } => lat.abs() <= PI / 6.0,
                _ => unreachable!(),
            })
            .count();
        assert!(within_sigmas(band, n, prob, 4.0), "{band} vs {}", prob * n as f64);
    }

    #[test]
    fn closed_form_distances() {
        let s = Manifold::sphere2(1.0).unwrap();
        let d = s
            .distance(&Point::Ambient3([0.0, 0.0, 1.0]), &Point::Ambient3([0.0, 0.0, -1.0]))
            .unwrap();
        assert!((d - PI).abs() < 1e-12);

        let h = Manifold::hyperbolic(1.0, 3.0).unwrap();
        let d = h
            .distance(&Point::Polar { r: 1.0, theta: 0.0 }, &Point::Polar { r: 1.0, theta: PI })
            .unwrap();
        assert!((d - 2.0).abs() < 1e-7);

        let e = Manifold::euclidean(5.0).unwrap();
        let d = e
            .distance(&Point::Planar { x: 0.0, y: 0.0 }, &Point::Planar { x: 3.0, y: 4.0 })
            .unwrap();
        assert_eq!(d, 5.0);
    }

    #[test]
    fn degenerate_spheroid_matches_sphere() {
        let m = Manifold::spheroid(6371.0, 6371.0).unwrap();
        let p = Point::Geodetic { lat: 0.2, lon: 0.1 };
        let q = m.geodesic_direct(&p, 0.7, 6371.0).unwrap();
        let d = m.distance(&p, &q).unwrap();
        assert!((d - 6371.0).abs() < 6371.0 * 1e-6, "{d}");

        let sphere = Manifold::sphere2(6371.0).unwrap();
        let ps = sphere.point_at_lat_lon(0.2, 0.1).unwrap();
        let Point::Ambient3(qs) = sphere.geodesic_direct(&ps, 0.7, 3000.0).unwrap() else {
            unreachable!()
        };
        let Point::Geodetic { lat, lon } = m.geodesic_direct(&p, 0.7, 3000.0).unwrap() else {
            unreachable!()
        };
        let Point::Ambient3(qe) = sphere.point_at_lat_lon(lat, lon).unwrap() else {
            unreachable!()
        };
        for i in 0..3 {
            assert!((qs[i] - qe[i]).abs() < 6371.0 * 1e-9, "{qs:?} {qe:?}");
        }
    }

    #[test]
    fn direct_on_sphere_from_pole_reaches_equator() {
        let s = Manifold::sphere2(1.0).unwrap();
        let pole = Point::Ambient3([0.0, 0.0, 1.0]);
        for az in [0.0, 1.0, 2.5, -2.0] {
            let Point::Ambient3(q) = s.geodesic_direct(&pole, az, PI / 2.0).unwrap() else {
                unreachable!()
            };
            assert!(q[2].abs() < 1e-12);
        }
    }

    #[test]
    fn spheroid_equator_direct() {
        let m = Manifold::spheroid(6378.137, 6356.752).unwrap();
        let p = Point::Geodetic { lat: 0.0, lon: 0.0 };
        let Point::Geodetic { lat, lon } =
            m.geodesic_direct(&p, PI / 2.0, 6378.137 * PI / 2.0).unwrap()
        else {
            unreachable!()
        };
        assert!(lat.abs() < 1e-6 && (lon - PI / 2.0).abs() < 1e-6);
    }

    #[test]
    fn direct_unsupported_on_flat_and_hyperbolic() {
        let e = Manifold::euclidean(1.0).unwrap();
        assert!(matches!(
            e.geodesic_direct(&Point::Planar { x: 0.0, y: 0.0 }, 0.0, 1.0),
            Err(ManifoldError::UnsupportedManifold(_))
        ));
    }

    #[test]
    fn validation_and_json() {
        assert!(Manifold::sphere2(0.0).is_err());
        assert!(Manifold::spheroid(6357.0, 6378.0).is_err());
        let m: Manifold =
            serde_json::from_str(r#"{"type":"hyperbolic","curvatureScale":1,"diskRadius":2}"#)
                .unwrap();
        assert_eq!(m, Manifold::hyperbolic(1.0, 2.0).unwrap());
        let json = serde_json::to_string(&Manifold::spheroid(6378.0, 6357.0).unwrap()).unwrap();
        assert_eq!(json, r#"{"type":"spheroid","equatorialRadius":6378.0,"polarRadius":6357.0}"#);
        assert!(serde_json::from_str::<Manifold>(r#"{"type":"sphere2","radius":-1}"#).is_err());
    }

    #[test]
    fn hyperbolic_area_radius() {
        let Manifold::HyperbolicDisk { disk_radius, .. } =
            Manifold::hyperbolic_with_area(1.0, 4.0 * PI).unwrap()
        else {
            unreachable!()
        };
        assert!((disk_radius - 3f64.acosh()).abs() < 1e-12);
    }

    fn rotate_z(p: &Point, angle: f64) -> Point {
        match *p {
            Point::Ambient3([x, y, z]) => {
                let (s, c) = angle.sin_cos();
                Point::Ambient3([c * x - s * y, s * x + c * y, z])
            }
            Point::Polar { r, theta } => Point::Polar {
                r,
                theta: theta + angle,
            },
            _ => unreachable!(),
        }
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    proptest! {
        #[test]
        fn metric_axioms_on_constant_curvature(seed in any::<u64>(), which in 0usize..3) {
            let m = [
                Manifold::sphere2(1.3).unwrap(),
                Manifold::hyperbolic(0.8, 2.0).unwrap(),
                Manifold::euclidean(2.0).unwrap(),
            ][which];
            let mut rng = Seed(seed).stream(0);
            let p = m.sample_point(&mut rng).unwrap();
            let q = m.sample_point(&mut rng).unwrap();
            let r = m.sample_point(&mut rng).unwrap();
            let pq = m.distance(&p, &q).unwrap();
            prop_assert_eq!(pq, m.distance(&q, &p).unwrap());
            let pr = m.distance(&p, &r).unwrap();
            let qr = m.distance(&q, &r).unwrap();
            prop_assert!(pr <= (pq + qr) * (1.0 + 1e-9) + 1e-12);
        }

        #[test]
        fn metric_axioms_on_spheroid(seed in any::<u64>()) {
            let m = Manifold::spheroid(6378.0, 6357.0).unwrap();
            let mut rng = Seed(seed).stream(1);
            let p = m.sample_point(&mut rng).unwrap();
            let q = m.sample_point(&mut rng).unwrap();
            let r = m.sample_point(&mut rng).unwrap();
            if let (Ok(pq), Ok(qp), Ok(pr), Ok(qr)) =
                (m.distance(&p, &q), m.distance(&q, &p), m.distance(&p, &r), m.distance(&q, &r))
            {
                prop_assert!(close(pq, qp, 1e-9));
                prop_assert!(pr <= (pq + qr) * (1.0 + 1e-6));
            }
        }

        #[test]
        fn rotation_invariance(seed in any::<u64>(), angle in -3.0f64..3.0, hyperbolic in any::<bool>()) {
            let m = if hyperbolic {
                Manifold::hyperbolic(1.0, 3.0).unwrap()
            } else {
                Manifold::sphere2(1.0).unwrap()
            };
            let mut rng = Seed(seed).stream(2);
            let p = m.sample_point(&mut rng).unwrap();
            let q = m.sample_point(&mut rng).unwrap();
            let d = m.distance(&p, &q).unwrap();
            let d_rot = m.distance(&rotate_z(&p, angle), &rotate_z(&q, angle)).unwrap();
            prop_assert!(close(d, d_rot, 1e-9) || (d - d_rot).abs() < 1e-12);
        }

        #[test]
        fn direct_inverse_round_trip(seed in any::<u64>(), az in -3.1f64..3.1, frac in 0.01f64..0.999) {
            let mut rng = Seed(seed).stream(3);
            for m in [Manifold::sphere2(1.0).unwrap(), Manifold::spheroid(6378.0, 6357.0).unwrap()] {
                let s = frac * m.diameter() / 2.0;
                let p = m.sample_point(&mut rng).unwrap();
                let q = m.geodesic_direct(&p, az, s).unwrap();
                let d = m.distance(&p, &q).unwrap();
                prop_assert!(close(d, s, 1e-6), "{} vs {}", d, s);
            }
        }
    }
}
