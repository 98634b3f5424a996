//! Geodesics on an oblate ellipsoid of revolution.
//!
//! Iterative inverse and direct solutions in reduced latitude with series
//! expansions in the second eccentricity (Vincenty's formulation). Accuracy
//! is well below a metre at earth scale; the inverse iteration does not
//! converge for nearly antipodal pairs and reports that instead.

use std::f64::consts::PI;

const MAX_ITERATIONS: usize = 200;
const CONVERGENCE: f64 = 1e-12;

/// Ellipsoid of revolution with equatorial radius `a` and polar radius `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Ellipsoid {
    pub a: f64,
    pub b: f64,
}

impl Ellipsoid {
    fn flattening(&self) -> f64 {
        (self.a - self.b) / self.a
    }

    fn second_ecc_sq(&self) -> f64 {
        (self.a * self.a - self.b * self.b) / (self.b * self.b)
    }

    /// Sine and cosine of the reduced latitude.
    fn reduced(&self, lat: f64) -> (f64, f64) {
        let f = self.flattening();
        let u = ((1.0 - f) * lat.sin()).atan2(lat.cos());
        u.sin_cos()
    }

    fn series_a_b(&self, cos_sq_alpha: f64) -> (f64, f64) {
        let u_sq = cos_sq_alpha * self.second_ecc_sq();
        let a = 1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)));
        let b = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)));
        (a, b)
    }

    /// Geodesic distance between `(lat1, lon1)` and `(lat2, lon2)` in radians.
    ///
    /// `None` when the longitude iteration fails to converge.
    pub fn inverse(&self, lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> Option<f64> {
        let f = self.flattening();
        let l = wrap_pi(lon2 - lon1);
        let (sin_u1, cos_u1) = self.reduced(lat1);
        let (sin_u2, cos_u2) = self.reduced(lat2);

        let mut lambda = l;
        for _ in 0..MAX_ITERATIONS {
            let (sin_l, cos_l) = lambda.sin_cos();
            let t1 = cos_u2 * sin_l;
            let t2 = cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_l;
            let sin_sigma = (t1 * t1 + t2 * t2).sqrt();
            if sin_sigma == 0.0 {
                return Some(0.0);
            }
            let cos_sigma = sin_u1 * sin_u2 + cos_u1 * cos_u2 * cos_l;
            let sigma = sin_sigma.atan2(cos_sigma);
            let sin_alpha = cos_u1 * cos_u2 * sin_l / sin_sigma;
            let cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
            let cos_2sm = if cos_sq_alpha != 0.0 {
                cos_sigma - 2.0 * sin_u1 * sin_u2 / cos_sq_alpha
            } else {
                // equatorial line
                0.0
            };
            let c = f / 16.0 * cos_sq_alpha * (4.0 + f * (4.0 - 3.0 * cos_sq_alpha));
            let next = l
                + (1.0 - c)
                    * f
                    * sin_alpha
                    * (sigma
                        + c * sin_sigma
                            * (cos_2sm + c * cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)));
            if next.abs() > PI + 1e-9 || !next.is_finite() {
                return None;
            }
            let done = (next - lambda).abs() < CONVERGENCE;
            lambda = next;
            if done {
                let (big_a, big_b) = self.series_a_b(cos_sq_alpha);
                let delta_sigma = big_b
                    * sin_sigma
                    * (cos_2sm
                        + big_b / 4.0
                            * (cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm)
                                - big_b / 6.0
                                    * cos_2sm
                                    * (-3.0 + 4.0 * sin_sigma * sin_sigma)
                                    * (-3.0 + 4.0 * cos_2sm * cos_2sm)));
                return Some(self.b * big_a * (sigma - delta_sigma));
            }
        }
        None
    }

    /// Endpoint `(lat, lon)` after travelling `s` from `(lat1, lon1)` with
    /// initial azimuth `azimuth` (radians clockwise from north).
    pub fn direct(&self, lat1: f64, lon1: f64, azimuth: f64, s: f64) -> (f64, f64) {
        let f = self.flattening();
        let (sin_a1, cos_a1) = azimuth.sin_cos();
        let (sin_u1, cos_u1) = self.reduced(lat1);
        let sigma1 = sin_u1.atan2(cos_u1 * cos_a1);
        let sin_alpha = cos_u1 * sin_a1;
        let cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
        let (big_a, big_b) = self.series_a_b(cos_sq_alpha);

        let sigma0 = s / (self.b * big_a);
        let mut sigma = sigma0;
        let mut cos_2sm = (2.0 * sigma1 + sigma).cos();
        for _ in 0..MAX_ITERATIONS {
            cos_2sm = (2.0 * sigma1 + sigma).cos();
            let (sin_s, cos_s) = sigma.sin_cos();
            let delta_sigma = big_b
                * sin_s
                * (cos_2sm
                    + big_b / 4.0
                        * (cos_s * (-1.0 + 2.0 * cos_2sm * cos_2sm)
                            - big_b / 6.0
                                * cos_2sm
                                * (-3.0 + 4.0 * sin_s * sin_s)
                                * (-3.0 + 4.0 * cos_2sm * cos_2sm)));
            let next = sigma0 + delta_sigma;
            let done = (next - sigma).abs() < CONVERGENCE;
            sigma = next;
            if done {
                cos_2sm = (2.0 * sigma1 + sigma).cos();
                break;
            }
        }

        let (sin_s, cos_s) = sigma.sin_cos();
        let tmp = sin_u1 * sin_s - cos_u1 * cos_s * cos_a1;
        let lat2 = (sin_u1 * cos_s + cos_u1 * sin_s * cos_a1)
            .atan2((1.0 - f) * (sin_alpha * sin_alpha + tmp * tmp).sqrt());
        let lambda = (sin_s * sin_a1).atan2(cos_u1 * cos_s - sin_u1 * sin_s * cos_a1);
        let c = f / 16.0 * cos_sq_alpha * (4.0 + f * (4.0 - 3.0 * cos_sq_alpha));
        let l = lambda
            - (1.0 - c)
                * f
                * sin_alpha
                * (sigma + c * sin_s * (cos_2sm + c * cos_s * (-1.0 + 2.0 * cos_2sm * cos_2sm)));
        (lat2, wrap_pi(lon1 + l))
    }

    /// Product of the meridional and prime-vertical radii of curvature,
    /// i.e. `1 / K` at geodetic latitude `lat`.
    pub fn curvature_radius_product(&self, lat: f64) -> f64 {
        let e2 = 1.0 - (self.b * self.b) / (self.a * self.a);
        let w = 1.0 - e2 * lat.sin().powi(2);
        self.a * self.a * (1.0 - e2) / (w * w)
    }
}

/// Wrap an angle into `[-pi, pi)`.
pub(crate) fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EARTH: Ellipsoid = Ellipsoid {
        a: 6378.137,
        b: 6356.752314245,
    };

    #[test]
    fn equator_quarter_is_exact() {
        let (lat, lon) = EARTH.direct(0.0, 0.0, PI / 2.0, EARTH.a * PI / 2.0);
        assert!(lat.abs() < 1e-9);
        assert!((lon - PI / 2.0).abs() < 1e-9);
        let s = EARTH.inverse(0.0, 0.0, 0.0, PI / 2.0).unwrap();
        assert!((s - EARTH.a * PI / 2.0).abs() < 1e-6);
    }

    #[test]
    fn meridian_quadrant() {
        // Quarter meridian of WGS84: 10001.965729 km.
        let s = EARTH.inverse(0.0, 0.0, PI / 2.0, 0.0).unwrap();
        assert!((s - 10001.965729).abs() < 1e-4, "{s}");
    }

    #[test]
    fn direct_then_inverse_round_trip() {
        for &(lat, az, s) in &[(0.3, 0.2, 1234.5), (-1.1, 2.5, 4000.0), (1.2, -1.0, 800.0)] {
            let (lat2, lon2) = EARTH.direct(lat, 0.4, az, s);
            let back = EARTH.inverse(lat, 0.4, lat2, lon2).unwrap();
            assert!((back - s).abs() < 1e-6 * s, "{back} vs {s}");
        }
    }

    #[test]
    fn antipodal_equator_reports_failure() {
        assert!(EARTH.inverse(0.0, 0.0, 0.0, PI - 1e-7).is_none());
    }

    #[test]
    fn wrap() {
        assert!((wrap_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_pi(-PI), -PI);
    }
}
