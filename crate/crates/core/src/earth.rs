//! Radius of an oblate spheroid from geodesic right triangles.
//!
//! A triangle is built around a uniform surface point `m`: two points at
//! distance `legB` along opposite azimuths and one at distance `legA` along
//! the perpendicular azimuth. The two hypotenuses are measured with the
//! inverse geodesic and averaged.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::{solve_right_triangle, TriangleSample};
use crate::manifold::{Manifold, ManifoldError};
use crate::rng::Seed;
use crate::stats;

pub const EARTH_EQUATORIAL_KM: f64 = 6378.0;
pub const EARTH_POLAR_KM: f64 = 6357.0;
/// Upper end of the radius-of-curvature support for the earth spheroid.
pub const EARTH_RADIUS_SUPPORT_MAX: f64 = 6399.07;
pub const DEFAULT_LEG_RANGE: (f64, f64) = (500.0, 4000.0);

const PDF_SCALE: f64 = 0.077088;
/// Relative disagreement allowed between the two hypotenuse measurements.
const ASYMMETRY_TOLERANCE: f64 = 0.005;
const STALL_LIMIT: usize = 1000;

#[derive(Debug, Error)]
pub enum EarthError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no acceptable triangle after {0} consecutive rejections")]
    SamplingStalled(usize),
    #[error("non-positive curvature {0}")]
    NonPositiveCurvature(f64),
    #[error("only {accepted} of {requested} samples accepted")]
    TooFewAccepted { accepted: usize, requested: usize },
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}

fn spheroid_radii(m: &Manifold) -> Result<(f64, f64), EarthError> {
    match *m {
        Manifold::Spheroid {
            equatorial_radius,
            polar_radius,
        } => Ok((equatorial_radius, polar_radius)),
        _ => Err(EarthError::InvalidParameter(format!(
            "expected a spheroid, got {}",
            m.name()
        ))),
    }
}

fn check_leg(name: &str, leg: f64, polar: f64) -> Result<(), EarthError> {
    let limit = FRAC_PI_2 * polar;
    if leg.is_finite() && leg > 0.0 && leg < limit {
        Ok(())
    } else {
        Err(EarthError::InvalidParameter(format!(
            "{name} must lie in (0, {limit}), got {leg}"
        )))
    }
}

fn try_triangle<R: Rng + ?Sized>(
    m: &Manifold,
    leg_a: f64,
    leg_b: f64,
    rng: &mut R,
) -> Result<Option<TriangleSample>, ManifoldError> {
    let centre = m.sample_point(rng)?;
    let theta = rng.random_range(0.0..2.0 * PI);
    let v = m.geodesic_direct(&centre, theta, leg_b)?;
    let w = m.geodesic_direct(&centre, theta + PI, leg_b)?;
    let u = m.geodesic_direct(&centre, theta + FRAC_PI_2, leg_a)?;
    let (Ok(cv), Ok(cw)) = (m.distance(&u, &v), m.distance(&u, &w)) else {
        return Ok(None);
    };
    let c = 0.5 * (cv + cw);
    if (cv - cw).abs() > ASYMMETRY_TOLERANCE * c {
        return Ok(None);
    }
    Ok(Some(TriangleSample::new(leg_a, leg_b, c)))
}

/// One right triangle with legs `leg_a`, `leg_b` at a uniform random spot.
pub fn sample_spheroid_triangle<R: Rng + ?Sized>(
    m: &Manifold,
    leg_a: f64,
    leg_b: f64,
    rng: &mut R,
) -> Result<TriangleSample, EarthError> {
    let (_, polar) = spheroid_radii(m)?;
    check_leg("legA", leg_a, polar)?;
    check_leg("legB", leg_b, polar)?;
    for _ in 0..STALL_LIMIT {
        if let Some(t) = try_triangle(m, leg_a, leg_b, rng)? {
            return Ok(t);
        }
    }
    Err(EarthError::SamplingStalled(STALL_LIMIT))
}

pub fn radius_from_curvature(k: f64) -> Result<f64, EarthError> {
    if k > 0.0 && k.is_finite() {
        Ok(1.0 / k.sqrt())
    } else {
        Err(EarthError::NonPositiveCurvature(k))
    }
}

/// Area-weighted density of the local curvature radius on the earth
/// spheroid, in km⁻¹.
pub fn expected_radius_pdf(r: f64) -> f64 {
    if (EARTH_POLAR_KM..=EARTH_RADIUS_SUPPORT_MAX).contains(&r) && r > EARTH_POLAR_KM {
        PDF_SCALE / (r - EARTH_POLAR_KM).sqrt()
    } else {
        0.0
    }
}

pub fn expected_radius_cdf(r: f64) -> f64 {
    if r <= EARTH_POLAR_KM {
        0.0
    } else {
        (2.0 * PDF_SCALE * (r - EARTH_POLAR_KM).sqrt()).min(1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EarthOptions {
    pub leg_min: f64,
    pub leg_max: f64,
    pub max_length: Option<f64>,
}

impl Default for EarthOptions {
    fn default() -> Self {
        EarthOptions {
            leg_min: DEFAULT_LEG_RANGE.0,
            leg_max: DEFAULT_LEG_RANGE.1,
            max_length: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EarthEstimate {
    pub requested: usize,
    pub accepted: usize,
    pub mean: f64,
    pub standard_error: f64,
    pub median: f64,
    pub rejected_negative_k: usize,
    pub rejected_max_length: usize,
    pub rejected_root_not_found: usize,
    pub radii: Vec<f64>,
}

impl EarthEstimate {
    /// KS distance of the radii to [`expected_radius_cdf`].
    pub fn ks_to_expected(&self) -> f64 {
        stats::ks_distance(&self.radii, expected_radius_cdf).unwrap_or(1.0)
    }
}

enum Outcome {
    Radius(f64),
    NegativeK,
    TooLong,
    NoRoot,
}

pub fn estimate_earth_radius(
    m: &Manifold,
    n_samples: usize,
    options: &EarthOptions,
    seed: Seed,
) -> Result<EarthEstimate, EarthError> {
    let (_, polar) = spheroid_radii(m)?;
    check_leg("legMin", options.leg_min, polar)?;
    check_leg("legMax", options.leg_max, polar)?;
    if options.leg_min > options.leg_max {
        return Err(EarthError::InvalidParameter(format!(
            "leg range [{}, {}] is empty",
            options.leg_min, options.leg_max
        )));
    }
    if let Some(l) = options.max_length {
        if !(l.is_finite() && l > 0.0) {
            return Err(EarthError::InvalidParameter(format!(
                "maxLength must be positive, got {l}"
            )));
        }
    }
    let outcomes: Vec<Result<Outcome, EarthError>> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.stream(i);
            let leg_a = rng.random_range(options.leg_min..=options.leg_max);
            let leg_b = rng.random_range(options.leg_min..=options.leg_max);
            let t = sample_spheroid_triangle(m, leg_a, leg_b, &mut rng)?;
            if let Some(l) = options.max_length {
                if t.a > l || t.b > l || t.c > l {
                    return Ok(Outcome::TooLong);
                }
            }
            Ok(match solve_right_triangle(t.a, t.b, t.c) {
                Ok(root) if root.curvature > 0.0 => Outcome::Radius(1.0 / root.curvature.sqrt()),
                Ok(_) => Outcome::NegativeK,
                Err(_) => Outcome::NoRoot,
            })
        })
        .collect();
    let mut radii = Vec::with_capacity(n_samples);
    let (mut neg, mut long, mut noroot) = (0, 0, 0);
    for o in outcomes {
        match o? {
            Outcome::Radius(r) => radii.push(r),
            Outcome::NegativeK => neg += 1,
            Outcome::TooLong => long += 1,
            Outcome::NoRoot => noroot += 1,
        }
    }
    let needed = (n_samples / 100).max(10).min(n_samples.max(1));
    if radii.len() < needed {
        return Err(EarthError::TooFewAccepted {
            accepted: radii.len(),
            requested: n_samples,
        });
    }
    Ok(EarthEstimate {
        requested: n_samples,
        accepted: radii.len(),
        mean: stats::mean(&radii).unwrap_or(f64::NAN),
        standard_error: stats::standard_error(&radii).unwrap_or(f64::NAN),
        median: stats::median(&radii).unwrap_or(f64::NAN),
        rejected_negative_k: neg,
        rejected_max_length: long,
        rejected_root_not_found: noroot,
        radii,
    })
}
