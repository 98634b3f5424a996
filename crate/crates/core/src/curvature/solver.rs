//! Curvature of a right triangle from its side lengths.
//!
//! Solves `cos(c sqrt K) = cos(a sqrt K) cos(b sqrt K)` for the non-trivial
//! root `K` with `K <= pi^2 / max(a, b, c)^2`. For `K < 0` the cosines
//! become hyperbolic cosines of `t = sqrt(-K)`. The sign of the root is the
//! sign of `a^2 + b^2 - c^2`, so only one branch is ever searched.

use std::f64::consts::PI;

use super::CurvatureError;

/// Uniform scan intervals on the positive branch.
const POSITIVE_GRID: usize = 256;
/// Doublings of `t` scanned on the negative branch.
const NEGATIVE_DOUBLINGS: i32 = 60;
/// Relative residual of `a^2 + b^2 - c^2` treated as exactly flat.
const FLAT_REL: f64 = 1e-12;
const BISECTION_REL: f64 = 1e-13;

/// A located root together with a diagnostic of the scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureRoot {
    pub curvature: f64,
    /// Sign changes seen on the scanned branch; more than one means the
    /// smallest-magnitude root was taken among several candidates.
    pub sign_changes: usize,
}

/// Sectional curvature of the geodesic right triangle with legs `a`, `b`
/// and hypotenuse `c`.
pub fn curvature_from_triangle(a: f64, b: f64, c: f64) -> Result<f64, CurvatureError> {
    solve_right_triangle(a, b, c).map(|r| r.curvature)
}

pub fn solve_right_triangle(a: f64, b: f64, c: f64) -> Result<CurvatureRoot, CurvatureError> {
    let valid = [a, b, c].iter().all(|x| x.is_finite() && *x > 0.0);
    if !valid || a >= b + c || b >= a + c || c >= a + b {
        return Err(CurvatureError::TriangleInequalityViolated { a, b, c });
    }
    let excess = a * a + b * b - c * c;
    if excess.abs() <= FLAT_REL * c * c {
        return Ok(CurvatureRoot {
            curvature: 0.0,
            sign_changes: 0,
        });
    }
    if excess > 0.0 {
        positive_root(a, b, c)
    } else {
        negative_root(a, b, c)
    }
}

/// `f(K) / K` for `K > 0`, written with half-angle sines so that it stays
/// accurate as `K -> 0`, where it tends to `(a^2 + b^2 - c^2) / 2`.
fn deflated(a: f64, b: f64, c: f64, k: f64) -> f64 {
    if k == 0.0 {
        return 0.5 * (a * a + b * b - c * c);
    }
    let s = k.sqrt();
    let half = |x: f64| (0.5 * x * s).sin() / s;
    let (ha, hb, hc) = (half(a), half(b), half(c));
    // 1 - cos(x s) = 2 sin^2(x s / 2)
    2.0 * ha * ha + 2.0 * hb * hb - 2.0 * hc * hc - 4.0 * ha * ha * hb * hb * k
}

fn positive_root(a: f64, b: f64, c: f64) -> Result<CurvatureRoot, CurvatureError> {
    let max = a.max(b).max(c);
    let k_max = PI * PI / (max * max);
    let f = |k: f64| deflated(a, b, c, k);

    let mut bracket = None;
    let mut sign_changes = 0;
    let mut prev = (0.0, f(0.0));
    for i in 1..=POSITIVE_GRID {
        let k = k_max * i as f64 / POSITIVE_GRID as f64;
        let v = f(k);
        if (prev.1 > 0.0) != (v > 0.0) {
            sign_changes += 1;
            if bracket.is_none() {
                bracket = Some((prev.0, k));
            }
        }
        prev = (k, v);
    }
    let (lo, hi) = bracket.ok_or(CurvatureError::RootNotFound { a, b, c })?;
    Ok(CurvatureRoot {
        curvature: bisect(lo, hi, |k| f(k) > 0.0),
        sign_changes,
    })
}

/// `ln cosh x` without overflow and accurate near zero.
fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        let s = (0.5 * x).sinh();
        (2.0 * s * s).ln_1p()
    } else {
        x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
    }
}

fn negative_root(a: f64, b: f64, c: f64) -> Result<CurvatureRoot, CurvatureError> {
    // Same sign as cosh(ct) - cosh(at) cosh(bt): positive near t = 0 when
    // c^2 > a^2 + b^2, negative for large t because c < a + b.
    let h = |t: f64| ln_cosh(c * t) - ln_cosh(a * t) - ln_cosh(b * t);
    let max = a.max(b).max(c);
    let t0 = 1e-3 / max;

    let mut bracket = None;
    let mut sign_changes = 0;
    let mut prev = (0.0, true);
    for i in 0..=NEGATIVE_DOUBLINGS {
        let t = t0 * 2f64.powi(i);
        let positive = h(t) > 0.0;
        if positive != prev.1 {
            sign_changes += 1;
            if bracket.is_none() {
                bracket = Some((prev.0, t));
            }
        }
        prev = (t, positive);
    }
    let (lo, hi) = bracket.ok_or(CurvatureError::RootNotFound { a, b, c })?;
    let t = bisect(lo, hi, |t| t == 0.0 || h(t) > 0.0);
    Ok(CurvatureRoot {
        curvature: -t * t,
        sign_changes,
    })
}

/// Bisection on `[lo, hi]` where `below(lo)` holds and `below(hi)` does not.
fn bisect(mut lo: f64, mut hi: f64, below: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        if hi - lo <= BISECTION_REL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
