//! Sectional curvature from right triangles.
//!
//! A right triangle with legs `a`, `b` and hypotenuse `c` in a space of
//! constant sectional curvature `K` satisfies
//! `cos(c sqrt K) = cos(a sqrt K) cos(b sqrt K)`. Graph triangles are built
//! by [`TriangleSampler`], solved for `K`, and summarised in a
//! [`CurvatureReport`].

mod report;
mod sampler;
mod solver;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::rng::Seed;

pub use report::{CurvatureReport, RejectionCounts, TRIM_FRACTION};
pub use sampler::{
    HopWindow, MidpointRule, TriangleSample, TriangleSampler, TriangleVertices, DEFAULT_RETRIES,
};
pub use solver::{curvature_from_triangle, solve_right_triangle, CurvatureRoot};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CurvatureError {
    #[error("sides ({a}, {b}, {c}) violate the strict triangle inequality")]
    TriangleInequalityViolated { a: f64, b: f64, c: f64 },
    #[error("no curvature root found for sides ({a}, {b}, {c})")]
    RootNotFound { a: f64, b: f64, c: f64 },
    #[error("no valid triangle found within the retry budget")]
    NoCandidate,
    #[error("only {accepted} of {requested} samples accepted")]
    TooFewAccepted { accepted: usize, requested: usize },
    #[error("invalid hop window [{min}, {max}]")]
    InvalidWindow { min: u32, max: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Why a single sample did not produce a curvature value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    NoCandidate,
    TriangleInequality,
    RootNotFound,
    ExceedsMaxLength,
    NonPositiveCurvature,
    DegenerateFit,
}

/// Outcome of one sample: a solved curvature, or the reason it was dropped.
pub type SampleOutcome = Result<CurvatureRoot, Rejection>;

/// Options for graph curvature estimation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SamplingOptions {
    pub window: HopWindow,
    /// Triangles with any side longer than this are dropped.
    pub max_length: Option<f64>,
    pub midpoint_rule: MidpointRule,
    pub retries: usize,
}

impl SamplingOptions {
    pub fn new(window: HopWindow) -> Self {
        SamplingOptions {
            window,
            max_length: None,
            midpoint_rule: MidpointRule::default(),
            retries: DEFAULT_RETRIES,
        }
    }
}

/// Curvature of a triangle, with the drop reason on failure.
pub fn classify(t: &TriangleSample, max_length: Option<f64>) -> SampleOutcome {
    if let Some(limit) = max_length {
        if t.a > limit || t.b > limit || t.c > limit {
            return Err(Rejection::ExceedsMaxLength);
        }
    }
    match solve_right_triangle(t.a, t.b, t.c) {
        Ok(root) => Ok(root),
        Err(CurvatureError::RootNotFound { .. }) => Err(Rejection::RootNotFound),
        Err(_) => Err(Rejection::TriangleInequality),
    }
}

/// Estimate the mean sectional curvature of `g` from `n_samples` triangles.
///
/// Sample `i` draws from stream `i` of `seed`, so the result does not depend
/// on the number of worker threads.
pub fn estimate_curvature(
    g: &Graph,
    edge_length: f64,
    n_samples: usize,
    options: &SamplingOptions,
    seed: Seed,
) -> Result<CurvatureReport, CurvatureError> {
    check_inputs(edge_length, n_samples)?;
    let outcomes: Vec<SampleOutcome> = (0..n_samples)
        .into_par_iter()
        .map_init(
            || {
                TriangleSampler::new(g, edge_length, options.window)
                    .with_rule(options.midpoint_rule)
                    .with_retries(options.retries)
            },
            |sampler, i| {
                let mut rng = seed.stream(i as u64);
                match sampler.sample(&mut rng) {
                    Ok(t) => classify(&t, options.max_length),
                    Err(_) => Err(Rejection::NoCandidate),
                }
            },
        )
        .collect();
    CurvatureReport::from_outcomes("sectional", &outcomes)
}

/// Draw triangles and return them with their outcomes, in sample order.
pub fn sample_triangles(
    g: &Graph,
    edge_length: f64,
    n_samples: usize,
    options: &SamplingOptions,
    seed: Seed,
) -> Result<Vec<Result<TriangleSample, CurvatureError>>, CurvatureError> {
    check_inputs(edge_length, n_samples)?;
    Ok((0..n_samples)
        .into_par_iter()
        .map_init(
            || {
                TriangleSampler::new(g, edge_length, options.window)
                    .with_rule(options.midpoint_rule)
                    .with_retries(options.retries)
            },
            |sampler, i| sampler.sample(&mut seed.stream(i as u64)),
        )
        .collect())
}

fn check_inputs(edge_length: f64, n_samples: usize) -> Result<(), CurvatureError> {
    if !(edge_length.is_finite() && edge_length > 0.0) {
        return Err(CurvatureError::InvalidParameter(format!(
            "edge length must be positive, got {edge_length}"
        )));
    }
    if n_samples == 0 {
        return Err(CurvatureError::InvalidParameter(
            "at least one sample is required".into(),
        ));
    }
    Ok(())
}

/// Per-vertex curvature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VertexCurvature {
    /// Mean over accepted triangles containing the vertex; `None` if there were none.
    pub mean: Option<f64>,
    pub triangles: u32,
}

/// Curvature map over the vertices of `g`.
///
/// Each vertex serves as apex for `samples_per_vertex` triangles. Every
/// accepted triangle contributes its curvature to all vertices on its sides
/// (the shortest paths from the apex to the base ends and the midpoint, and
/// the two half bases), and a vertex reports the mean over the triangles
/// that contain it.
pub fn vertex_curvature(
    g: &Graph,
    edge_length: f64,
    samples_per_vertex: usize,
    options: &SamplingOptions,
    seed: Seed,
) -> Result<Vec<VertexCurvature>, CurvatureError> {
    check_inputs(edge_length, samples_per_vertex)?;
    let n = g.vertex_count();
    let per_apex: Vec<Vec<(f64, Vec<u32>)>> = (0..n as u32)
        .into_par_iter()
        .map_init(
            || {
                TriangleSampler::new(g, edge_length, options.window)
                    .with_rule(options.midpoint_rule)
                    .with_retries(options.retries)
            },
            |sampler, u| {
                let mut rng = seed.stream(u as u64);
                let mut out = Vec::new();
                for _ in 0..samples_per_vertex {
                    let Ok(t) = sampler.sample_at(u, &mut rng) else {
                        continue;
                    };
                    if let Ok(root) = classify(&t, options.max_length) {
                        let k = root.curvature;
                        let mut side = Vec::new();
                        sampler.side_vertices(t.vertices.as_ref().expect("graph triangle"), &mut side);
                        out.push((k, side));
                    }
                }
                out
            },
        )
        .collect();

    let mut sums = vec![0.0; n];
    let mut counts = vec![0u32; n];
    for (k, side) in per_apex.iter().flatten() {
        for &x in side {
            sums[x as usize] += k;
            counts[x as usize] += 1;
        }
    }
    Ok(sums
        .into_iter()
        .zip(counts)
        .map(|(s, c)| VertexCurvature {
            mean: (c > 0).then(|| s / c as f64),
            triangles: c,
        })
        .collect())
}

/// Ricci scalar `n (n - 1) kappa` of an isotropic space of dimension `n`.
pub fn ricci_scalar_from_mean_sectional(kappa: f64, n: u32) -> Result<f64, CurvatureError> {
    if n < 2 {
        return Err(CurvatureError::InvalidParameter(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    Ok(n as f64 * (n as f64 - 1.0) * kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{cycle, grid, path};

    #[test]
    fn ricci_scalar() {
        assert_eq!(ricci_scalar_from_mean_sectional(1.0, 2).unwrap(), 2.0);
        assert_eq!(ricci_scalar_from_mean_sectional(1.0, 3).unwrap(), 6.0);
        assert_eq!(ricci_scalar_from_mean_sectional(0.0, 4).unwrap(), 0.0);
        assert!(ricci_scalar_from_mean_sectional(1.0, 1).is_err());
    }

    #[test]
    fn classification() {
        let t = TriangleSample::new(3.0, 4.0, 5.0);
        assert_eq!(classify(&t, None).unwrap().curvature, 0.0);
        assert_eq!(classify(&t, Some(4.5)), Err(Rejection::ExceedsMaxLength));
        let bad = TriangleSample::new(1.0, 1.0, 2.0);
        assert_eq!(classify(&bad, None), Err(Rejection::TriangleInequality));
    }

    #[test]
    fn grid_is_not_curved_on_average_by_construction_only() {
        // Every sample on a grid has integer sides, so the estimator runs and
        // tallies the degenerate ones.
        let g = grid(12, 12);
        let opts = SamplingOptions::new(HopWindow::new(4, 12).unwrap());
        let r = estimate_curvature(&g, 1.0, 400, &opts, Seed(1)).unwrap();
        assert_eq!(r.requested, 400);
        assert_eq!(r.samples.len() + r.rejected.total(), 400);
    }

    #[test]
    fn too_few_accepted() {
        let g = path(5);
        let opts = SamplingOptions::new(HopWindow::new(2, 4).unwrap());
        assert!(matches!(
            estimate_curvature(&g, 1.0, 50, &opts, Seed(0)),
            Err(CurvatureError::TooFewAccepted { .. })
        ));
        assert!(estimate_curvature(&g, 0.0, 50, &opts, Seed(0)).is_err());
        assert!(estimate_curvature(&g, 1.0, 0, &opts, Seed(0)).is_err());
    }

    #[test]
    fn vertex_map_absent_when_graph_is_small() {
        let g = cycle(6);
        let opts = SamplingOptions::new(HopWindow::new(10, 12).unwrap());
        let map = vertex_curvature(&g, 1.0, 3, &opts, Seed(0)).unwrap();
        assert!(map.iter().all(|v| v.mean.is_none() && v.triangles == 0));
    }

    #[test]
    fn vertex_map_is_deterministic() {
        let g = grid(10, 10);
        let opts = SamplingOptions::new(HopWindow::new(3, 9).unwrap());
        let a = vertex_curvature(&g, 1.0, 4, &opts, Seed(8)).unwrap();
        let b = vertex_curvature(&g, 1.0, 4, &opts, Seed(8)).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().any(|v| v.mean.is_some()));
    }
}
