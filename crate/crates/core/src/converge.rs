//! Curvature error against metric distortion over a sweep of graph sizes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::{estimate_curvature, CurvatureReport, HopWindow, SamplingOptions};
use crate::distortion::{default_sources, distortion_report};
use crate::manifold::Manifold;
use crate::rng::Seed;
use crate::sprinkle::{sprinkle, DEFAULT_TOLERANCE};
use crate::stats;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ConvergeError {
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

/// Ordinary least squares line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// The `y` values had no spread, so `r_squared` is reported as 0.
    pub degenerate: bool,
}

/// Least squares fit of `ys = slope xs + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit, ConvergeError> {
    if xs.len() != ys.len() {
        return Err(ConvergeError::DegenerateFit("length mismatch".into()));
    }
    let mx = stats::mean(xs).ok_or_else(|| ConvergeError::DegenerateFit("no points".into()))?;
    let my = stats::mean(ys).unwrap();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(ConvergeError::DegenerateFit("fewer than two distinct x values".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let degenerate = ss_tot == 0.0;
    Ok(LinearFit {
        slope,
        intercept,
        r_squared: if degenerate { 0.0 } else { 1.0 - ss_res / ss_tot },
        degenerate,
    })
}

/// One sprinkled graph measured end to end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphMeasurement {
    pub vertex_count: usize,
    pub seed: u64,
    pub distortion: f64,
    pub effective_edge_length: f64,
    pub window: HopWindow,
    pub report: CurvatureReport,
}

/// Sprinkle, measure distortion and estimate curvature with the default
/// hop window. Sub-seeds: 1 sprinkle, 2 distortion sources, 3 diameter,
/// 4 triangles.
pub fn measure_graph(
    m: &Manifold,
    vertex_count: usize,
    samples: usize,
    seed: Seed,
) -> Result<GraphMeasurement, String> {
    let gg = sprinkle(m, vertex_count, DEFAULT_TOLERANCE, &mut seed.derive(1).stream(0), None)
        .map_err(|e| e.to_string())?;
    let sources = default_sources(vertex_count, &mut seed.derive(2).stream(0));
    let dist = distortion_report(&gg, sources).map_err(|e| e.to_string())?;
    let diameter = gg
        .graph
        .diameter_estimate(&mut seed.derive(3).stream(0))
        .map_err(|e| e.to_string())?;
    let window = HopWindow::from_diameter(diameter);
    let report = estimate_curvature(
        &gg.graph,
        dist.effective_edge_length,
        samples,
        &SamplingOptions::new(window),
        seed.derive(4),
    )
    .map_err(|e| e.to_string())?;
    Ok(GraphMeasurement {
        vertex_count,
        seed: seed.0,
        distortion: dist.distortion,
        effective_edge_length: dist.effective_edge_length,
        window,
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConvergencePoint {
    pub vertex_count: usize,
    pub mean_distortion: f64,
    /// Mean of `|K - K_true|` over the pooled samples.
    pub mean_absolute_error: f64,
    /// `|mean(K) - K_true|` over the pooled samples.
    pub absolute_error_of_mean: f64,
    /// The two errors times the squared mean effective edge length, i.e. in
    /// units of `l_e^-2`.
    pub mean_absolute_error_scaled: f64,
    pub absolute_error_of_mean_scaled: f64,
    pub mean_effective_edge_length: f64,
    pub samples: usize,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepFailure {
    pub vertex_count: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub true_curvature: f64,
    pub points: Vec<ConvergencePoint>,
    /// Fits against mean distortion; absent with fewer than two distinct
    /// distortions.
    pub mean_absolute_error_fit: Option<LinearFit>,
    pub absolute_error_of_mean_fit: Option<LinearFit>,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    /// `distortion,mae,aem` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertexCount,distortion,mae,aem\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{:e},{:e},{:e}\n",
                p.vertex_count, p.mean_distortion, p.mean_absolute_error, p.absolute_error_of_mean
            ));
        }
        out
    }
}

/// Seed of job `(vertex_count, index)` within a sweep.
pub fn job_seed(master: Seed, vertex_count: usize, index: usize) -> Seed {
    master.derive(vertex_count as u64).derive(index as u64)
}

pub fn run_sweep(
    m: &Manifold,
    true_curvature: f64,
    vertex_counts: &[usize],
    seeds_per_count: usize,
    samples_per_graph: usize,
    master: Seed,
) -> Result<SweepReport, ConvergeError> {
    if vertex_counts.is_empty() || seeds_per_count == 0 || samples_per_graph == 0 {
        return Err(ConvergeError::InvalidSweep(
            "need vertex counts, at least one seed and one sample".into(),
        ));
    }
    let jobs: Vec<(usize, usize)> = vertex_counts
        .iter()
        .flat_map(|&n| (0..seeds_per_count).map(move |j| (n, j)))
        .collect();
    let results: Vec<Result<GraphMeasurement, SweepFailure>> = jobs
        .par_iter()
        .map(|&(n, j)| {
            let seed = job_seed(master, n, j);
            measure_graph(m, n, samples_per_graph, seed).map_err(|error| SweepFailure {
                vertex_count: n,
                seed: seed.0,
                error,
            })
        })
        .collect();

    let mut points = Vec::new();
    let mut failures = Vec::new();
    for &n in vertex_counts {
        let mut ks = Vec::new();
        let mut distortions = Vec::new();
        let mut lengths = Vec::new();
        let mut seeds = Vec::new();
        for ((count, _), r) in jobs.iter().zip(&results) {
            if *count != n {
                continue;
            }
            match r {
                Ok(g) => {
                    ks.extend_from_slice(&g.report.samples);
                    distortions.push(g.distortion);
                    lengths.push(g.effective_edge_length);
                    seeds.push(g.seed);
                }
                Err(f) => failures.push(f.clone()),
            }
        }
        if ks.is_empty() {
            continue;
        }
        let mae = ks.iter().map(|k| (k - true_curvature).abs()).sum::<f64>() / ks.len() as f64;
        let aem = (stats::mean(&ks).unwrap() - true_curvature).abs();
        let le = stats::mean(&lengths).unwrap();
        points.push(ConvergencePoint {
            vertex_count: n,
            mean_distortion: stats::mean(&distortions).unwrap(),
            mean_absolute_error: mae,
            absolute_error_of_mean: aem,
            mean_absolute_error_scaled: mae * le * le,
            absolute_error_of_mean_scaled: aem * le * le,
            mean_effective_edge_length: le,
            samples: ks.len(),
            seeds,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.mean_distortion).collect();
    let fit = |ys: Vec<f64>| linear_fit(&xs, &ys).ok();
    Ok(SweepReport {
        true_curvature,
        mean_absolute_error_fit: fit(points.iter().map(|p| p.mean_absolute_error).collect()),
        absolute_error_of_mean_fit: fit(points.iter().map(|p| p.absolute_error_of_mean).collect()),
        points,
        failures,
    })
}
