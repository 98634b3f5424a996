//! Metric distortion of a geometric graph against its manifold.
//!
//! For vertex pairs `(u, v)` the embedding ratio is manifold distance over
//! hop distance. The effective edge length is the geometric mean of the
//! ratios and the distortion is the mean absolute deviation of their logs.
//! Diagonal pairs `u = v` are left out, so values differ from a full
//! `|G|^2` normalisation by a factor `1 - 1/|G|`.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Bfs, GeometricGraph, UNREACHABLE};
use crate::manifold::ManifoldError;

/// Graphs larger than this are measured from a random subset of sources.
pub const FULL_SOURCE_LIMIT: usize = 2000;
/// Number of sampled sources for large graphs.
pub const DEFAULT_SOURCE_COUNT: usize = 64;

#[derive(Debug, Error)]
pub enum DistortionError {
    #[error("no embedding ratios to average")]
    EmptyInput,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("source vertex {0} out of range")]
    SourceOutOfRange(u32),
    #[error("no source vertices given")]
    NoSources,
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DistortionReport {
    pub pair_count: usize,
    pub effective_edge_length: f64,
    pub distortion: f64,
    pub sources: Vec<u32>,
}

/// `log(d_manifold(u, v) / d_hops(u, v))` for each source `u` and every other
/// vertex `v`, grouped by source in the given order.
pub fn embedding_log_ratios(
    gg: &GeometricGraph,
    sources: &[u32],
) -> Result<Vec<f64>, DistortionError> {
    if sources.is_empty() {
        return Err(DistortionError::NoSources);
    }
    let n = gg.vertex_count();
    if let Some(&s) = sources.iter().find(|&&s| s as usize >= n) {
        return Err(DistortionError::SourceOutOfRange(s));
    }
    let rows: Vec<Result<Vec<f64>, DistortionError>> = sources
        .par_iter()
        .map_init(
            || Bfs::new(n),
            |bfs, &u| {
                if bfs.run(&gg.graph, u) != n {
                    return Err(DistortionError::Disconnected);
                }
                let pu = &gg.points[u as usize];
                let mut row = Vec::with_capacity(n - 1);
                for v in 0..n {
                    let hops = bfs.dist[v];
                    if v == u as usize || hops == UNREACHABLE {
                        continue;
                    }
                    let d = gg.manifold.distance(pu, &gg.points[v])?;
                    row.push((d / hops as f64).ln());
                }
                Ok(row)
            },
        )
        .collect();
    let mut out = Vec::with_capacity(sources.len() * n);
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}

/// Geometric mean of the embedding ratios.
pub fn effective_edge_length(log_ratios: &[f64]) -> Result<f64, DistortionError> {
    crate::stats::mean(log_ratios)
        .map(f64::exp)
        .ok_or(DistortionError::EmptyInput)
}

/// Mean absolute deviation of the log ratios.
pub fn metric_distortion(log_ratios: &[f64]) -> Result<f64, DistortionError> {
    let m = crate::stats::mean(log_ratios).ok_or(DistortionError::EmptyInput)?;
    Ok(log_ratios.iter().map(|x| (x - m).abs()).sum::<f64>() / log_ratios.len() as f64)
}

/// Every vertex for small graphs, else [`DEFAULT_SOURCE_COUNT`] distinct
/// vertices drawn uniformly (sorted).
pub fn default_sources<R: Rng + ?Sized>(vertex_count: usize, rng: &mut R) -> Vec<u32> {
    if vertex_count <= FULL_SOURCE_LIMIT {
        (0..vertex_count as u32).collect()
    } else {
        sample_sources(vertex_count, DEFAULT_SOURCE_COUNT, rng)
    }
}

/// `count` distinct vertices drawn uniformly, sorted; all of them if `count`
/// is at least the vertex count.
pub fn sample_sources<R: Rng + ?Sized>(vertex_count: usize, count: usize, rng: &mut R) -> Vec<u32> {
    if count >= vertex_count {
        return (0..vertex_count as u32).collect();
    }
    let mut s: Vec<u32> = sample(rng, vertex_count, count)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    s.sort_unstable();
    s
}

pub fn distortion_report(
    gg: &GeometricGraph,
    sources: Vec<u32>,
) -> Result<DistortionReport, DistortionError> {
    let logs = embedding_log_ratios(gg, &sources)?;
    Ok(DistortionReport {
        pair_count: logs.len(),
        effective_edge_length: effective_edge_length(&logs)?,
        distortion: metric_distortion(&logs)?,
        sources,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{cycle, path};
    use crate::manifold::{Manifold, Point};
    use crate::rng::Seed;
    use crate::sprinkle::sprinkle;
    use proptest::prelude::*;
    use std::f64::consts::{E, FRAC_PI_2};

    fn line_graph(spacing: f64) -> GeometricGraph {
        GeometricGraph {
            graph: path(3),
            manifold: Manifold::euclidean(10.0).unwrap(),
            points: (0..3)
                .map(|i| Point::Planar {
                    x: i as f64 * spacing,
                    y: 0.0,
                })
                .collect(),
            connection_length: spacing,
            tolerance: 0.25,
            effective_edge_length: None,
        }
    }

    #[test]
    fn path_on_a_line() {
        let logs = embedding_log_ratios(&line_graph(1.0), &[0, 1, 2]).unwrap();
        assert_eq!(logs.len(), 6);
        assert!(logs.iter().all(|x| x.abs() < 1e-15));

        let logs = embedding_log_ratios(&line_graph(2.0), &[0, 1, 2]).unwrap();
        assert!(logs.iter().all(|x| (x - 2f64.ln()).abs() < 1e-15));
        assert!((effective_edge_length(&logs).unwrap() - 2.0).abs() < 1e-14);
        assert!(metric_distortion(&logs).unwrap() < 1e-15);
    }

    #[test]
    fn square_on_the_sphere() {
        // C4 through the four compass points of the equator.
        let gg = GeometricGraph {
            graph: cycle(4),
            manifold: Manifold::sphere2(1.0).unwrap(),
            points: vec![
                Point::Ambient3([1.0, 0.0, 0.0]),
                Point::Ambient3([0.0, 1.0, 0.0]),
                Point::Ambient3([-1.0, 0.0, 0.0]),
                Point::Ambient3([0.0, -1.0, 0.0]),
            ],
            connection_length: FRAC_PI_2,
            tolerance: 0.25,
            effective_edge_length: None,
        };
        let logs = embedding_log_ratios(&gg, &[0, 1, 2, 3]).unwrap();
        // Adjacent: (pi/2)/1; opposite: pi/2 = pi/2.
        assert_eq!(logs.len(), 12);
        assert!(logs.iter().all(|x| (x - FRAC_PI_2.ln()).abs() < 1e-12));
    }

    #[test]
    fn ratio_statistics() {
        assert!((effective_edge_length(&[2f64.ln(); 5]).unwrap() - 2.0).abs() < 1e-15);
        assert!((effective_edge_length(&[0.0, 4f64.ln()]).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(metric_distortion(&[0.3; 4]).unwrap(), 0.0);
        let d = metric_distortion(&[E.ln(), (1.0 / E).ln()]).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        assert!(matches!(effective_edge_length(&[]), Err(DistortionError::EmptyInput)));
        assert!(matches!(metric_distortion(&[]), Err(DistortionError::EmptyInput)));
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let mut gg = line_graph(1.0);
        gg.graph = crate::graph::Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(
            embedding_log_ratios(&gg, &[0]),
            Err(DistortionError::Disconnected)
        ));
    }

    #[test]
    fn sampled_sources_converge_to_full() {
        let m = Manifold::sphere2(1.0).unwrap();
        let gg = sprinkle(&m, 200, 0.25, &mut Seed(4).stream(0), None).unwrap();
        let all: Vec<u32> = (0..200).collect();
        let full = metric_distortion(&embedding_log_ratios(&gg, &all).unwrap()).unwrap();
        // Full double sum written out independently.
        let mut oracle = Vec::new();
        for u in 0..200u32 {
            let hops = gg.graph.bfs_hops(u);
            for v in 0..200usize {
                if v != u as usize {
                    let d = m.distance(&gg.points[u as usize], &gg.points[v]).unwrap();
                    oracle.push((d / hops[v] as f64).ln());
                }
            }
        }
        let om = oracle.iter().sum::<f64>() / oracle.len() as f64;
        let od = oracle.iter().map(|x| (x - om).abs()).sum::<f64>() / oracle.len() as f64;
        assert!((full - od).abs() < 1e-12);
        let sub = sample_sources(200, 199, &mut Seed(1).stream(0));
        let part = metric_distortion(&embedding_log_ratios(&gg, &sub).unwrap()).unwrap();
        assert!((part - full).abs() < 0.02 * full);
    }

    #[test]
    fn default_source_policy() {
        let mut rng = Seed(0).stream(0);
        assert_eq!(default_sources(10, &mut rng).len(), 10);
        let s = default_sources(5000, &mut rng);
        assert_eq!(s.len(), DEFAULT_SOURCE_COUNT);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    proptest! {
        #[test]
        fn scale_and_inversion_invariance(
            logs in proptest::collection::vec(-3.0f64..3.0, 1..50),
            scale in 0.01f64..100.0,
        ) {
            let d = metric_distortion(&logs).unwrap();
            let shifted: Vec<f64> = logs.iter().map(|x| x + scale.ln()).collect();
            let inverted: Vec<f64> = logs.iter().map(|x| -x).collect();
            prop_assert!((metric_distortion(&shifted).unwrap() - d).abs() < 1e-12);
            prop_assert_eq!(metric_distortion(&inverted).unwrap(), d);
            let le = effective_edge_length(&logs).unwrap();
            prop_assert!((effective_edge_length(&shifted).unwrap() / le - scale).abs() < 1e-9 * scale);
            prop_assert!(d >= 0.0 && le > 0.0);
        }
    }
}
