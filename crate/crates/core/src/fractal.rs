//! Sectional curvature distributions on Sierpinski triangle graphs.
//!
//! Level `n` is built from three copies of level `n - 1` by identifying
//! pairs of corners; level 0 is the triangle `K3`. Triangles are isosceles
//! with an even base `d(v, w) = 2b`, split at every vertex `m` with
//! `d(v, m) = d(w, m) = b`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::converge::linear_fit;
use crate::curvature::{curvature_from_triangle, TriangleSample, TriangleVertices};
use crate::graph::{Bfs, Graph};
use crate::rng::Seed;
use crate::stats;

/// Deepest level that will be constructed.
pub const MAX_LEVEL: u32 = 12;
/// Deepest level for which all-pairs distances are held in memory.
pub const MAX_DISTANCE_LEVEL: u32 = 7;
/// Consecutive rejections after which sampling gives up.
pub const STALL_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FractalError {
    #[error("level {level} exceeds the limit {limit}")]
    LevelTooLarge { level: u32, limit: u32 },
    #[error("no valid triangle after {0} consecutive rejections")]
    SamplingStalled(u64),
    #[error("no accepted curvature values")]
    TooFewAccepted,
}

#[derive(Clone, Debug)]
pub struct SierpinskiGraph {
    pub level: u32,
    pub graph: Graph,
    /// Outer corners, mutually `2^level` hops apart.
    pub corners: [u32; 3],
}

/// The level-`n` Sierpinski triangle graph with `3 (3^n + 1) / 2` vertices
/// and `3^(n + 1)` edges.
pub fn sierpinski_graph(level: u32) -> Result<SierpinskiGraph, FractalError> {
    if level > MAX_LEVEL {
        return Err(FractalError::LevelTooLarge {
            level,
            limit: MAX_LEVEL,
        });
    }
    let mut edges: Vec<(u32, u32)> = vec![(0, 1), (1, 2), (0, 2)];
    let mut corners = [0u32, 1, 2];
    let mut count = 3u32;
    for _ in 0..level {
        // Copy k of the previous level gets the id map `maps[k]`.
        let mut maps: Vec<Vec<u32>> = Vec::with_capacity(3);
        let mut next = 0u32;
        for k in 0..3 {
            let mut map = vec![u32::MAX; count as usize];
            match k {
                1 => map[corners[0] as usize] = maps[0][corners[1] as usize],
                2 => {
                    map[corners[0] as usize] = maps[0][corners[2] as usize];
                    map[corners[1] as usize] = maps[1][corners[2] as usize];
                }
                _ => {}
            }
            for slot in map.iter_mut() {
                if *slot == u32::MAX {
                    *slot = next;
                    next += 1;
                }
            }
            maps.push(map);
        }
        let mut new_edges = Vec::with_capacity(edges.len() * 3);
        for map in &maps {
            new_edges.extend(edges.iter().map(|&(u, v)| (map[u as usize], map[v as usize])));
        }
        corners = [
            maps[0][corners[0] as usize],
            maps[1][corners[1] as usize],
            maps[2][corners[2] as usize],
        ];
        edges = new_edges;
        count = next;
    }
    let graph = Graph::from_edges(count as usize, edges).expect("valid construction");
    Ok(SierpinskiGraph {
        level,
        graph,
        corners,
    })
}

/// Row-major all-pairs hop distances.
struct Distances {
    n: usize,
    d: Vec<u32>,
}

impl Distances {
    fn new(sg: &SierpinskiGraph) -> Result<Self, FractalError> {
        if sg.level > MAX_DISTANCE_LEVEL {
            return Err(FractalError::LevelTooLarge {
                level: sg.level,
                limit: MAX_DISTANCE_LEVEL,
            });
        }
        let g = &sg.graph;
        let n = g.vertex_count();
        let rows: Vec<Vec<u32>> = (0..n as u32)
            .into_par_iter()
            .map_init(
                || Bfs::new(n),
                |bfs, u| {
                    bfs.run(g, u);
                    bfs.dist.clone()
                },
            )
            .collect();
        Ok(Distances {
            n,
            d: rows.concat(),
        })
    }

    fn row(&self, u: usize) -> &[u32] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    /// Midpoints and apexes of the base `(v, w)`.
    fn base_sets(&self, v: usize, w: usize, mids: &mut Vec<u32>, apexes: &mut Vec<u32>) {
        let (dv, dw) = (self.row(v), self.row(w));
        let half = dv[w] / 2;
        mids.clear();
        apexes.clear();
        for x in 0..self.n {
            if dv[x] == dw[x] {
                apexes.push(x as u32);
                if dv[x] == half {
                    mids.push(x as u32);
                }
            }
        }
    }

    fn triangle(&self, u: u32, v: u32, w: u32, m: u32) -> Option<TriangleSample> {
        let a = self.row(u as usize)[m as usize];
        let b = self.row(v as usize)[w as usize] / 2;
        let c = self.row(u as usize)[v as usize];
        let (a, b, c) = (a as f64, b as f64, c as f64);
        if a < 1.0 || a >= b + c || b >= a + c || c >= a + b {
            return None;
        }
        Some(TriangleSample {
            a,
            b,
            c,
            vertices: Some(TriangleVertices {
                apex: u,
                base_end1: v,
                base_end2: w,
                midpoint: m,
            }),
        })
    }
}

/// All triangles of a Sierpinski graph, with the count of degenerate
/// quadruples that were left out.
#[derive(Clone, Debug)]
pub struct FractalEnumeration {
    pub samples: Vec<TriangleSample>,
    pub degenerate: usize,
}

/// Every quadruple `(u, {v, w}, m)` with `d(u, v) = d(u, w) = c`,
/// `d(v, w) = 2b >= 2` and `m` a midpoint of the base, ordered by
/// `(v, w, u, m)` with `v < w`.
pub fn enumerate_fractal_triangles(sg: &SierpinskiGraph) -> Result<FractalEnumeration, FractalError> {
    let dist = Distances::new(sg)?;
    let n = dist.n;
    let per_v: Vec<(Vec<TriangleSample>, usize)> = (0..n)
        .into_par_iter()
        .map(|v| {
            let (mut mids, mut apexes) = (Vec::new(), Vec::new());
            let mut out = Vec::new();
            let mut degenerate = 0;
            for w in v + 1..n {
                let base = dist.row(v)[w];
                if base % 2 != 0 {
                    continue;
                }
                dist.base_sets(v, w, &mut mids, &mut apexes);
                for &u in &apexes {
                    for &m in &mids {
                        match dist.triangle(u, v as u32, w as u32, m) {
                            Some(t) => out.push(t),
                            None => degenerate += 1,
                        }
                    }
                }
            }
            (out, degenerate)
        })
        .collect();
    let mut samples = Vec::new();
    let mut degenerate = 0;
    for (s, d) in per_v {
        samples.extend(s);
        degenerate += d;
    }
    Ok(FractalEnumeration {
        samples,
        degenerate,
    })
}

/// `count` triangles drawn uniformly from the quadruples of
/// [`enumerate_fractal_triangles`].
///
/// A base pair is drawn with probability proportional to its number of
/// (apex, midpoint) combinations, then an apex and a midpoint uniformly;
/// degenerate draws are rejected and redrawn. Sample `i` uses stream `i`.
pub fn sample_fractal_triangles(
    sg: &SierpinskiGraph,
    count: usize,
    seed: Seed,
) -> Result<Vec<TriangleSample>, FractalError> {
    let dist = Distances::new(sg)?;
    let n = dist.n;
    // Cumulative weights over unordered even pairs, grouped by v.
    let rows: Vec<Vec<(u32, u64)>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let (mut mids, mut apexes) = (Vec::new(), Vec::new());
            let mut row = Vec::new();
            for w in v + 1..n {
                if dist.row(v)[w] % 2 == 0 {
                    dist.base_sets(v, w, &mut mids, &mut apexes);
                    let weight = (mids.len() * apexes.len()) as u64;
                    if weight > 0 {
                        row.push((w as u32, weight));
                    }
                }
            }
            row
        })
        .collect();
    let mut pairs = Vec::new();
    let mut cumulative = Vec::new();
    let mut total = 0u64;
    for (v, row) in rows.into_iter().enumerate() {
        for (w, weight) in row {
            total += weight;
            pairs.push((v as u32, w));
            cumulative.push(total);
        }
    }
    if total == 0 {
        return Err(FractalError::SamplingStalled(0));
    }
    (0..count)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(mids, apexes), i| {
                let mut rng = seed.stream(i as u64);
                for _ in 0..STALL_LIMIT {
                    let r = rng.random_range(0..total);
                    let k = cumulative.partition_point(|&c| c <= r);
                    let (v, w) = pairs[k];
                    dist.base_sets(v as usize, w as usize, mids, apexes);
                    let u = apexes[rng.random_range(0..apexes.len())];
                    let m = mids[rng.random_range(0..mids.len())];
                    if let Some(t) = dist.triangle(u, v, w, m) {
                        return Ok(t);
                    }
                }
                Err(FractalError::SamplingStalled(STALL_LIMIT))
            },
        )
        .collect()
}

/// Statistics of the scaled curvature distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FractalStats {
    #[serde(rename = "n")]
    pub level: u32,
    pub edge_scale: f64,
    pub count: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub std_dev: Option<f64>,
    pub rejected: usize,
    pub empty: bool,
}

/// Curvatures `K l^(-2n)` of unit-edge triangles at level `n`, in input
/// order, and the number that had no root.
pub fn scaled_curvatures(samples: &[TriangleSample], edge_scale: f64, level: u32) -> (Vec<f64>, usize) {
    let factor = edge_scale.powi(-2 * level as i32);
    let mut ks = Vec::with_capacity(samples.len());
    let mut rejected = 0;
    for t in samples {
        match curvature_from_triangle(t.a, t.b, t.c) {
            Ok(k) => ks.push(k * factor),
            Err(_) => rejected += 1,
        }
    }
    (ks, rejected)
}

pub fn fractal_curvature_stats(samples: &[TriangleSample], edge_scale: f64, level: u32) -> FractalStats {
    let (ks, rejected) = scaled_curvatures(samples, edge_scale, level);
    FractalStats {
        level,
        edge_scale,
        count: ks.len(),
        mean: stats::mean(&ks),
        median: stats::median(&ks),
        std_dev: stats::sample_std_dev(&ks),
        rejected,
        empty: ks.is_empty(),
    }
}

impl FractalStats {
    pub fn require_nonempty(self) -> Result<Self, FractalError> {
        if self.empty {
            Err(FractalError::TooFewAccepted)
        } else {
            Ok(self)
        }
    }
}

/// Log-log slope of the positive tail of a curvature distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TailFit {
    pub slope: f64,
    pub r_squared: f64,
    pub bins: usize,
}

/// Fit `log density ~ slope log K` on logarithmic bins of the positive
/// values above their median. Empty bins are skipped. `None` when fewer
/// than three bins are occupied.
pub fn tail_exponent(ks: &[f64], bins: usize) -> Option<TailFit> {
    let mut pos: Vec<f64> = ks.iter().copied().filter(|k| *k > 0.0).collect();
    pos.sort_by(f64::total_cmp);
    let lo = stats::median(&pos)?;
    let hi = *pos.last()?;
    if !(hi > lo) || bins < 3 {
        return None;
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let width = (lhi - llo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &k in pos.iter().filter(|&&k| k >= lo) {
        let i = (((k.ln() - llo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        if c > 0 {
            let left = (llo + i as f64 * width).exp();
            let right = (llo + (i + 1) as f64 * width).exp();
            xs.push((left * right).sqrt().ln());
            ys.push((c as f64 / (right - left)).ln());
        }
    }
    if xs.len() < 3 {
        return None;
    }
    let fit = linear_fit(&xs, &ys).ok()?;
    Some(TailFit {
        slope: fit.slope,
        r_squared: fit.r_squared,
        bins: xs.len(),
    })
}
