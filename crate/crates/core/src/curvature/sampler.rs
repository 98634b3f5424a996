//! Approximate right triangles in a graph.
//!
//! An isosceles triangle `(u, v, w)` with `d(u, v) = d(u, w)` is split at a
//! midpoint `m` of its base, giving two right triangles with legs
//! `a = d(u, m)`, `b = d(v, w) / 2` and hypotenuse `c = d(u, v)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Bfs, Graph, UNREACHABLE};

use super::CurvatureError;

/// Attempts per sample before giving up with `NoCandidate`.
pub const DEFAULT_RETRIES: usize = 64;

/// Inclusive window of hop lengths for the equal sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopWindow {
    pub min: u32,
    pub max: u32,
}

impl HopWindow {
    pub fn new(min: u32, max: u32) -> Result<Self, CurvatureError> {
        if min < 2 || min > max {
            return Err(CurvatureError::InvalidWindow { min, max });
        }
        Ok(HopWindow { min, max })
    }

    /// `[ceil(D / 3), D]` for hop diameter `D`, with the minimum raised to 2.
    pub fn from_diameter(diameter: u32) -> Self {
        let max = diameter.max(2);
        HopWindow {
            min: diameter.div_ceil(3).clamp(2, max),
            max,
        }
    }

    /// Shortest admissible leg of the right triangle (median and half
    /// base). The minimum length scale applies to every side.
    pub fn min_leg(&self) -> u32 {
        self.min
    }
}

/// Which base midpoint to use when several vertices qualify.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MidpointRule {
    /// Minimise `|2 d(u, m) - (d(u, v) + d(u, w))|`, smallest id on ties.
    Symmetric,
    /// Uniformly random among the midpoints.
    Uniform,
    /// Smallest `d(u, m)`, smallest id on ties.
    Nearest,
    /// Lower median of the midpoints ordered by `(d(u, m), id)`: the centre
    /// of the midpoint set along the apex direction.
    #[default]
    Median,
}

/// Vertex provenance of a graph triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TriangleVertices {
    pub apex: u32,
    pub base_end1: u32,
    pub base_end2: u32,
    pub midpoint: u32,
}

/// Side lengths of a right triangle, with its vertices when it came from a graph.
///
/// `a` is the median leg (apex to midpoint), `b` the half base and `c` the
/// hypotenuse. Validity of the triple is checked by the solver.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleSample {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<TriangleVertices>,
}

impl TriangleSample {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        TriangleSample {
            a,
            b,
            c,
            vertices: None,
        }
    }
}

/// Reusable triangle construction state for one graph.
pub struct TriangleSampler<'g> {
    graph: &'g Graph,
    edge_length: f64,
    window: HopWindow,
    rule: MidpointRule,
    retries: usize,
    from_apex: Bfs,
    from_v: Bfs,
    from_w: Bfs,
    apex: Option<u32>,
    candidates: Vec<u32>,
}

impl<'g> TriangleSampler<'g> {
    pub fn new(graph: &'g Graph, edge_length: f64, window: HopWindow) -> Self {
        let n = graph.vertex_count();
        TriangleSampler {
            graph,
            edge_length,
            window,
            rule: MidpointRule::default(),
            retries: DEFAULT_RETRIES,
            from_apex: Bfs::new(n),
            from_v: Bfs::new(n),
            from_w: Bfs::new(n),
            apex: None,
            candidates: Vec::new(),
        }
    }

    pub fn with_rule(mut self, rule: MidpointRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_retries(mut self, retries: usize) -> Self {
        self.retries = retries.max(1);
        self
    }

    /// A triangle with a uniformly random apex, redrawn on each failed attempt.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<TriangleSample, CurvatureError> {
        let n = self.graph.vertex_count() as u32;
        if n == 0 {
            return Err(CurvatureError::NoCandidate);
        }
        for _ in 0..self.retries {
            let u = rng.random_range(0..n);
            if let Some(t) = self.attempt(u, rng) {
                return Ok(t);
            }
        }
        Err(CurvatureError::NoCandidate)
    }

    /// A triangle with apex `u`.
    pub fn sample_at<R: Rng + ?Sized>(
        &mut self,
        u: u32,
        rng: &mut R,
    ) -> Result<TriangleSample, CurvatureError> {
        for _ in 0..self.retries {
            if let Some(t) = self.attempt(u, rng) {
                return Ok(t);
            }
        }
        Err(CurvatureError::NoCandidate)
    }

    /// One construction attempt; `None` when some step has no candidate.
    /// Both legs of the right triangle must reach [`HopWindow::min_leg`].
    pub fn attempt<R: Rng + ?Sized>(&mut self, u: u32, rng: &mut R) -> Option<TriangleSample> {
        if self.apex != Some(u) {
            self.from_apex.run(self.graph, u);
            self.apex = Some(u);
        }
        let du = &self.from_apex.dist;
        let window = self.window;
        self.candidates.clear();
        self.candidates.extend(self.from_apex.reached().iter().copied().filter(|&x| {
            let d = du[x as usize];
            d >= window.min && d <= window.max
        }));
        let v = *pick(&self.candidates, rng)?;
        let c_hops = du[v as usize];

        self.from_v.run(self.graph, v);
        let dv = &self.from_v.dist;
        let min_base = 2 * window.min_leg();
        self.candidates.clear();
        self.candidates.extend(self.from_apex.reached().iter().copied().filter(|&x| {
            let b = dv[x as usize];
            x != v && du[x as usize] == c_hops && b != UNREACHABLE && b % 2 == 0 && b >= min_base
        }));
        let w = *pick(&self.candidates, rng)?;
        let base = dv[w as usize];
        let half = base / 2;

        self.from_w.run(self.graph, w);
        let dw = &self.from_w.dist;
        self.candidates.clear();
        let min_leg = window.min_leg();
        self.candidates.extend(self.from_v.reached().iter().copied().filter(|&x| {
            dv[x as usize] == half && dw[x as usize] == half && du[x as usize] >= min_leg
        }));
        self.candidates.sort_unstable();
        let m = match self.rule {
            MidpointRule::Uniform => *pick(&self.candidates, rng)?,
            MidpointRule::Symmetric => {
                let target = 2 * c_hops as i64;
                *self
                    .candidates
                    .iter()
                    .min_by_key(|&&x| ((2 * du[x as usize] as i64 - target).abs(), x))?
            }
            MidpointRule::Nearest => *self
                .candidates
                .iter()
                .min_by_key(|&&x| (du[x as usize], x))?,
            MidpointRule::Median => {
                if self.candidates.is_empty() {
                    return None;
                }
                self.candidates.sort_unstable_by_key(|&x| (du[x as usize], x));
                self.candidates[(self.candidates.len() - 1) / 2]
            }
        };
        let a_hops = du[m as usize];
        let l = self.edge_length;
        Some(TriangleSample {
            a: a_hops as f64 * l,
            b: half as f64 * l,
            c: c_hops as f64 * l,
            vertices: Some(TriangleVertices {
                apex: u,
                base_end1: v,
                base_end2: w,
                midpoint: m,
            }),
        })
    }

    /// Vertices on the sides of the last accepted triangle: shortest paths
    /// apex to each base end, base end to midpoint, and apex to midpoint.
    /// Valid only directly after `attempt` returned that triangle.
    pub fn side_vertices(&self, t: &TriangleVertices, out: &mut Vec<u32>) {
        out.clear();
        let g = self.graph;
        let du = &self.from_apex.dist;
        walk_down(g, du, t.base_end1, out);
        walk_down(g, du, t.base_end2, out);
        walk_down(g, du, t.midpoint, out);
        walk_down(g, &self.from_v.dist, t.midpoint, out);
        walk_down(g, &self.from_w.dist, t.midpoint, out);
        out.sort_unstable();
        out.dedup();
    }
}

/// Push the shortest path from `start` down the distance field `dist` to its
/// zero, taking the smallest-id predecessor at each step.
fn walk_down(g: &Graph, dist: &[u32], start: u32, out: &mut Vec<u32>) {
    let mut x = start;
    out.push(x);
    while dist[x as usize] > 0 {
        let d = dist[x as usize];
        x = *g
            .neighbors(x)
            .iter()
            .find(|&&y| dist[y as usize] == d - 1)
            .expect("BFS predecessor");
        out.push(x);
    }
}

fn pick<'a, T, R: Rng + ?Sized>(xs: &'a [T], rng: &mut R) -> Option<&'a T> {
    if xs.is_empty() {
        None
    } else {
        Some(&xs[rng.random_range(0..xs.len())])
    }
}
