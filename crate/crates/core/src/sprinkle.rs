//! Hard-annulus random geometric graphs.
//!
//! Points are connected when their geodesic distance `d` satisfies
//! `|d - l| <= l p`. The connection length `l` defaults to the smallest
//! value (found by bisection) for which the graph is connected.

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{GeometricGraph, Graph, GraphError};
use crate::manifold::{Manifold, ManifoldError, Point};

/// Tolerance used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 0.25;

/// Minimum number of bisection steps on the connection length.
const BISECTION_STEPS: usize = 24;
/// Bisection continues until the bracket is this narrow relative to `l`.
const BRACKET_REL: f64 = 1e-4;
/// Relative step below the returned `l` that must be disconnected.
const VERIFY_REL: f64 = 1e-3;
const MAX_REFINEMENTS: usize = 16;
const ROW_BLOCK: usize = 128;

#[derive(Debug, Error)]
pub enum SprinkleError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no connection length yields a connected graph (best tried l = {best_l}, {components} components)")]
    NoConnectedLength { best_l: f64, components: usize },
    #[error("edge ({0}, {1}) violates the annulus rule")]
    AnnulusViolation(u32, u32),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Precomputed coordinates with a cheap key that is monotone in geodesic
/// distance; used to prefilter pairs before the exact distance check.
enum PairKernel<'a> {
    /// Key is `-cos(angle)`.
    Sphere { unit: Vec<[f64; 4]>, radius: f64 },
    /// Key is `cosh(d / k)` via the hyperboloid model.
    Lorentz { coords: Vec<[f64; 3]>, k: f64 },
    /// Key is squared distance.
    Plane { coords: Vec<[f64; 2]> },
    /// Key is the distance itself (no cheap proxy).
    Exact {
        manifold: Manifold,
        points: &'a [Point],
    },
}

impl<'a> PairKernel<'a> {
    fn new(m: &Manifold, points: &'a [Point]) -> Result<Self, SprinkleError> {
        let mismatch = || SprinkleError::Manifold(ManifoldError::PointMismatch(m.name()));
        Ok(match *m {
            Manifold::Sphere2 { radius } | Manifold::Sphere3 { radius } => {
                let unit = points
                    .iter()
                    .map(|p| match *p {
                        Point::Ambient3([x, y, z]) if matches!(m, Manifold::Sphere2 { .. }) => {
                            Ok([x / radius, y / radius, z / radius, 0.0])
                        }
                        Point::Ambient4(v) if matches!(m, Manifold::Sphere3 { .. }) => {
                            Ok(v.map(|x| x / radius))
                        }
                        _ => Err(mismatch()),
                    })
                    .collect::<Result<_, _>>()?;
                PairKernel::Sphere { unit, radius }
            }
            Manifold::HyperbolicDisk {
                curvature_scale: k,
                ..
            } => {
                let coords = points
                    .iter()
                    .map(|p| match *p {
                        Point::Polar { r, theta } => {
                            let s = (r / k).sinh();
                            Ok([(r / k).cosh(), s * theta.cos(), s * theta.sin()])
                        }
                        _ => Err(mismatch()),
                    })
                    .collect::<Result<_, _>>()?;
                PairKernel::Lorentz { coords, k }
            }
            Manifold::EuclideanDisk { .. } => {
                let coords = points
                    .iter()
                    .map(|p| match *p {
                        Point::Planar { x, y } => Ok([x, y]),
                        _ => Err(mismatch()),
                    })
                    .collect::<Result<_, _>>()?;
                PairKernel::Plane { coords }
            }
            Manifold::Spheroid { .. } => PairKernel::Exact {
                manifold: *m,
                points,
            },
        })
    }

    #[inline]
    fn key(&self, i: usize, j: usize) -> f64 {
        match self {
            PairKernel::Sphere { unit, .. } => {
                let (p, q) = (&unit[i], &unit[j]);
                -(p[0] * q[0] + p[1] * q[1] + p[2] * q[2] + p[3] * q[3])
            }
            PairKernel::Lorentz { coords, .. } => {
                let (p, q) = (&coords[i], &coords[j]);
                p[0] * q[0] - p[1] * q[1] - p[2] * q[2]
            }
            PairKernel::Plane { coords } => {
                let dx = coords[i][0] - coords[j][0];
                let dy = coords[i][1] - coords[j][1];
                dx * dx + dy * dy
            }
            PairKernel::Exact { manifold, points } => manifold
                .distance(&points[i], &points[j])
                .unwrap_or(f64::INFINITY),
        }
    }

    fn distance_to_key(&self, d: f64) -> f64 {
        match self {
            PairKernel::Sphere { radius, .. } => -(d / radius).min(std::f64::consts::PI).cos(),
            PairKernel::Lorentz { k, .. } => (d / k).cosh(),
            PairKernel::Plane { .. } => d * d,
            PairKernel::Exact { .. } => d,
        }
    }

    fn key_to_distance(&self, key: f64) -> f64 {
        match self {
            PairKernel::Sphere { radius, .. } => radius * (-key).clamp(-1.0, 1.0).acos(),
            PairKernel::Lorentz { k, .. } => k * key.max(1.0).acosh(),
            PairKernel::Plane { .. } => key.max(0.0).sqrt(),
            PairKernel::Exact { .. } => key,
        }
    }

    /// Widened key interval guaranteed to contain every pair with
    /// `d` in `[lo, hi]`.
    fn key_window(&self, lo: f64, hi: f64) -> (f64, f64) {
        let (a, b) = (self.distance_to_key(lo), self.distance_to_key(hi));
        let slack = 1e-9 * a.abs().max(b.abs()).max(1.0);
        (a - slack, b + slack)
    }
}

struct Annulus<'a> {
    manifold: &'a Manifold,
    points: &'a [Point],
    kernel: PairKernel<'a>,
}

impl<'a> Annulus<'a> {
    fn new(manifold: &'a Manifold, points: &'a [Point]) -> Result<Self, SprinkleError> {
        Ok(Annulus {
            manifold,
            points,
            kernel: PairKernel::new(manifold, points)?,
        })
    }

    fn is_edge(&self, i: usize, j: usize, l: f64, p: f64) -> bool {
        match self.manifold.distance(&self.points[i], &self.points[j]) {
            Ok(d) => (d - l).abs() <= l * p,
            Err(_) => false,
        }
    }

    /// Edges `(i, j)`, `i < j`, with `i` in `rows`.
    fn row_edges(&self, rows: std::ops::Range<usize>, l: f64, p: f64) -> Vec<(u32, u32)> {
        let n = self.points.len();
        let (klo, khi) = self.kernel.key_window((l * (1.0 - p)).max(0.0), l * (1.0 + p));
        let mut out = Vec::new();
        for i in rows {
            for j in i + 1..n {
                let key = self.kernel.key(i, j);
                if key >= klo && key <= khi && self.is_edge(i, j, l, p) {
                    out.push((i as u32, j as u32));
                }
            }
        }
        out
    }

    fn edges(&self, l: f64, p: f64) -> Vec<(u32, u32)> {
        let n = self.points.len();
        let blocks: Vec<_> = (0..n).step_by(ROW_BLOCK).collect();
        blocks
            .into_par_iter()
            .map(|s| self.row_edges(s..(s + ROW_BLOCK).min(n), l, p))
            .collect::<Vec<_>>()
            .concat()
    }

    /// Number of connected components of the annulus graph, stopping early
    /// once it is known to be connected.
    fn components(&self, l: f64, p: f64) -> usize {
        let n = self.points.len();
        let mut dsu = DisjointSets::new(n);
        let batch = ROW_BLOCK * rayon::current_num_threads().max(1);
        let mut start = 0;
        while start < n && dsu.components > 1 {
            let end = (start + batch).min(n);
            let blocks: Vec<_> = (start..end).step_by(ROW_BLOCK).collect();
            let found: Vec<Vec<(u32, u32)>> = blocks
                .into_par_iter()
                .map(|s| self.row_edges(s..(s + ROW_BLOCK).min(end), l, p))
                .collect();
            for (u, v) in found.into_iter().flatten() {
                dsu.union(u as usize, v as usize);
            }
            start = end;
        }
        dsu.components
    }

    fn min_distance(&self) -> f64 {
        let n = self.points.len();
        let best_key = (0..n)
            .into_par_iter()
            .map(|i| {
                (i + 1..n)
                    .map(|j| self.kernel.key(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| f64::INFINITY, f64::min);
        self.kernel.key_to_distance(best_key)
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
            self.components -= 1;
        }
    }
}

fn check_tolerance(p: f64) -> Result<(), SprinkleError> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(SprinkleError::InvalidParameter(format!(
            "tolerance p must lie in (0, 1], got {p}"
        )))
    }
}

/// Connect every pair of points whose distance lies in `[l (1 - p), l (1 + p)]`.
pub fn build_annulus_graph(
    manifold: &Manifold,
    points: &[Point],
    l: f64,
    p: f64,
) -> Result<GeometricGraph, SprinkleError> {
    check_tolerance(p)?;
    if !(l.is_finite() && l > 0.0) {
        return Err(SprinkleError::InvalidParameter(format!(
            "connection length must be positive, got {l}"
        )));
    }
    let annulus = Annulus::new(manifold, points)?;
    let edges = annulus.edges(l, p);
    // Spot-check 1% of the edges against the exact annulus inequality.
    for &(u, v) in edges.iter().step_by(100) {
        let d = manifold.distance(&points[u as usize], &points[v as usize])?;
        if (d - l).abs() > l * p {
            return Err(SprinkleError::AnnulusViolation(u, v));
        }
    }
    let graph = Graph::from_edges(points.len(), edges)?;
    Ok(GeometricGraph {
        graph,
        manifold: *manifold,
        points: points.to_vec(),
        connection_length: l,
        tolerance: p,
        effective_edge_length: None,
    })
}

/// Smallest connection length (to a relative bracket of `1e-4`) whose
/// annulus graph is connected.
///
/// Bisects on `[0, diameter]` keeping the smallest connected `l` seen. The
/// connectivity predicate is not monotone in `l`, so the result is then
/// checked one relative step of `1e-3` below; a connected probe restarts
/// the search beneath it. If bisection never meets a connected graph, the
/// lengths are scanned upwards from the shortest pair distance instead.
pub fn min_connection_length(
    manifold: &Manifold,
    points: &[Point],
    p: f64,
) -> Result<f64, SprinkleError> {
    check_tolerance(p)?;
    if points.len() < 2 {
        return Err(SprinkleError::InvalidParameter(
            "at least two points are required".into(),
        ));
    }
    let annulus = Annulus::new(manifold, points)?;
    let mut fewest = (f64::NAN, usize::MAX);
    let mut connected = |l: f64| {
        let c = annulus.components(l, p);
        if c < fewest.1 {
            fewest = (l, c);
        }
        c == 1
    };

    let mut best = bisect(0.0, manifold.diameter(), None, &mut connected);
    if best.is_none() {
        let d_min = annulus.min_distance();
        let ratio = 1.0 + p / 2.0;
        let mut prev = d_min / (1.0 + p) / ratio;
        let mut l = d_min / (1.0 + p);
        while l <= manifold.diameter() * (1.0 + p) {
            if connected(l) {
                best = bisect(prev, l, Some(l), &mut connected);
                break;
            }
            prev = l;
            l *= ratio;
        }
    }
    let Some(mut l) = best else {
        return Err(SprinkleError::NoConnectedLength {
            best_l: fewest.0,
            components: fewest.1,
        });
    };
    for _ in 0..MAX_REFINEMENTS {
        let probe = l * (1.0 - VERIFY_REL);
        if !connected(probe) {
            break;
        }
        l = bisect(0.0, probe, Some(probe), &mut connected).unwrap_or(probe);
    }
    Ok(l)
}

/// Bisection on `[lo, hi]` returning the smallest connected length seen.
fn bisect(
    mut lo: f64,
    mut hi: f64,
    mut best: Option<f64>,
    connected: &mut impl FnMut(f64) -> bool,
) -> Option<f64> {
    let mut step = 0;
    loop {
        let narrow = best.is_some_and(|b| hi - lo <= BRACKET_REL * b);
        if (step >= BISECTION_STEPS && (narrow || best.is_none())) || step >= 200 {
            return best;
        }
        let mid = 0.5 * (lo + hi);
        if connected(mid) {
            best = Some(best.map_or(mid, |b: f64| b.min(mid)));
            hi = mid;
        } else {
            lo = mid;
        }
        step += 1;
    }
}

/// Sample `n` points uniformly and connect them with the annulus rule.
///
/// Uses `l_override` when given, else [`min_connection_length`].
pub fn sprinkle<R: Rng + ?Sized>(
    manifold: &Manifold,
    n: usize,
    p: f64,
    rng: &mut R,
    l_override: Option<f64>,
) -> Result<GeometricGraph, SprinkleError> {
    if n < 2 {
        return Err(SprinkleError::InvalidParameter(format!(
            "need at least two vertices, got {n}"
        )));
    }
    check_tolerance(p)?;
    let points = (0..n)
        .map(|_| manifold.sample_point(rng))
        .collect::<Result<Vec<_>, _>>()?;
    let l = match l_override {
        Some(l) => l,
        None => min_connection_length(manifold, &points, p)?,
    };
    build_annulus_graph(manifold, &points, l, p)
}
