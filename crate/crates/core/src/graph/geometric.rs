use crate::manifold::{Manifold, Point};

use super::Graph;

/// A graph whose vertices are points of a manifold, built by the
/// hard-annulus rule `|d - l| <= l p`.
#[derive(Clone, Debug)]
pub struct GeometricGraph {
    pub graph: Graph,
    pub manifold: Manifold,
    pub points: Vec<Point>,
    /// Connection length `l`.
    pub connection_length: f64,
    /// Relative annulus half-width `p`.
    pub tolerance: f64,
    /// Geometric mean of embedding ratios, once measured.
    pub effective_edge_length: Option<f64>,
}

impl GeometricGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }
}
