//! Discrete sectional curvature of graphs.
//!
//! Random geometric graphs are sprinkled on manifolds of known curvature,
//! their hop metric is compared against the manifold metric, and sectional
//! curvature is recovered from approximate right triangles by solving the
//! generalized cosine rule. Comparison estimators and experiments on
//! fractal graphs and the earth spheroid are included.

pub mod converge;
pub mod curvature;
pub mod distortion;
pub mod earth;
pub mod fractal;
pub mod graph;
pub mod manifold;
pub mod rng;
pub mod sprinkle;
pub mod stats;
pub mod wolfram;

pub use curvature::{
    curvature_from_triangle, estimate_curvature, vertex_curvature, CurvatureError,
    CurvatureReport, HopWindow, SamplingOptions, TriangleSample,
};
pub use distortion::{distortion_report, DistortionReport};
pub use graph::{GeometricGraph, Graph};
pub use manifold::{Manifold, Point};
pub use rng::Seed;
pub use sprinkle::sprinkle;
