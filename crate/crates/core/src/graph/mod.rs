//! Undirected graphs in compressed sparse row form and breadth-first
//! shortest paths.

mod geometric;
mod io;

use std::collections::VecDeque;

use rand::Rng;
use thiserror::Error;

pub use geometric::GeometricGraph;
pub use io::{read_edge_list, write_edge_list, GraphSidecar};

/// Hop count marking a vertex unreachable from the BFS source.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("sidecar: {0}")]
    Sidecar(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Simple undirected graph: symmetric sorted adjacency, no loops or multi-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Build from an edge list. Duplicate edges (in either orientation) are merged.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w as usize >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: w as usize,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u as usize));
            }
            pairs.push((u, v));
            pairs.push((v, u));
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut offsets = vec![0usize; vertex_count + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..vertex_count {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.into_iter().map(|(_, v)| v).collect();
        Ok(Graph { offsets, targets })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.vertex_count() == 0 {
            0.0
        } else {
            self.targets.len() as f64 / self.vertex_count() as f64
        }
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Hop distances from `source`; unreachable vertices hold [`UNREACHABLE`].
    pub fn bfs_hops(&self, source: u32) -> Vec<u32> {
        let mut bfs = Bfs::new(self.vertex_count());
        bfs.run(self, source);
        bfs.dist
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() <= 1 {
            return true;
        }
        let mut bfs = Bfs::new(self.vertex_count());
        bfs.run(self, 0) == self.vertex_count()
    }

    /// Lower bound on the hop diameter from four breadth-first sweeps: a
    /// random start, then repeatedly the farthest vertex of the previous sweep.
    pub fn diameter_estimate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u32, GraphError> {
        let n = self.vertex_count();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut bfs = Bfs::new(n);
        let mut start = rng.random_range(0..n as u32);
        let mut best = 0;
        for _ in 0..4 {
            if bfs.run(self, start) != n {
                return Err(GraphError::Disconnected);
            }
            let (far, ecc) = bfs.farthest();
            best = best.max(ecc);
            start = far;
        }
        Ok(best)
    }
}

/// Reusable breadth-first search state.
#[derive(Clone, Debug)]
pub struct Bfs {
    pub dist: Vec<u32>,
    queue: VecDeque<u32>,
    visited: Vec<u32>,
}

impl Bfs {
    pub fn new(vertex_count: usize) -> Self {
        Bfs {
            dist: vec![UNREACHABLE; vertex_count],
            queue: VecDeque::new(),
            visited: Vec::with_capacity(vertex_count),
        }
    }

    /// Run from `source`, overwriting `self.dist`. Returns the number of
    /// vertices reached.
    pub fn run(&mut self, g: &Graph, source: u32) -> usize {
        for &v in &self.visited {
            self.dist[v as usize] = UNREACHABLE;
        }
        self.visited.clear();
        self.queue.clear();
        self.dist[source as usize] = 0;
        self.visited.push(source);
        self.queue.push_back(source);
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u as usize] + 1;
            for &w in g.neighbors(u) {
                if self.dist[w as usize] == UNREACHABLE {
                    self.dist[w as usize] = du;
                    self.visited.push(w);
                    self.queue.push_back(w);
                }
            }
        }
        self.visited.len()
    }

    /// Vertices reached by the last run, in BFS order.
    pub fn reached(&self) -> &[u32] {
        &self.visited
    }

    /// Farthest reached vertex (smallest id among ties) and its distance.
    pub fn farthest(&self) -> (u32, u32) {
        let mut best = (self.visited[0], 0);
        for &v in &self.visited {
            let d = self.dist[v as usize];
            if d > best.1 || (d == best.1 && v < best.0) {
                best = (v, d);
            }
        }
        best
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Graph;

    pub fn path(n: u32) -> Graph {
        Graph::from_edges(n as usize, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: u32) -> Graph {
        Graph::from_edges(n as usize, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: u32) -> Graph {
        Graph::from_edges(
            n as usize,
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
        )
        .unwrap()
    }

    /// `w x h` grid; vertex `(x, y)` has id `y * w + x`.
    pub fn grid(w: u32, h: u32) -> Graph {
        let mut edges = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let id = y * w + x;
                if x + 1 < w {
                    edges.push((id, id + 1));
                }
                if y + 1 < h {
                    edges.push((id, id + w));
                }
            }
        }
        Graph::from_edges((w * h) as usize, edges).unwrap()
    }
}
