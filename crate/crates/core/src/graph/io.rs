//! Plain-text edge lists and the JSON sidecar of geometric graphs.
//!
//! Edge list: first line `V E`, then `E` lines `u v` (0-based, `u < v`).
//! A geometric graph stored under `prefix` lives in `prefix.edges` and
//! `prefix.json`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{GeometricGraph, Graph, GraphError};
use crate::manifold::Manifold;

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", g.vertex_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: Read>(input: R) -> Result<Graph, GraphError> {
    let reader = BufReader::new(input);
    let mut lines = reader
        .lines()
        .enumerate()
        .filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()));
    let parse_pair = |line: usize, text: &str| -> Result<(u64, u64), GraphError> {
        let mut it = text.split_whitespace();
        let mut next = || -> Result<u64, GraphError> {
            it.next()
                .ok_or_else(|| GraphError::Parse {
                    line,
                    message: "expected two integers".into(),
                })?
                .parse()
                .map_err(|e| GraphError::Parse {
                    line,
                    message: format!("{e}"),
                })
        };
        let a = next()?;
        let b = next()?;
        Ok((a, b))
    };

    let (line0, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let (n, m) = parse_pair(line0 + 1, &header?)?;
    let n = usize::try_from(n).ok().filter(|&n| n < u32::MAX as usize).ok_or(
        GraphError::Parse {
            line: 1,
            message: "vertex count too large".into(),
        },
    )?;
    let mut edges = Vec::with_capacity(m as usize);
    for (i, line) in lines {
        let (u, v) = parse_pair(i + 1, &line?)?;
        if u >= n as u64 || v >= n as u64 {
            return Err(GraphError::VertexOutOfRange {
                vertex: u.max(v) as usize,
                count: n,
            });
        }
        edges.push((u as u32, v as u32));
    }
    if edges.len() as u64 != m {
        return Err(GraphError::Parse {
            line: 1,
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

/// JSON companion of an edge list describing the embedding.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphSidecar {
    pub manifold: Manifold,
    pub l: f64,
    pub p: f64,
    pub coordinates: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective_edge_length: Option<f64>,
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

impl GeometricGraph {
    pub fn sidecar(&self) -> GraphSidecar {
        GraphSidecar {
            manifold: self.manifold,
            l: self.connection_length,
            p: self.tolerance,
            coordinates: self.points.iter().map(|p| p.coords()).collect(),
            effective_edge_length: self.effective_edge_length,
        }
    }

    pub fn from_parts(graph: Graph, sidecar: GraphSidecar) -> Result<Self, GraphError> {
        if sidecar.coordinates.len() != graph.vertex_count() {
            return Err(GraphError::Sidecar(format!(
                "{} coordinates for {} vertices",
                sidecar.coordinates.len(),
                graph.vertex_count()
            )));
        }
        let points = sidecar
            .coordinates
            .iter()
            .map(|c| sidecar.manifold.point_from_coords(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| GraphError::Sidecar(e.to_string()))?;
        Ok(GeometricGraph {
            graph,
            manifold: sidecar.manifold,
            points,
            connection_length: sidecar.l,
            tolerance: sidecar.p,
            effective_edge_length: sidecar.effective_edge_length,
        })
    }

    /// Write `prefix.edges` and `prefix.json`.
    pub fn save(&self, prefix: &Path) -> Result<(), GraphError> {
        let mut edges = BufWriter::new(File::create(with_ext(prefix, "edges"))?);
        write_edge_list(&self.graph, &mut edges)?;
        edges.flush()?;
        let mut side = BufWriter::new(File::create(with_ext(prefix, "json"))?);
        serde_json::to_writer(&mut side, &self.sidecar())
            .map_err(|e| GraphError::Sidecar(e.to_string()))?;
        side.flush()?;
        Ok(())
    }

    pub fn load(prefix: &Path) -> Result<Self, GraphError> {
        let graph = read_edge_list(File::open(with_ext(prefix, "edges"))?)?;
        let sidecar: GraphSidecar =
            serde_json::from_reader(BufReader::new(File::open(with_ext(prefix, "json"))?))
                .map_err(|e| GraphError::Sidecar(e.to_string()))?;
        GeometricGraph::from_parts(graph, sidecar)
    }
}
