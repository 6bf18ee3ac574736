//! Combinatorial surfaces: embedded graphs, classification, cutting along
//! boundary paths and the type predicates on such paths.

mod build;
mod cut;
mod embedding;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use build::{canonical, hole_edges, random_bd_path, refine};
pub use cut::{cut_along, pseudotype, same_type, CutResult};
pub use embedding::{dart_of, edge_of, flag, side_of, ComponentInfo, Dart, Edge, EmbeddedGraph, Faces, Flag, Hole};

/// Σ(a, b, c): a sphere with `a` handles, `b` crosscaps and `c` holes.
/// Stored in Dyck normal form, so `b > 0` implies `a == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceSignature {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl SurfaceSignature {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        if b > 0 {
            SurfaceSignature { a: 0, b: 2 * a + b, c }
        } else {
            SurfaceSignature { a, b, c }
        }
    }

    pub fn genus(&self) -> usize {
        2 * self.a + self.b
    }

    pub fn euler(&self) -> i64 {
        2 - 2 * self.a as i64 - self.b as i64 - self.c as i64
    }

    pub fn orientable(&self) -> bool {
        self.b == 0
    }

    pub fn from_euler(euler: i64, orientable: bool, holes: usize) -> Result<Self> {
        let g = 2 - euler - holes as i64;
        if g < 0 {
            return Err(Error::MalformedEmbedding(format!("Euler characteristic {euler} too large")));
        }
        if orientable {
            if g % 2 != 0 {
                return Err(Error::MalformedEmbedding("odd genus on an orientable surface".into()));
            }
            Ok(SurfaceSignature::new(g as usize / 2, 0, holes))
        } else {
            if g == 0 {
                return Err(Error::MalformedEmbedding("non-orientable surface of genus 0".into()));
            }
            Ok(SurfaceSignature::new(0, g as usize, holes))
        }
    }
}

impl fmt::Display for SurfaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Σ({},{},{})", self.a, self.b, self.c)
    }
}

/// A path whose ends lie on holes and whose interior avoids every hole.
/// Vertices are dense indices of the embedding it was built for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub end_holes: (usize, usize),
    /// Hole corners used at each end, as side-1 flags of the original graph.
    pub(crate) corners: (Flag, Flag),
}

impl BoundaryPath {
    /// Validates a vertex/edge walk.
    pub fn new(g: &EmbeddedGraph, vertices: Vec<usize>, edges: Vec<usize>) -> Result<Self> {
        if vertices.len() < 2 || edges.len() + 1 != vertices.len() {
            return Err(Error::InvalidPath("need at least one edge and matching vertex/edge counts".into()));
        }
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidPath("walk repeats a vertex".into()));
        }
        for (i, &e) in edges.iter().enumerate() {
            if e >= g.edge_count() || vertices.iter().any(|&v| v >= g.vertex_count()) {
                return Err(Error::InvalidPath("unknown vertex or edge".into()));
            }
            let [a, b] = g.edge(e).ends;
            let (u, v) = (vertices[i], vertices[i + 1]);
            if !((a == u && b == v) || (a == v && b == u)) {
                return Err(Error::InvalidPath(format!("edge {} does not join consecutive vertices", g.edge(e).label)));
            }
        }
        let boundary = hole_edges(g);
        if let Some(&e) = edges.iter().find(|e| boundary.contains(e)) {
            return Err(Error::InvalidPath(format!("edge {} runs along a hole", g.edge(e).label)));
        }
        let holes = g.hole_vertex_sets();
        for &v in &vertices[1..vertices.len() - 1] {
            if let Some((id, _)) = holes.iter().find(|(_, s)| s.contains(&v)) {
                return Err(Error::InvalidPath(format!(
                    "internal vertex {} lies on hole {id}",
                    g.label(v)
                )));
            }
        }
        let first = vertices[0];
        let last = *vertices.last().unwrap();
        let (c0, h0) = g
            .hole_corner(first)
            .ok_or_else(|| Error::InvalidPath(format!("start {} is not on a hole", g.label(first))))?;
        let (c1, h1) = g
            .hole_corner(last)
            .ok_or_else(|| Error::InvalidPath(format!("end {} is not on a hole", g.label(last))))?;
        Ok(BoundaryPath { vertices, edges, end_holes: (h0, h1), corners: (flag(c0, 1), flag(c1, 1)) })
    }

    /// Builds the path through `vertices`, using the lowest-numbered edge
    /// between consecutive vertices.
    pub fn from_vertices(g: &EmbeddedGraph, vertices: Vec<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        for w in vertices.windows(2) {
            edges.push(g.edge_between(w[0], w[1]).ok_or_else(|| {
                Error::InvalidPath(format!("no edge between {} and {}", g.label(w[0]), g.label(w[1])))
            })?);
        }
        BoundaryPath::new(g, vertices, edges)
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pseudotype {
    /// The first part contains the arc of the end hole that leaves the start
    /// corner; each part lists the original hole ids it touches.
    Separating { parts: [(SurfaceSignature, BTreeSet<usize>); 2] },
    NonSeparating { sides: usize, orientable_after: bool },
}

impl fmt::Display for Pseudotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pseudotype::Separating { parts } => write!(
                f,
                "separating {} {:?} | {} {:?}",
                parts[0].0, parts[0].1, parts[1].0, parts[1].1
            ),
            Pseudotype::NonSeparating { sides, orientable_after } => write!(
                f,
                "non-separating ({sides},{})",
                if *orientable_after { "orientable" } else { "non-orientable" }
            ),
        }
    }
}

pub fn classify(g: &EmbeddedGraph) -> Result<SurfaceSignature> {
    let infos = g.component_info();
    if infos.len() != 1 {
        return Err(Error::Disconnected);
    }
    infos[0].signature()
}

/// Signatures of every connected component.
pub fn classify_components(g: &EmbeddedGraph) -> Result<Vec<SurfaceSignature>> {
    g.component_info().iter().map(|c| c.signature()).collect()
}
