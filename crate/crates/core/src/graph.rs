//! Plain undirected graphs keyed by vertex identifier.
//!
//! Loops and parallel edges collapse: routing only ever needs adjacency.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: BTreeMap<usize, BTreeSet<usize>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(edges: I) -> Self {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: usize) {
        self.adj.entry(v).or_default();
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.add_vertex(u);
        self.add_vertex(v);
        if u != v {
            self.adj.get_mut(&u).unwrap().insert(v);
            self.adj.get_mut(&v).unwrap().insert(u);
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if let Some(s) = self.adj.get_mut(&u) {
            s.remove(&v);
        }
        if let Some(s) = self.adj.get_mut(&v) {
            s.remove(&u);
        }
    }

    pub fn remove_vertex(&mut self, v: usize) {
        if let Some(nbrs) = self.adj.remove(&v) {
            for u in nbrs {
                self.adj.get_mut(&u).unwrap().remove(&v);
            }
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, s)| s.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn max_vertex(&self) -> Option<usize> {
        self.adj.keys().next_back().copied()
    }

    /// Subgraph induced on the vertices not in `removed`.
    pub fn without(&self, removed: &BTreeSet<usize>) -> Graph {
        let mut g = Graph::new();
        for v in self.vertices().filter(|v| !removed.contains(v)) {
            g.add_vertex(v);
            for u in self.neighbors(v).filter(|u| !removed.contains(u)) {
                g.add_edge(v, u);
            }
        }
        g
    }

    pub fn component_of(&self, start: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        if !self.contains(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if !seen.contains(&v) {
                let c = self.component_of(v);
                seen.extend(c.iter().copied());
                out.push(c);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Reads `E <id> <u> <v> [sign]` and `V <id>[: ...]` records; everything
    /// else (rotations, holes, comments) is ignored.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut g = Graph::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| -> Result<usize> {
                s.trim_end_matches(':').parse().map_err(|_| Error::Parse {
                    line: i + 1,
                    msg: format!("expected a vertex id, found `{s}`"),
                })
            };
            match toks[0] {
                "V" if toks.len() >= 2 => g.add_vertex(num(toks[1])?),
                "E" if toks.len() >= 4 => g.add_edge(num(toks[2])?, num(toks[3])?),
                "V" | "E" => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: "truncated record".into(),
                    })
                }
                _ => {}
            }
        }
        Ok(g)
    }
}
