//! Cylindrical grids `C_m □ P_n` and constructive routing of cross-free
//! boundary patterns.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::{cross_free, verify, Linkage, Pattern};

/// Vertex `(ring, j)` has id `ring * m + j`; ring 0 is the outer boundary
/// cycle and ring `n - 1` the inner one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylGrid {
    pub m: usize,
    pub n: usize,
    graph: Graph,
}

impl CylGrid {
    pub fn build(m: usize, n: usize) -> Result<CylGrid> {
        if m < 3 || n < 1 {
            return Err(Error::GridDimensions { m, n });
        }
        let mut graph = Graph::new();
        for r in 0..n {
            for j in 0..m {
                graph.add_edge(r * m + j, r * m + (j + 1) % m);
                if r + 1 < n {
                    graph.add_edge(r * m + j, (r + 1) * m + j);
                }
            }
        }
        Ok(CylGrid { m, n, graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn id(&self, ring: usize, j: usize) -> usize {
        ring * self.m + j % self.m
    }

    pub fn ring(&self, r: usize) -> Vec<usize> {
        (0..self.m).map(|j| self.id(r, j)).collect()
    }

    /// The two boundary cycles (one if `n == 1`).
    pub fn boundary_cycles(&self) -> Vec<Vec<usize>> {
        if self.n == 1 {
            vec![self.ring(0)]
        } else {
            vec![self.ring(0), self.ring(self.n - 1)]
        }
    }

    /// Routes a cross-free pattern whose terminals lie on one boundary cycle.
    /// Singletons stay put; every other terminal then steps one ring inward.
    /// Each round routes the pair with the shortest terminal-free clockwise
    /// arc along the current ring and steps the remaining terminals inward.
    pub fn realize(&self, p: &Pattern) -> Result<Linkage> {
        let terms = p.terminals();
        let on = |r: usize| terms.iter().all(|&v| v / self.m == r && v < self.m * self.n);
        let outer = if on(0) {
            true
        } else if on(self.n - 1) {
            false
        } else {
            let bad = terms.iter().find(|&&v| v / self.m != 0).copied().unwrap_or(0);
            return Err(Error::OffBoundary(bad));
        };
        let ring0 = if outer { 0 } else { self.n - 1 };
        if !cross_free(p, &self.ring(ring0))? {
            return Err(Error::NotCrossFree);
        }
        if p.k() > self.n {
            return Err(Error::TooManyPairs { k: p.k(), n: self.n });
        }
        let ring_id = |step: usize, j: usize| {
            let r = if outer { step } else { self.n - 1 - step };
            self.id(r, j)
        };

        let k = p.k();
        let mut paths: Vec<Vec<usize>> = vec![Vec::new(); k];
        // for each open pair: partial paths from s and from t, current positions
        struct Open {
            idx: usize,
            from_s: Vec<usize>,
            from_t: Vec<usize>,
            s: usize,
            t: usize,
        }
        let mut open: Vec<Open> = Vec::new();
        for (i, &(s, t)) in p.pairs.iter().enumerate() {
            if s == t {
                paths[i] = vec![s];
            } else {
                open.push(Open { idx: i, from_s: vec![s], from_t: vec![t], s: s % self.m, t: t % self.m });
            }
        }
        let mut step = 0;
        if open.len() < k && !open.is_empty() {
            step = 1;
            for o in open.iter_mut() {
                o.from_s.push(ring_id(1, o.s));
                o.from_t.push(ring_id(1, o.t));
            }
        }
        while !open.is_empty() {
            let positions: Vec<usize> = open.iter().flat_map(|o| [o.s, o.t]).collect();
            let m = self.m;
            let clockwise = |a: usize, b: usize| (b + m - a) % m;
            let empty = |a: usize, b: usize| positions.iter().all(|&x| x == a || x == b || clockwise(a, x) > clockwise(a, b));
            let mut best: Option<(usize, usize, usize, bool)> = None;
            for (oi, o) in open.iter().enumerate() {
                for (a, b, fwd) in [(o.s, o.t, true), (o.t, o.s, false)] {
                    if empty(a, b) {
                        let key = (clockwise(a, b), a);
                        if best.is_none_or(|(_, l, st, _)| key < (l, st)) {
                            best = Some((oi, key.0, key.1, fwd));
                        }
                    }
                }
            }
            let (oi, len, start, fwd) = best.ok_or(Error::NotCrossFree)?;
            let o = open.remove(oi);
            let arc: Vec<usize> = (1..len).map(|d| ring_id(step, start + d)).collect();
            let mut path = o.from_s.clone();
            if fwd {
                path.extend(arc);
            } else {
                path.extend(arc.into_iter().rev());
            }
            path.extend(o.from_t.iter().rev());
            paths[o.idx] = path;
            if !open.is_empty() {
                step += 1;
                for o in open.iter_mut() {
                    o.from_s.push(ring_id(step, o.s));
                    o.from_t.push(ring_id(step, o.t));
                }
            }
        }
        let l = Linkage { paths };
        if !verify(&self.graph, p, &l) {
            return Err(Error::InvalidLinkage("grid routing produced an invalid linkage".into()));
        }
        Ok(l)
    }
}
