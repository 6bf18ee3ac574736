//! Face-set regions of an embedded graph: frontiers, disc tests, pockets.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::surface::{flag, EmbeddedGraph, Faces};

/// A set of faces, indexed by face id.
pub type Region = Vec<bool>;

pub(crate) struct Topo<'a> {
    pub g: &'a EmbeddedGraph,
    pub faces: Faces,
    /// The faces on the two sides of each edge.
    pub sides: Vec<[usize; 2]>,
    /// Distinct faces incident to each vertex.
    pub vfaces: Vec<Vec<usize>>,
    pub hole: Vec<bool>,
}

const CYCLE_CAP: usize = 200_000;

impl<'a> Topo<'a> {
    pub fn new(g: &'a EmbeddedGraph) -> Topo<'a> {
        let faces = g.faces();
        let sides = (0..g.edge_count())
            .map(|e| [faces.face[flag(2 * e, 0)], faces.face[flag(2 * e, 1)]])
            .collect();
        let vfaces = (0..g.vertex_count())
            .map(|v| {
                let s: BTreeSet<usize> =
                    g.rotation(v).iter().flat_map(|&d| [faces.face[flag(d, 0)], faces.face[flag(d, 1)]]).collect();
                s.into_iter().collect()
            })
            .collect();
        let mut hole = vec![false; faces.count];
        for f in g.hole_faces(&faces) {
            hole[f] = true;
        }
        Topo { g, faces, sides, vfaces, hole }
    }

    pub fn empty(&self) -> Region {
        vec![false; self.faces.count]
    }

    /// Vertices of the closed region.
    pub fn closed_vertices(&self, r: &[bool]) -> Vec<bool> {
        self.vfaces.iter().map(|fs| fs.iter().any(|&f| r[f])).collect()
    }

    /// `x` has faces and all of them lie in `r`.
    pub fn strictly_inside(&self, r: &[bool], x: usize) -> bool {
        !self.vfaces[x].is_empty() && self.vfaces[x].iter().all(|&f| r[f])
    }

    pub fn edge_inside(&self, r: &[bool], e: usize) -> bool {
        r[self.sides[e][0]] || r[self.sides[e][1]]
    }

    /// Every face touching a vertex of the closed region.
    pub fn star(&self, r: &[bool]) -> Region {
        let mut out = r.to_vec();
        for (v, inside) in self.closed_vertices(r).into_iter().enumerate() {
            if inside {
                for &f in &self.vfaces[v] {
                    out[f] = true;
                }
            }
        }
        out
    }

    /// Boundary of the region as a cyclic vertex sequence, if it is a single
    /// simple cycle.
    pub fn frontier_cycle(&self, r: &[bool]) -> Option<Vec<usize>> {
        let n = self.g.vertex_count();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut count = 0;
        for (e, [a, b]) in self.sides.iter().enumerate() {
            if r[*a] != r[*b] {
                let [u, v] = self.g.edge(e).ends;
                if u == v {
                    return None;
                }
                adj[u].push(v);
                adj[v].push(u);
                count += 1;
            }
        }
        if count < 3 || adj.iter().any(|a| !a.is_empty() && a.len() != 2) {
            return None;
        }
        let start = adj.iter().position(|a| !a.is_empty())?;
        let mut cyc = vec![start];
        let (mut prev, mut cur) = (start, adj[start][0]);
        while cur != start {
            cyc.push(cur);
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        }
        (cyc.len() == count).then_some(cyc)
    }

    fn components(&self, member: &[bool], wall: &dyn Fn(usize) -> bool) -> Vec<Region> {
        let mut comp = vec![usize::MAX; self.faces.count];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.faces.count];
        for (e, &[a, b]) in self.sides.iter().enumerate() {
            if a != b && member[a] && member[b] && !wall(e) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut out = Vec::new();
        for s in 0..self.faces.count {
            if !member[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut reg = self.empty();
            let mut stack = vec![s];
            comp[s] = id;
            while let Some(f) = stack.pop() {
                reg[f] = true;
                for &h in &adj[f] {
                    if comp[h] == usize::MAX {
                        comp[h] = id;
                        stack.push(h);
                    }
                }
            }
            out.push(reg);
        }
        out
    }

    pub fn connected(&self, r: &[bool]) -> bool {
        self.components(r, &|_| false).len() == 1
    }

    /// Closed disc test: connected, hole-free, simple frontier, Euler
    /// characteristic one.
    pub fn is_disc(&self, r: &[bool]) -> bool {
        if !r.iter().any(|&x| x) || r.iter().zip(&self.hole).any(|(&a, &h)| a && h) {
            return false;
        }
        if self.frontier_cycle(r).is_none() || !self.connected(r) {
            return false;
        }
        let v = self.closed_vertices(r).iter().filter(|&&x| x).count() as i64;
        let e = (0..self.sides.len()).filter(|&e| self.edge_inside(r, e)).count() as i64;
        let f = r.iter().filter(|&&x| x).count() as i64;
        v - e + f == 1
    }

    /// Components of the complement of `r`.
    pub fn pockets(&self, r: &[bool]) -> Vec<Region> {
        let outside: Vec<bool> = r.iter().map(|&x| !x).collect();
        self.components(&outside, &|_| false)
    }

    /// Face classes separated by the edges of the closed walk `cycle`.
    pub fn sides_of_cycle(&self, cycle: &[usize]) -> Result<Vec<Region>> {
        let wall = self.cycle_edges(cycle)?;
        let all = vec![true; self.faces.count];
        Ok(self.components(&all, &|e| wall.contains(&e)))
    }

    /// Face classes separated by an explicit set of edges.
    pub fn split_by(&self, wall: &BTreeSet<usize>) -> Vec<Region> {
        let all = vec![true; self.faces.count];
        self.components(&all, &|e| wall.contains(&e))
    }

    pub fn cycle_edges(&self, cycle: &[usize]) -> Result<BTreeSet<usize>> {
        let mut wall = BTreeSet::new();
        for i in 0..cycle.len() {
            let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            let e = self
                .g
                .edge_between(u, v)
                .ok_or_else(|| Error::InvalidInsulation(format!("{u} and {v} are not adjacent")))?;
            wall.insert(e);
        }
        Ok(wall)
    }

    /// All simple cycles (length ≥ 3) on vertices where `allowed` holds,
    /// using only edges for which `edge_ok` holds.
    pub fn simple_cycles(&self, allowed: &[bool], edge_ok: &dyn Fn(usize) -> bool) -> Result<Vec<Vec<usize>>> {
        let n = self.g.vertex_count();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in 0..self.sides.len() {
            let [u, v] = self.g.edge(e).ends;
            if u != v && allowed[u] && allowed[v] && edge_ok(e) && !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut out = Vec::new();
        for s in 0..n {
            if !allowed[s] {
                continue;
            }
            let mut path = vec![s];
            let mut on = vec![false; n];
            on[s] = true;
            cycles_from(s, &adj, &mut path, &mut on, &mut out)?;
        }
        Ok(out)
    }
}

fn cycles_from(
    s: usize,
    adj: &[Vec<usize>],
    path: &mut Vec<usize>,
    on: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let cur = *path.last().unwrap();
    for &w in &adj[cur] {
        if w == s && path.len() >= 3 && path[1] < cur {
            out.push(path.clone());
            if out.len() > CYCLE_CAP {
                return Err(Error::TooLarge(adj.len(), CYCLE_CAP));
            }
        } else if w > s && !on[w] {
            on[w] = true;
            path.push(w);
            cycles_from(s, adj, path, on, out)?;
            path.pop();
            on[w] = false;
        }
    }
    Ok(())
}

pub(crate) fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !x || y)
}
