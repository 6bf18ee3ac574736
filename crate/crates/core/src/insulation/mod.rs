//! Protection depth, leveled discs, hill elimination and the
//! disk-with-strips decomposition. Vertices are embedding indices
//! (`0..vertex_count`), not labels.

mod hills;
mod strips;
pub(crate) mod topo;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::surface::{EmbeddedGraph, Edge};

pub use hills::{eliminate_hills, find_hills, make_decreasing, phi, Elimination, Hill, HillStep};
pub use strips::{decompose, DiskWithStrips, Strip, StripKind};
pub use topo::Region;
use topo::{subset, Topo};

/// Concentric rings around a center: vertex 0 is the center, ring `r`
/// (1-based, ring 1 innermost) position `j` is `1 + (r-1)·m + j`. Each
/// `(i, j, sign)` in `exterior` adds an edge between outer-ring positions
/// `i` and `j`.
pub fn onion(m: usize, t: usize, exterior: &[(usize, usize, i8)]) -> Result<EmbeddedGraph> {
    if m < 3 || t < 1 {
        return Err(Error::GridDimensions { m, n: t });
    }
    let id = |r: usize, j: usize| 1 + (r - 1) * m + j % m;
    let n = 1 + m * t;
    let mut edges: Vec<Edge> = Vec::new();
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut slots: Vec<[Vec<usize>; 4]> = vec![Default::default(); n];
    let mut add = |u: usize, v: usize, sign: i8, su: usize, sv: usize, slots: &mut Vec<[Vec<usize>; 4]>| {
        let e = edges.len();
        edges.push(Edge { ends: [u, v], sign, label: e });
        slots[u][su].push(2 * e);
        slots[v][sv].push(2 * e + 1);
    };
    for j in 0..m {
        add(0, id(1, j), 1, 0, 2, &mut slots);
    }
    for r in 1..=t {
        for j in 0..m {
            add(id(r, j), id(r, j + 1), 1, 1, 3, &mut slots);
            if r < t {
                add(id(r, j), id(r + 1, j), 1, 0, 2, &mut slots);
            }
        }
    }
    for &(i, j, sign) in exterior {
        if i >= m || j >= m || i == j {
            return Err(Error::InvalidInsulation(format!("exterior edge {i}-{j} out of range")));
        }
        add(id(t, i), id(t, j), sign, 0, 0, &mut slots);
    }
    for (v, s) in slots.into_iter().enumerate() {
        rotation[v] = s.into_iter().flatten().collect();
    }
    EmbeddedGraph::from_parts((0..n).collect(), edges, rotation, Vec::new())
}

/// Relabels a pattern given on vertex labels to embedding indices.
pub fn index_pattern(g: &EmbeddedGraph, p: &Pattern) -> Result<Pattern> {
    let ix = |l: usize| g.index_of(l).ok_or(Error::UnknownVertex(l));
    Pattern::new(p.pairs.iter().map(|&(s, t)| Ok((ix(s)?, ix(t)?))).collect::<Result<_>>()?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Protection {
    pub depth: usize,
    /// `C_1` (innermost) first, each in cyclic order.
    pub cycles: Vec<Vec<usize>>,
    #[serde(skip)]
    pub discs: Vec<Region>,
}

struct Search<'a> {
    topo: Topo<'a>,
    terminals: Vec<usize>,
    memo: HashMap<Region, Vec<Region>>,
}

impl Search<'_> {
    fn valid(&self, d: &[bool]) -> bool {
        !d.iter().zip(&self.topo.hole).any(|(&a, &h)| a && h)
            && !self.terminals.iter().any(|&x| self.topo.strictly_inside(d, x))
    }

    /// Inclusion-minimal valid discs containing `r`.
    fn minimal_discs(&self, r: &[bool]) -> Result<Vec<Region>> {
        let t = &self.topo;
        let mut out: Vec<Region> = Vec::new();
        for p in t.pockets(r) {
            if t.hole.iter().zip(&p).any(|(&h, &x)| h && !x) {
                continue;
            }
            if self.terminals.iter().any(|&x| !t.vfaces[x].is_empty() && !t.vfaces[x].iter().any(|&f| p[f])) {
                continue;
            }
            let d: Region = p.iter().map(|&x| !x).collect();
            if t.is_disc(&d) {
                out.push(d);
                continue;
            }
            let allowed: Vec<bool> = t.vfaces.iter().map(|fs| fs.iter().any(|&f| p[f])).collect();
            let edge_ok = |e: usize| p[t.sides[e][0]] || p[t.sides[e][1]];
            for c in t.simple_cycles(&allowed, &edge_ok)? {
                for s in t.sides_of_cycle(&c)? {
                    if subset(r, &s) && self.valid(&s) && t.is_disc(&s) {
                        out.push(s);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        let minimal: Vec<Region> = out
            .iter()
            .filter(|d| !out.iter().any(|o| o != *d && subset(o, d)))
            .cloned()
            .collect();
        let mut keyed: Vec<(usize, Vec<usize>, Region)> = minimal
            .into_iter()
            .map(|d| {
                let mut c = t.frontier_cycle(&d).unwrap_or_default();
                c.sort();
                (c.len(), c, d)
            })
            .collect();
        keyed.sort();
        Ok(keyed.into_iter().map(|(_, _, d)| d).collect())
    }

    /// Longest chain of discs strictly nested around `d`.
    fn chain_after(&mut self, d: &Region) -> Result<Vec<Region>> {
        if let Some(c) = self.memo.get(d) {
            return Ok(c.clone());
        }
        let r = self.topo.star(d);
        let mut best: Vec<Region> = Vec::new();
        for c in self.minimal_discs(&r)? {
            let mut chain = vec![c.clone()];
            chain.extend(self.chain_after(&c)?);
            if chain.len() > best.len() {
                best = chain;
            }
        }
        self.memo.insert(d.clone(), best.clone());
        Ok(best)
    }
}

/// Maximum number of vertex-disjoint cycles bounding nested discs that
/// contain `v`, with no terminal strictly inside the outermost disc.
/// `p` is on embedding indices.
pub fn protection_depth(g: &EmbeddedGraph, v: usize, p: &Pattern) -> Result<Protection> {
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(v));
    }
    if p.terminals().contains(&v) {
        return Err(Error::TerminalVertex(v));
    }
    if g.components().len() > 1 {
        return Err(Error::Disconnected);
    }
    let topo = Topo::new(g);
    let mut s = Search { terminals: p.terminals().into_iter().collect(), topo, memo: HashMap::new() };
    let mut best: Vec<Region> = Vec::new();
    for &f in &s.topo.vfaces[v].clone() {
        if s.topo.hole[f] {
            continue;
        }
        let mut seed = s.topo.empty();
        seed[f] = true;
        for c in s.minimal_discs(&seed)? {
            let mut chain = vec![c.clone()];
            chain.extend(s.chain_after(&c)?);
            if chain.len() > best.len() {
                best = chain;
            }
        }
    }
    let cycles = best.iter().map(|d| s.topo.frontier_cycle(d).unwrap()).collect();
    Ok(Protection { depth: best.len(), cycles, discs: best })
}

/// A disc with nested cycles `C_1 ⊂ … ⊂ C_t` around a center and the
/// induced level map.
#[derive(Debug, Clone)]
pub struct LeveledDisk {
    pub graph: EmbeddedGraph,
    pub center: usize,
    pub cycles: Vec<Vec<usize>>,
    discs: Vec<Region>,
    level: Vec<Option<usize>>,
    on_cycle: Vec<Option<usize>>,
}

impl LeveledDisk {
    /// Validates the family: disjoint cycles, each bounding a disc that
    /// contains the center and the previous disc.
    pub fn new(graph: EmbeddedGraph, center: usize, cycles: Vec<Vec<usize>>) -> Result<LeveledDisk> {
        if cycles.is_empty() {
            return Err(Error::InvalidInsulation("no cycles".into()));
        }
        if center >= graph.vertex_count() {
            return Err(Error::UnknownVertex(center));
        }
        let mut discs: Vec<Region> = Vec::new();
        {
            let topo = Topo::new(&graph);
            let mut seen = vec![false; graph.vertex_count()];
            for c in &cycles {
                if c.len() < 3 {
                    return Err(Error::InvalidInsulation("cycle shorter than three".into()));
                }
                for &x in c {
                    if x >= seen.len() || std::mem::replace(&mut seen[x], true) {
                        return Err(Error::InvalidInsulation(format!("vertex {x} repeated across cycles")));
                    }
                }
            }
            for (i, c) in cycles.iter().enumerate() {
                let mut opts: Vec<Region> = topo
                    .sides_of_cycle(c)?
                    .into_iter()
                    .filter(|s| topo.is_disc(s) && topo.closed_vertices(s)[center])
                    .filter(|s| discs.last().is_none_or(|prev| subset(prev, s)))
                    .collect();
                if i == 0 && opts.len() > 1 {
                    if let Some(next) = cycles.get(1) {
                        let outer: Vec<Region> =
                            topo.sides_of_cycle(next)?.into_iter().filter(|s| topo.closed_vertices(s)[center]).collect();
                        opts.retain(|s| outer.iter().any(|o| subset(s, o)));
                    }
                }
                opts.sort_by_key(|s| s.iter().filter(|&&x| x).count());
                let d = opts
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::InvalidInsulation(format!("cycle {} bounds no nested disc", i + 1)))?;
                discs.push(d);
            }
        }
        Ok(Self::assemble(graph, center, cycles, discs))
    }

    pub fn from_protection(graph: EmbeddedGraph, center: usize, p: &Protection) -> Result<LeveledDisk> {
        if p.depth == 0 {
            return Err(Error::InvalidInsulation("depth zero".into()));
        }
        Ok(Self::assemble(graph, center, p.cycles.clone(), p.discs.clone()))
    }

    fn assemble(graph: EmbeddedGraph, center: usize, cycles: Vec<Vec<usize>>, discs: Vec<Region>) -> LeveledDisk {
        let n = graph.vertex_count();
        let mut level = vec![None; n];
        let mut on_cycle = vec![None; n];
        {
            let topo = Topo::new(&graph);
            for (i, d) in discs.iter().enumerate() {
                for (x, inside) in topo.closed_vertices(d).into_iter().enumerate() {
                    if inside && level[x].is_none() {
                        level[x] = Some(i + 1);
                    }
                }
            }
        }
        for (i, c) in cycles.iter().enumerate() {
            for &x in c {
                on_cycle[x] = Some(i + 1);
            }
        }
        LeveledDisk { graph, center, cycles, discs, level, on_cycle }
    }

    pub fn t(&self) -> usize {
        self.cycles.len()
    }

    /// `ℓ(x)`: least `i` with `x ∈ Δ_i`; `None` outside `Δ_t`.
    pub fn level(&self, x: usize) -> Option<usize> {
        self.level[x]
    }

    /// Index `i` if `x` lies on `C_i`.
    pub fn cycle_of(&self, x: usize) -> Option<usize> {
        self.on_cycle[x]
    }

    pub fn disc(&self, i: usize) -> &Region {
        &self.discs[i - 1]
    }

    /// Whether edge `e` lies in the outermost disc.
    pub fn edge_inside(&self, e: usize) -> bool {
        Topo::new(&self.graph).edge_inside(&self.discs[self.t() - 1], e)
    }

    /// No terminal strictly inside `Δ_t`.
    pub fn protects(&self, p: &Pattern) -> bool {
        let topo = Topo::new(&self.graph);
        !p.terminals().iter().any(|&x| topo.strictly_inside(&self.discs[self.t() - 1], x))
    }

    /// Every `C_i` is an induced subgraph of `G ∩ Δ_t`.
    pub fn induced(&self) -> bool {
        let topo = Topo::new(&self.graph);
        let outer = &self.discs[self.t() - 1];
        self.cycles.iter().all(|c| {
            let wall = topo.cycle_edges(c).unwrap_or_default();
            (0..self.graph.edge_count()).all(|e| {
                let [u, v] = self.graph.edge(e).ends;
                wall.contains(&e) || !c.contains(&u) || !c.contains(&v) || !topo.edge_inside(outer, e)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::classify;
    use std::collections::BTreeSet;

    #[test]
    fn onion_is_a_sphere() {
        let g = onion(5, 3, &[]).unwrap();
        assert_eq!(classify(&g).unwrap(), crate::surface::SurfaceSignature::new(0, 0, 0));
        let torus = onion(16, 2, &[(0, 9, 1), (1, 8, 1), (4, 13, 1), (5, 12, 1)]).unwrap();
        assert_eq!(classify(&torus).unwrap(), crate::surface::SurfaceSignature::new(1, 0, 0));
        let pp = onion(16, 2, &[(0, 8, -1), (1, 9, -1)]).unwrap();
        assert_eq!(classify(&pp).unwrap(), crate::surface::SurfaceSignature::new(0, 1, 0));
    }

    #[test]
    fn onion_depth() {
        // terminals on the outer ring of a 3-ring onion
        let g = onion(6, 3, &[]).unwrap();
        let p = Pattern::new(vec![(13, 16)]).unwrap();
        let prot = protection_depth(&g, 0, &p).unwrap();
        assert_eq!(prot.depth, 3);
        let all: BTreeSet<usize> = prot.cycles.iter().flatten().copied().collect();
        assert_eq!(all.len(), prot.cycles.iter().map(Vec::len).sum::<usize>());
        // a vertex on ring 1 gets a face through itself plus rings 2 and 3
        assert_eq!(protection_depth(&g, 1, &p).unwrap().depth, 3);
        assert_eq!(protection_depth(&g, 13, &p), Err(Error::TerminalVertex(13)));
        let d = LeveledDisk::from_protection(g.clone(), 0, &prot).unwrap();
        assert_eq!(d.level(0), Some(1));
        assert_eq!(d.level(7), Some(2));
        assert!(d.induced());
        assert!(d.protects(&p));
        let again = LeveledDisk::new(g, 0, prot.cycles.clone()).unwrap();
        assert_eq!(again.level(15), Some(3));
    }

    #[test]
    fn tree_has_depth_zero() {
        let text = "V 0: 0.0 1.0\nV 1: 0.1\nV 2: 1.1\nE 0 0 1 1\nE 1 0 2 1\n";
        let g = EmbeddedGraph::parse(text).unwrap();
        let p = Pattern::new(vec![(1, 2)]).unwrap();
        assert_eq!(protection_depth(&g, 0, &p).unwrap().depth, 0);
    }
}
