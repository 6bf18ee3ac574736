//! Grouping of the edges outside `Δ_t` into strips (homotopy classes
//! relative to the disc) and splitting strips at terminals.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::topo::{Region, Topo};
use super::LeveledDisk;
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::surface::{classify, EmbeddedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StripKind {
    Contractible,
    NonContractible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strip {
    pub kind: StripKind,
    pub edges: Vec<usize>,
    /// For each edge, its end on the first and on the second strip end.
    pub ends: [Vec<usize>; 2],
    /// Edges pairwise disjoint and the two ends disjoint.
    pub matching: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiskWithStrips {
    #[serde(skip)]
    pub disk: LeveledDisk,
    pub cycles: Vec<Vec<usize>>,
    pub strips: Vec<Strip>,
    pub contractible_classes: usize,
    pub non_contractible_classes: usize,
    pub k: usize,
    pub genus: usize,
    pub contractible_ok: bool,
    pub non_contractible_ok: bool,
    pub splits: usize,
    pub terminals_on_corners: bool,
    pub induced: bool,
}

struct Ring<'a> {
    cycle: &'a [usize],
    pos: BTreeMap<usize, usize>,
    /// Edge from position `i` to `i + 1` inside the disc.
    step: Vec<usize>,
}

impl Ring<'_> {
    fn len(&self) -> usize {
        self.cycle.len()
    }

    /// Positions from `a` to `b` inclusive, walking forward or backward.
    fn arc(&self, a: usize, b: usize, forward: bool) -> Vec<usize> {
        let n = self.len();
        if forward {
            (0..=(b + n - a) % n).map(|k| (a + k) % n).collect()
        } else {
            (0..=(a + n - b) % n).map(|k| (a + n - k) % n).collect()
        }
    }

    fn arc_edges(&self, arc: &[usize]) -> impl Iterator<Item = usize> + '_ {
        let n = self.len();
        arc.windows(2)
            .map(move |w| if (w[0] + 1) % n == w[1] { self.step[w[0]] } else { self.step[w[1]] })
            .collect::<Vec<_>>()
            .into_iter()
    }
}

struct Ctx<'a> {
    topo: Topo<'a>,
    ring: Ring<'a>,
    outer: &'a Region,
}

impl Ctx<'_> {
    /// Union of the classes cut off by `wall` that avoid the disc, if that
    /// union is a closed disc.
    fn far_disc(&self, wall: BTreeSet<usize>) -> bool {
        let mut h = self.topo.empty();
        for s in self.topo.split_by(&wall) {
            if !s.iter().zip(self.outer).any(|(&a, &b)| a && b) {
                for (f, &x) in s.iter().enumerate() {
                    h[f] |= x;
                }
            }
        }
        self.topo.is_disc(&h)
    }

    /// Forward arc of `C_t` positions co-bounding a disc with `e` away
    /// from `Δ_t`.
    fn cap(&self, e: usize, terminals: &BTreeSet<usize>) -> Option<Vec<usize>> {
        let [u, v] = self.topo.g.edge(e).ends;
        let (a, b) = (self.ring.pos[&u], self.ring.pos[&v]);
        let mut best: Option<(usize, usize, Vec<usize>)> = None;
        for (x, y) in [(a, b), (b, a)] {
            let arc = self.ring.arc(x, y, true);
            let mut wall: BTreeSet<usize> = self.ring.arc_edges(&arc).collect();
            wall.insert(e);
            if wall.len() < 2 || !self.far_disc(wall) {
                continue;
            }
            let inner = arc[1..arc.len() - 1].iter().filter(|&&p| terminals.contains(&self.ring.cycle[p])).count();
            let key = (inner, arc.len());
            if best.as_ref().is_none_or(|b| key < (b.0, b.1)) {
                best = Some((key.0, key.1, arc));
            }
        }
        best.map(|b| b.2)
    }

    /// Whether `e` and `f` co-bound a disc with two arcs of `C_t`; returns
    /// whether the pairing swaps the ends of `f`.
    fn parallel(&self, e: usize, f: usize) -> Option<bool> {
        let [x1, y1] = self.topo.g.edge(e).ends.map(|x| self.ring.pos[&x]);
        let [x2, y2] = self.topo.g.edge(f).ends.map(|x| self.ring.pos[&x]);
        for (swap, q1, q2) in [(false, x2, y2), (true, y2, x2)] {
            for fa in [true, false] {
                for fb in [true, false] {
                    let arc_b = self.ring.arc(y1, q2, fb);
                    let arc_a = self.ring.arc(q1, x1, fa);
                    let mut verts: Vec<usize> = arc_b.clone();
                    verts.extend(&arc_a);
                    let distinct: BTreeSet<usize> = verts.iter().copied().collect();
                    if distinct.len() != verts.len() {
                        continue;
                    }
                    let mut wall: BTreeSet<usize> = self.ring.arc_edges(&arc_b).chain(self.ring.arc_edges(&arc_a)).collect();
                    wall.insert(e);
                    wall.insert(f);
                    if self.far_disc(wall) {
                        return Some(swap);
                    }
                }
            }
        }
        None
    }
}

struct Parity {
    parent: Vec<usize>,
    flip: Vec<bool>,
}

impl Parity {
    fn new(n: usize) -> Self {
        Parity { parent: (0..n).collect(), flip: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (r, p) = self.find(self.parent[x]);
        self.parent[x] = r;
        self.flip[x] ^= p;
        (r, self.flip[x])
    }

    fn union(&mut self, a: usize, b: usize, swap: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra != rb {
            self.parent[rb] = ra;
            self.flip[rb] = pa ^ pb ^ swap;
        }
    }
}

/// Builds the disc with strips for a nested cycle family around `v`
/// (vertex indices; `p` on indices as well).
pub fn decompose(g: &EmbeddedGraph, p: &Pattern, v: usize, cycles: Vec<Vec<usize>>) -> Result<DiskWithStrips> {
    let disk = LeveledDisk::new(g.clone(), v, cycles)?;
    if !disk.protects(p) {
        return Err(Error::InvalidInsulation("a terminal lies strictly inside the outer disc".into()));
    }
    if let Some(x) = (0..g.vertex_count()).find(|&x| disk.level(x).is_none()) {
        return Err(Error::InvalidInsulation(format!("vertex {x} lies outside the outer disc")));
    }
    let genus = classify(g)?.genus();
    let t = disk.t();
    let outer = disk.disc(t);
    let topo = Topo::new(g);
    let cycle = &disk.cycles[t - 1];
    let pos: BTreeMap<usize, usize> = cycle.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let n = cycle.len();
    let step: Vec<usize> = (0..n)
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % n]);
            (0..g.edge_count())
                .find(|&e| {
                    let [u, w] = g.edge(e).ends;
                    ((u, w) == (a, b) || (u, w) == (b, a)) && topo.edge_inside(outer, e)
                })
                .expect("outer cycle edge")
        })
        .collect();
    let exterior: Vec<usize> = (0..g.edge_count()).filter(|&e| !topo.edge_inside(outer, e)).collect();
    for &e in &exterior {
        let [u, w] = g.edge(e).ends;
        if u == w || !pos.contains_key(&u) || !pos.contains_key(&w) {
            return Err(Error::InvalidInsulation(format!("exterior edge {e} does not join two outer-cycle vertices")));
        }
    }
    let ctx = Ctx { topo, ring: Ring { cycle, pos, step }, outer };
    let terminals = p.terminals();

    let caps: Vec<Option<Vec<usize>>> = exterior.iter().map(|&e| ctx.cap(e, &terminals)).collect();
    let m = exterior.len();
    let mut uf = Parity::new(m);
    let contains = |big: &[usize], small: &[usize]| {
        let inside: BTreeSet<usize> = big.iter().copied().collect();
        small.iter().all(|x| inside.contains(x))
    };
    for i in 0..m {
        for j in i + 1..m {
            match (&caps[i], &caps[j]) {
                (Some(a), Some(b)) => {
                    if contains(a, b) || contains(b, a) {
                        uf.union(i, j, false);
                    }
                }
                (None, None) => {
                    if let Some(swap) = ctx.parallel(exterior[i], exterior[j]) {
                        uf.union(i, j, swap);
                    }
                }
                _ => {}
            }
        }
    }

    let mut classes: BTreeMap<usize, Vec<(usize, [usize; 2])>> = BTreeMap::new();
    for i in 0..m {
        let (r, flip) = uf.find(i);
        let e = exterior[i];
        let [u, w] = g.edge(e).ends;
        let oriented = match &caps[i] {
            Some(c) => [cycle[c[0]], cycle[*c.last().unwrap()]],
            None if flip => [w, u],
            None => [u, w],
        };
        classes.entry(r).or_default().push((e, oriented));
    }
    let mut strips: Vec<Strip> = classes
        .into_iter()
        .map(|(r, members)| {
            let kind = if caps[r].is_some() { StripKind::Contractible } else { StripKind::NonContractible };
            make_strip(kind, members)
        })
        .collect();
    let contractible_classes = strips.iter().filter(|s| s.kind == StripKind::Contractible).count();
    let non_contractible_classes = strips.len() - contractible_classes;

    let on_ring: BTreeMap<usize, usize> = terminals.iter().filter_map(|&x| ctx.ring.pos.get(&x).map(|&i| (x, i))).collect();
    let mut splits = 0;
    let mut done = Vec::new();
    while let Some(s) = strips.pop() {
        match split_once(&s, &ctx.ring, &on_ring) {
            Some((a, b)) => {
                splits += 1;
                strips.push(a);
                strips.push(b);
            }
            None => done.push(s),
        }
    }
    done.sort_by_key(|s| s.edges.clone());
    let terminals_on_corners = done.iter().all(|s| split_once(s, &ctx.ring, &on_ring).is_none());
    let k = p.k();
    Ok(DiskWithStrips {
        cycles: disk.cycles.clone(),
        induced: disk.induced(),
        disk,
        strips: done,
        contractible_classes,
        non_contractible_classes,
        k,
        genus,
        contractible_ok: contractible_classes <= 2 * k,
        non_contractible_ok: non_contractible_classes <= 3 * genus,
        splits,
        terminals_on_corners,
    })
}

fn make_strip(kind: StripKind, mut members: Vec<(usize, [usize; 2])>) -> Strip {
    members.sort();
    let edges = members.iter().map(|m| m.0).collect();
    let ends = [members.iter().map(|m| m.1[0]).collect::<Vec<_>>(), members.iter().map(|m| m.1[1]).collect()];
    let all: BTreeSet<usize> = ends.iter().flatten().copied().collect();
    let matching = all.len() == 2 * members.len();
    Strip { kind, edges, ends, matching }
}

/// Cyclic span of a set of ring positions: start and offsets from it.
fn span(positions: &[usize], n: usize) -> (usize, Vec<usize>) {
    let mut s: Vec<usize> = positions.to_vec();
    s.sort_unstable();
    s.dedup();
    let mut start = s[0];
    let mut gap = 0;
    for i in 0..s.len() {
        let next = if i + 1 < s.len() { s[i + 1] } else { s[0] + n };
        if next - s[i] > gap {
            gap = next - s[i];
            start = s[(i + 1) % s.len()];
        }
    }
    (start, positions.iter().map(|&p| (p + n - start) % n).collect())
}

/// Splits a strip at a terminal strictly inside the span of one of its ends.
fn split_once(s: &Strip, ring: &Ring, terminals: &BTreeMap<usize, usize>) -> Option<(Strip, Strip)> {
    if s.edges.len() < 2 {
        return None;
    }
    let n = ring.len();
    for end in 0..2 {
        let positions: Vec<usize> = s.ends[end].iter().map(|x| ring.pos[x]).collect();
        let (start, offs) = span(&positions, n);
        let hi = *offs.iter().max().unwrap();
        for &tp in terminals.values() {
            let o = (tp + n - start) % n;
            if o == 0 || o >= hi {
                continue;
            }
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, &e) in s.edges.iter().enumerate() {
                let member = (e, [s.ends[0][i], s.ends[1][i]]);
                if offs[i] <= o {
                    a.push(member);
                } else {
                    b.push(member);
                }
            }
            if !a.is_empty() && !b.is_empty() {
                return Some((make_strip(s.kind, a), make_strip(s.kind, b)));
            }
        }
    }
    None
}
