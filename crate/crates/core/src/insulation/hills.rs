//! Hills of a path family in a leveled disc, their elimination by
//! rerouting through caps, and decreasing path families.

use std::collections::BTreeSet;

use serde::Serialize;

use super::topo::{subset, Topo};
use super::LeveledDisk;
use crate::error::{Error, Result};
use crate::flow::disjoint_paths;
use crate::graph::Graph;
use crate::pattern::{verify, Linkage, Pattern};

/// A subpath `paths[path][start..=end]` whose ends lie on `C_σ` and whose
/// internal vertices all have level above `σ`; `cap` is the subpath of
/// `C_σ` from the start vertex to the end vertex co-bounding its disc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hill {
    pub path: usize,
    pub start: usize,
    pub end: usize,
    pub sea_level: usize,
    pub cap: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HillStep {
    pub path: usize,
    pub sea_level: usize,
    pub removed: Vec<usize>,
    pub cap: Vec<usize>,
    pub phi_before: usize,
    pub phi_after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub linkage: Linkage,
    pub steps: Vec<HillStep>,
}

/// `Φ = Σ ℓ(x)` over the vertices used; vertices outside `Δ_t` count `t+1`.
pub fn phi(d: &LeveledDisk, paths: &[Vec<usize>]) -> usize {
    paths.iter().flatten().map(|&x| d.level(x).unwrap_or(d.t() + 1)).sum()
}

fn cap_of(d: &LeveledDisk, topo: &Topo, seg: &[usize], sigma: usize) -> Option<Vec<usize>> {
    let c = &d.cycles[sigma - 1];
    let n = c.len();
    let (a, b) = (seg[0], *seg.last().unwrap());
    let ia = c.iter().position(|&x| x == a)?;
    let ib = c.iter().position(|&x| x == b)?;
    let fwd: Vec<usize> = (0..=(ib + n - ia) % n).map(|k| c[(ia + k) % n]).collect();
    let bwd: Vec<usize> = (0..=(ia + n - ib) % n).map(|k| c[(ia + n - k) % n]).collect();
    let inner = d.disc(sigma);
    let outer = d.disc(d.t());
    let mut best: Option<Vec<usize>> = None;
    for k in [fwd, bwd] {
        if seg.len() == 2 && k.len() == 2 {
            continue;
        }
        let mut z = seg.to_vec();
        z.extend(k.iter().rev().skip(1).take(k.len().saturating_sub(2)));
        let Ok(sides) = topo.sides_of_cycle(&z) else { continue };
        let mut h = topo.empty();
        for s in sides.iter().filter(|s| !s.iter().zip(inner).any(|(&x, &y)| x && y)) {
            for (f, &x) in s.iter().enumerate() {
                h[f] |= x;
            }
        }
        if subset(&h, outer) && topo.is_disc(&h) && best.as_ref().is_none_or(|b| k.len() < b.len()) {
            best = Some(k);
        }
    }
    best
}

fn hills_with(d: &LeveledDisk, topo: &Topo, paths: &[Vec<usize>]) -> Vec<Hill> {
    let outer = d.disc(d.t());
    let on_cycle_edge = |sigma: usize, u: usize, v: usize| {
        let c = &d.cycles[sigma - 1];
        let n = c.len();
        (0..n).any(|i| (c[i] == u && c[(i + 1) % n] == v) || (c[i] == v && c[(i + 1) % n] == u))
    };
    let edge_in = |u: usize, v: usize| d.graph.edge_between(u, v).is_some_and(|e| topo.edge_inside(outer, e));
    let mut out = Vec::new();
    for (pi, p) in paths.iter().enumerate() {
        for r in 0..p.len() {
            let Some(sigma) = d.cycle_of(p[r]) else { continue };
            for s in r + 1..p.len() {
                if !edge_in(p[s - 1], p[s]) {
                    break;
                }
                match d.level(p[s]) {
                    Some(l) if l > sigma => continue,
                    Some(l) if l == sigma && d.cycle_of(p[s]) == Some(sigma) => {
                        if s > r + 1 || !on_cycle_edge(sigma, p[r], p[s]) {
                            if let Some(cap) = cap_of(d, topo, &p[r..=s], sigma) {
                                out.push(Hill { path: pi, start: r, end: s, sea_level: sigma, cap });
                            }
                        }
                        break;
                    }
                    _ => break,
                }
            }
        }
    }
    out
}

pub fn find_hills(d: &LeveledDisk, paths: &[Vec<usize>]) -> Vec<Hill> {
    hills_with(d, &Topo::new(&d.graph), paths)
}

/// Repeatedly reroutes a hill of least sea level (and, among those, of
/// shortest cap) through its cap until none remains.
fn flatten(d: &LeveledDisk, mut paths: Vec<Vec<usize>>) -> Result<(Vec<Vec<usize>>, Vec<HillStep>)> {
    let topo = Topo::new(&d.graph);
    let n = d.graph.vertex_count();
    let limit = 4 * n * n + 16;
    let mut steps = Vec::new();
    loop {
        let mut hills = hills_with(d, &topo, &paths);
        if hills.is_empty() {
            return Ok((paths, steps));
        }
        if steps.len() >= limit {
            return Err(Error::Reroute("hill elimination did not terminate".into()));
        }
        hills.sort_by_key(|h| (h.sea_level, h.cap.len(), h.path, h.start));
        let used: BTreeSet<usize> = paths.iter().flatten().copied().collect();
        let h = hills
            .into_iter()
            .find(|h| h.cap[1..h.cap.len() - 1].iter().all(|x| !used.contains(x)))
            .ok_or_else(|| Error::Reroute("every hill cap is blocked".into()))?;
        let before = phi(d, &paths);
        let p = &paths[h.path];
        let mut q = p[..h.start].to_vec();
        q.extend(&h.cap);
        q.extend(&p[h.end + 1..]);
        let removed = p[h.start..=h.end].to_vec();
        paths[h.path] = q;
        steps.push(HillStep {
            path: h.path,
            sea_level: h.sea_level,
            removed,
            cap: h.cap,
            phi_before: before,
            phi_after: phi(d, &paths),
        });
    }
}

/// Removes every hill from a valid linkage (indices of `d.graph`).
pub fn eliminate_hills(d: &LeveledDisk, p: &Pattern, l: &Linkage) -> Result<Elimination> {
    let host = d.graph.to_index_graph();
    if !verify(&host, p, l) {
        return Err(Error::InvalidLinkage("input is not a linkage of the pattern".into()));
    }
    let (paths, steps) = flatten(d, l.paths.clone())?;
    let linkage = Linkage { paths };
    if !verify(&host, p, &linkage) {
        return Err(Error::Reroute("rerouting broke the linkage".into()));
    }
    Ok(Elimination { linkage, steps })
}

/// `|a|` disjoint paths inside `Δ_t` from `a ⊆ C_t` to `C_i` whose levels
/// never increase.
pub fn make_decreasing(d: &LeveledDisk, a: &[usize], i: usize) -> Result<Vec<Vec<usize>>> {
    let t = d.t();
    if i == 0 || i > t {
        return Err(Error::InvalidInsulation(format!("level {i} outside 1..={t}")));
    }
    if let Some(&x) = a.iter().find(|&&x| d.cycle_of(x) != Some(t)) {
        return Err(Error::InvalidInsulation(format!("{x} is not on the outer cycle")));
    }
    let topo = Topo::new(&d.graph);
    let outer = d.disc(t);
    let mut host = Graph::new();
    for x in 0..d.graph.vertex_count() {
        if d.level(x).is_some() {
            host.add_vertex(x);
        }
    }
    for e in 0..d.graph.edge_count() {
        if topo.edge_inside(outer, e) {
            let [u, v] = d.graph.edge(e).ends;
            host.add_edge(u, v);
        }
    }
    let sinks: BTreeSet<usize> = d.cycles[i - 1].iter().copied().collect();
    let src: BTreeSet<usize> = a.iter().copied().collect();
    let flow = disjoint_paths(&host, &[(src.clone(), src.len())], &sinks, &BTreeSet::new());
    if flow.paths.len() < src.len() {
        return Err(Error::RankDeficient { need: src.len(), have: flow.paths.len() });
    }
    let trimmed: Vec<Vec<usize>> = a
        .iter()
        .map(|&x| {
            let p = flow.paths.iter().find(|p| p[0] == x).unwrap();
            let cut = p.iter().position(|v| sinks.contains(v)).unwrap();
            p[..=cut].to_vec()
        })
        .collect();
    let (paths, _) = flatten(d, trimmed)?;
    for p in &paths {
        if p.windows(2).any(|w| d.level(w[0]) < d.level(w[1])) {
            return Err(Error::Reroute("hill-free family is not monotone".into()));
        }
    }
    Ok(paths)
}
