//! Gammoids: the rank function "maximum number of disjoint A–V2 paths",
//! matroid intersection with min-max certificates, and buffer rerouting on a
//! cylinder.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{disjoint_paths, FlowResult};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gammoid {
    pub host: Graph,
    pub ground: BTreeSet<usize>,
    pub targets: BTreeSet<usize>,
}

impl Gammoid {
    pub fn new(host: Graph, ground: BTreeSet<usize>, targets: BTreeSet<usize>) -> Result<Gammoid> {
        if let Some(&v) = ground.iter().chain(&targets).find(|&&v| !host.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(Gammoid { host, ground, targets })
    }

    fn check(&self, a: &BTreeSet<usize>) -> Result<()> {
        match a.iter().find(|v| !self.ground.contains(v)) {
            Some(&v) => Err(Error::NotInGround(v)),
            None => Ok(()),
        }
    }

    /// Maximum disjoint `a`–targets paths together with a minimum separator.
    pub fn rank_witness(&self, a: &BTreeSet<usize>) -> Result<FlowResult> {
        self.check(a)?;
        Ok(disjoint_paths(&self.host, &[(a.clone(), usize::MAX)], &self.targets, &BTreeSet::new()))
    }

    pub fn rank(&self, a: &BTreeSet<usize>) -> Result<usize> {
        Ok(self.rank_witness(a)?.paths.len())
    }

    pub fn independent(&self, a: &BTreeSet<usize>) -> Result<bool> {
        Ok(self.rank(a)? == a.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionCertificate {
    /// Maximum common independent set (in the first gammoid's ground).
    pub common: BTreeSet<usize>,
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
    /// `r0(a) + r1(copy(b))`, equal to `common.len()`.
    pub bound: usize,
    /// Separator realising `r0(a)` in the first host.
    pub t_sep: BTreeSet<usize>,
    /// Separator realising `r1(copy(b))` in the second host.
    pub u_sep: BTreeSet<usize>,
    pub target: usize,
}

impl IntersectionCertificate {
    pub fn meets_target(&self) -> bool {
        self.common.len() >= self.target
    }
}

/// Maximum common independent set of `g0` and `g1`, where `copy` maps the
/// ground of `g0` bijectively onto the ground of `g1`. Stops early once
/// `target` is reached; otherwise the returned partition certifies
/// optimality.
pub fn matroid_intersection(
    g0: &Gammoid,
    g1: &Gammoid,
    copy: &BTreeMap<usize, usize>,
    target: usize,
) -> Result<IntersectionCertificate> {
    let keys: BTreeSet<usize> = copy.keys().copied().collect();
    let vals: BTreeSet<usize> = copy.values().copied().collect();
    if keys != g0.ground {
        return Err(Error::GroundMismatch("identification does not cover the first ground set".into()));
    }
    if vals != g1.ground || vals.len() != keys.len() {
        return Err(Error::GroundMismatch("identification is not a bijection onto the second ground set".into()));
    }
    let to1 = |s: &BTreeSet<usize>| -> BTreeSet<usize> { s.iter().map(|v| copy[v]).collect() };
    let ind0 = |s: &BTreeSet<usize>| g0.independent(s);
    let ind1 = |s: &BTreeSet<usize>| g1.independent(&to1(s));
    let ground: Vec<usize> = g0.ground.iter().copied().collect();
    let mut cur: BTreeSet<usize> = BTreeSet::new();
    loop {
        if cur.len() >= target {
            break;
        }
        let outside: Vec<usize> = ground.iter().copied().filter(|x| !cur.contains(x)).collect();
        let inside: Vec<usize> = cur.iter().copied().collect();
        let with = |x: usize| {
            let mut s = cur.clone();
            s.insert(x);
            s
        };
        let swap = |y: usize, x: usize| {
            let mut s = cur.clone();
            s.remove(&y);
            s.insert(x);
            s
        };
        let mut x1 = BTreeSet::new();
        let mut x2 = BTreeSet::new();
        for &x in &outside {
            if ind0(&with(x))? {
                x1.insert(x);
            }
            if ind1(&with(x))? {
                x2.insert(x);
            }
        }
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &y in &inside {
            for &x in &outside {
                let s = swap(y, x);
                if ind0(&s)? {
                    adj.entry(y).or_default().push(x);
                }
                if ind1(&s)? {
                    adj.entry(x).or_default().push(y);
                }
            }
        }
        // shortest x1 -> x2 path
        let mut prev: BTreeMap<usize, Option<usize>> = x1.iter().map(|&x| (x, None)).collect();
        let mut queue: VecDeque<usize> = x1.iter().copied().collect();
        let mut end = None;
        while let Some(u) = queue.pop_front() {
            if x2.contains(&u) {
                end = Some(u);
                break;
            }
            for &w in adj.get(&u).into_iter().flatten() {
                if !prev.contains_key(&w) {
                    prev.insert(w, Some(u));
                    queue.push_back(w);
                }
            }
        }
        match end {
            Some(mut u) => loop {
                if !cur.remove(&u) {
                    cur.insert(u);
                }
                match prev[&u] {
                    Some(p) => u = p,
                    None => break,
                }
            },
            None => {
                let reach: BTreeSet<usize> = prev.keys().copied().collect();
                return certificate(g0, g1, copy, cur, &ground, &reach, target);
            }
        }
    }
    // target reached: still report a partition, the trivial one
    let all: BTreeSet<usize> = ground.iter().copied().collect();
    let w0 = g0.rank_witness(&all)?;
    Ok(IntersectionCertificate {
        bound: w0.paths.len(),
        common: cur,
        a: all,
        b: BTreeSet::new(),
        t_sep: w0.separator,
        u_sep: BTreeSet::new(),
        target,
    })
}

fn certificate(
    g0: &Gammoid,
    g1: &Gammoid,
    copy: &BTreeMap<usize, usize>,
    common: BTreeSet<usize>,
    ground: &[usize],
    reach: &BTreeSet<usize>,
    target: usize,
) -> Result<IntersectionCertificate> {
    let rest: BTreeSet<usize> = ground.iter().copied().filter(|x| !reach.contains(x)).collect();
    for (a, b) in [(rest.clone(), reach.clone()), (reach.clone(), rest)] {
        let w0 = g0.rank_witness(&a)?;
        let copy_b: BTreeSet<usize> = b.iter().map(|v| copy[v]).collect();
        let w1 = g1.rank_witness(&copy_b)?;
        let bound = w0.paths.len() + w1.paths.len();
        if bound == common.len() {
            return Ok(IntersectionCertificate { common, a, b, bound, t_sep: w0.separator, u_sep: w1.separator, target });
        }
    }
    Err(Error::GroundMismatch("no tight partition found; rank oracle is not a matroid".into()))
}

/// A graph embedded in a cylinder: `outer` lists the vertices of the first
/// hole in clockwise order, `inner` the vertices of the second hole.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    pub graph: Graph,
    pub outer: Vec<usize>,
    pub inner: BTreeSet<usize>,
}

impl Cylinder {
    pub fn gammoid(&self) -> Result<Gammoid> {
        Gammoid::new(self.graph.clone(), self.outer.iter().copied().collect(), self.inner.clone())
    }
}

/// Blocks `(A_i, B_i)` in clockwise order around the outer hole.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BufferPartition {
    pub blocks: Vec<(Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BufferOutcome {
    /// One family per block, each path running from `A_i` to the inner hole.
    pub families: Vec<Vec<Vec<usize>>>,
    /// Number of working paths not yet confined to their guards, recorded
    /// before the first and after every reroute.
    pub unconfined: Vec<usize>,
    pub reroutes: usize,
}

impl BufferOutcome {
    pub fn paths(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.families.iter().flatten()
    }
}

fn validate_partition(cyl: &Cylinder, part: &BufferPartition) -> Result<()> {
    let seq: Vec<usize> = part.blocks.iter().flat_map(|(a, b)| a.iter().chain(b).copied()).collect();
    let m = cyl.outer.len();
    if seq.len() != m {
        return Err(Error::InvalidPartition(format!("blocks cover {} of {} boundary vertices", seq.len(), m)));
    }
    if m == 0 {
        return Ok(());
    }
    let start = cyl
        .outer
        .iter()
        .position(|&v| v == seq[0])
        .ok_or_else(|| Error::InvalidPartition(format!("{} is not on the outer hole", seq[0])))?;
    for (i, &v) in seq.iter().enumerate() {
        if cyl.outer[(start + i) % m] != v {
            return Err(Error::InvalidPartition("blocks are not cyclically contiguous".into()));
        }
    }
    Ok(())
}

/// The walk `P x Q` where `x` is the first vertex of `p` on `q`.
fn product(p: &[usize], q: &[usize]) -> Option<Vec<usize>> {
    let (ip, x) = p.iter().enumerate().find(|(_, v)| q.contains(v))?;
    let iq = q.iter().position(|v| v == x).unwrap();
    let mut out = p[..ip].to_vec();
    out.extend_from_slice(&q[iq..]);
    Some(out)
}

fn meets(p: &[usize], q: &[usize]) -> bool {
    p.iter().any(|v| q.contains(v))
}

/// Routes `|∪A_j|` disjoint paths from `∪A_j` to the inner hole. Starts
/// from the given families (or flow-computed ones), then confines each
/// block's family between its guard paths taken from a buffer family.
pub fn buffer_route(
    cyl: &Cylinder,
    part: &BufferPartition,
    initial: Option<Vec<Vec<Vec<usize>>>>,
) -> Result<BufferOutcome> {
    validate_partition(cyl, part)?;
    let gm = cyl.gammoid()?;
    let n = part.blocks.len();
    let total: usize = part.blocks.iter().map(|(a, _)| a.len()).sum();
    for (i, (a, b)) in part.blocks.iter().enumerate() {
        let a_set: BTreeSet<usize> = a.iter().copied().collect();
        if !gm.independent(&a_set)? {
            return Err(Error::BufferHypothesis { block: i + 1, reason: format!("A_{} is not independent", i + 1) });
        }
        let rb = gm.rank(&b.iter().copied().collect())?;
        if rb < 2 * total {
            return Err(Error::BufferHypothesis {
                block: i + 1,
                reason: format!("rank(B_{}) = {rb} < {}", i + 1, 2 * total),
            });
        }
    }
    let mut families: Vec<Vec<Vec<usize>>> = match initial {
        Some(f) => {
            check_initial(cyl, part, &f)?;
            f
        }
        None => part
            .blocks
            .iter()
            .map(|(a, _)| {
                let r = disjoint_paths(&cyl.graph, &[(a.iter().copied().collect(), usize::MAX)], &cyl.inner, &BTreeSet::new());
                order_by(&r.paths, a)
            })
            .collect(),
    };
    let all_disjoint = |fam: &Vec<Vec<Vec<usize>>>| {
        let mut seen = BTreeSet::new();
        fam.iter().flatten().flatten().all(|&v| seen.insert(v))
    };
    if all_disjoint(&families) {
        return Ok(BufferOutcome { families, unconfined: vec![0], reroutes: 0 });
    }

    // buffer family with |A_i| + |A_{i+1}| paths from each B_i
    let groups: Vec<(BTreeSet<usize>, usize)> = (0..n)
        .map(|i| (part.blocks[i].1.iter().copied().collect(), part.blocks[i].0.len() + part.blocks[(i + 1) % n].0.len()))
        .collect();
    let buf = disjoint_paths(&cyl.graph, &groups, &cyl.inner, &BTreeSet::new());
    if buf.paths.len() != 2 * total {
        return Err(Error::Reroute(format!("buffer family has {} paths, need {}", buf.paths.len(), 2 * total)));
    }
    let b_fam: Vec<Vec<Vec<usize>>> = part.blocks.iter().map(|(_, b)| order_by(&buf.paths, b)).collect();

    let mut unconfined = Vec::new();
    let mut reroutes = 0;
    // per block: guards and the working interval
    struct Work {
        lo: usize,
        hi: usize,
        q: usize,
        r: usize,
    }
    let mut work: Vec<Option<Work>> = (0..n)
        .map(|i| {
            let m = part.blocks[i].0.len();
            (m > 0).then_some(Work { lo: 0, hi: m, q: m, r: m })
        })
        .collect();
    let guard_q = |i: usize, q: usize| -> &Vec<usize> {
        let prev = &b_fam[(i + n - 1) % n];
        &prev[prev.len() - q]
    };
    let guard_r = |i: usize, r: usize| -> &Vec<usize> { &b_fam[i][r - 1] };
    let count = |families: &Vec<Vec<Vec<usize>>>, work: &Vec<Option<Work>>| -> usize {
        let mut c = 0;
        for (i, w) in work.iter().enumerate() {
            if let Some(w) = w {
                for p in &families[i][w.lo..w.hi] {
                    if meets(p, guard_q(i, w.q)) || meets(p, guard_r(i, w.r)) {
                        c += 1;
                    }
                }
            }
        }
        c
    };
    unconfined.push(count(&families, &work));
    for i in 0..n {
        loop {
            let Some(w) = work[i].as_mut() else { break };
            if w.lo >= w.hi {
                break;
            }
            let (q, r) = (guard_q(i, w.q), guard_r(i, w.r));
            let fam = &mut families[i];
            if fam[w.lo..w.hi].iter().all(|p| !meets(p, q) && !meets(p, r)) {
                break;
            }
            let first = &fam[w.lo];
            let last = &fam[w.hi - 1];
            if let Some(pq) = product(first, q).filter(|pq| !meets(pq, r)) {
                fam[w.lo] = pq;
                w.lo += 1;
                w.q -= 1;
            } else if let Some(pr) = product(last, r).filter(|pr| !meets(pr, q)) {
                fam[w.hi - 1] = pr;
                w.hi -= 1;
                w.r -= 1;
            } else {
                return Err(Error::Reroute(format!("neither guard admits a reroute in block {}", i + 1)));
            }
            reroutes += 1;
            unconfined.push(count(&families, &work));
        }
    }
    if !all_disjoint(&families) {
        return Err(Error::Reroute("rerouted families still intersect".into()));
    }
    Ok(BufferOutcome { families, unconfined, reroutes })
}

/// Orders `paths` by the position of their first vertex in `order`, keeping
/// only those that start there.
fn order_by(paths: &[Vec<usize>], order: &[usize]) -> Vec<Vec<usize>> {
    let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out: Vec<(usize, Vec<usize>)> =
        paths.iter().filter_map(|p| pos.get(&p[0]).map(|&i| (i, p.clone()))).collect();
    out.sort();
    out.into_iter().map(|(_, p)| p).collect()
}

fn check_initial(cyl: &Cylinder, part: &BufferPartition, f: &[Vec<Vec<usize>>]) -> Result<()> {
    if f.len() != part.blocks.len() {
        return Err(Error::InvalidLinkage("one family per block expected".into()));
    }
    for (fam, (a, _)) in f.iter().zip(&part.blocks) {
        let starts: BTreeSet<usize> = fam.iter().filter_map(|p| p.first().copied()).collect();
        if starts != a.iter().copied().collect() || fam.len() != a.len() {
            return Err(Error::InvalidLinkage("family does not start at its block".into()));
        }
        let mut seen = BTreeSet::new();
        for p in fam {
            if !cyl.inner.contains(p.last().unwrap())
                || p.windows(2).any(|w| !cyl.graph.has_edge(w[0], w[1]))
                || !p.iter().all(|&v| seen.insert(v))
            {
                return Err(Error::InvalidLinkage("family paths must be disjoint paths to the inner hole".into()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylgrid::CylGrid;

    fn grid_gammoid(m: usize, n: usize) -> Gammoid {
        let g = CylGrid::build(m, n).unwrap();
        Gammoid::new(g.graph().clone(), g.ring(0).into_iter().collect(), g.ring(n - 1).into_iter().collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        let gm = grid_gammoid(4, 3);
        assert_eq!(gm.rank(&BTreeSet::new()).unwrap(), 0);
        assert_eq!(gm.rank(&BTreeSet::from([0, 2])).unwrap(), 2);
        assert_eq!(gm.rank(&BTreeSet::from([0, 9])), Err(Error::NotInGround(9)));
        // all routes pass through the cut vertex 5
        let host = Graph::from_edges([(1, 5), (2, 5), (3, 5), (5, 6), (6, 7), (6, 8)]);
        let gm = Gammoid::new(host, BTreeSet::from([1, 2, 3]), BTreeSet::from([7, 8])).unwrap();
        let w = gm.rank_witness(&BTreeSet::from([1, 2, 3])).unwrap();
        assert_eq!(w.paths.len(), 1);
        assert!(w.separator == BTreeSet::from([5]) || w.separator == BTreeSet::from([6]));
    }

    #[test]
    fn identical_matroids() {
        let gm = grid_gammoid(5, 2);
        let copy: BTreeMap<usize, usize> = gm.ground.iter().map(|&v| (v, v)).collect();
        let c = matroid_intersection(&gm, &gm, &copy, usize::MAX).unwrap();
        assert_eq!(c.common.len(), 5);
        assert_eq!(c.bound, 5);
    }

    #[test]
    fn rank_one_pair() {
        // both gammoids have rank one; ground {1, 2}
        let h0 = Graph::from_edges([(1, 9), (2, 9)]);
        let h1 = Graph::from_edges([(1, 9), (2, 9)]);
        let g0 = Gammoid::new(h0, BTreeSet::from([1, 2]), BTreeSet::from([9])).unwrap();
        let g1 = Gammoid::new(h1, BTreeSet::from([1, 2]), BTreeSet::from([9])).unwrap();
        let copy = BTreeMap::from([(1, 1), (2, 2)]);
        let c = matroid_intersection(&g0, &g1, &copy, 3).unwrap();
        assert_eq!(c.common.len(), 1);
        assert_eq!(c.bound, 1);
        assert!(!c.meets_target());
    }

    #[test]
    fn single_block_buffer() {
        let g = CylGrid::build(8, 4).unwrap();
        let cyl = Cylinder { graph: g.graph().clone(), outer: g.ring(0), inner: g.ring(3).into_iter().collect() };
        let part = BufferPartition { blocks: vec![(vec![0], (1..8).collect())] };
        let out = buffer_route(&cyl, &part, None).unwrap();
        assert_eq!(out.paths().count(), 1);
        let bad = BufferPartition { blocks: vec![(vec![0, 1, 2], (3..8).collect())] };
        assert!(matches!(buffer_route(&cyl, &bad, None), Err(Error::BufferHypothesis { block: 1, .. })));
    }
}
