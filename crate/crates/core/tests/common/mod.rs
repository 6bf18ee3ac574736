//! Independent oracles and instance generators shared by the integration
//! suites. Nothing here calls the flow, gammoid or insulation code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use linkage_lab::gammoid::{BufferPartition, Cylinder};
use linkage_lab::insulation::onion;
use linkage_lab::pattern::{Linkage, Pattern};
use linkage_lab::surface::{flag, EmbeddedGraph};
use linkage_lab::Graph;
use rand::Rng;

// ---------- rank by exhaustive vertex cuts ----------

/// Host reduced to bitmasks over at most 24 vertices.
pub struct CutOracle {
    verts: Vec<usize>,
    adj: Vec<u32>,
    targets: u32,
    /// For every cut `X`, the vertices outside `X` that reach a target
    /// avoiding `X`.
    reach: Vec<u32>,
}

impl CutOracle {
    pub fn new(g: &Graph, targets: &BTreeSet<usize>) -> CutOracle {
        let verts: Vec<usize> = g.vertices().collect();
        assert!(verts.len() <= 24, "cut oracle limited to 24 vertices");
        let ix: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<u32> = verts.iter().map(|&v| g.neighbors(v).fold(0, |m, u| m | 1 << ix[&u])).collect();
        let tmask = targets.iter().filter_map(|t| ix.get(t)).fold(0u32, |m, &i| m | 1 << i);
        let n = verts.len();
        let reach = (0u32..1 << n)
            .map(|x| {
                let allowed = !x & ((1u64 << n) - 1) as u32;
                let mut seen = tmask & allowed;
                let mut frontier = seen;
                while frontier != 0 {
                    let mut next = 0;
                    let mut f = frontier;
                    while f != 0 {
                        let i = f.trailing_zeros() as usize;
                        f &= f - 1;
                        next |= adj[i];
                    }
                    next &= allowed & !seen;
                    seen |= next;
                    frontier = next;
                }
                seen
            })
            .collect();
        CutOracle { verts, adj, targets: tmask, reach }
    }

    pub fn mask(&self, a: &BTreeSet<usize>) -> u32 {
        a.iter().map(|v| 1u32 << self.verts.iter().position(|x| x == v).expect("vertex in host")).fold(0, |m, b| m | b)
    }

    /// Menger: the least number of vertices meeting every `a`–target path.
    pub fn rank(&self, a: &BTreeSet<usize>) -> usize {
        let am = self.mask(a);
        self.reach
            .iter()
            .enumerate()
            .filter(|(_, &r)| r & am == 0)
            .map(|(x, _)| (x as u32).count_ones() as usize)
            .min()
            .unwrap()
    }
}

pub fn subsets(ground: &[usize]) -> Vec<BTreeSet<usize>> {
    (0u32..1 << ground.len())
        .map(|m| ground.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &v)| v).collect())
        .collect()
}

/// `min_A r0(A) + r1(copy(ground − A))`.
pub fn min_partition(o0: &CutOracle, o1: &CutOracle, ground: &[usize], copy: &BTreeMap<usize, usize>) -> usize {
    subsets(ground)
        .into_iter()
        .map(|a| {
            let rest: BTreeSet<usize> = ground.iter().filter(|v| !a.contains(v)).map(|v| copy[v]).collect();
            o0.rank(&a) + o1.rank(&rest)
        })
        .min()
        .unwrap()
}

// ---------- cylinders ----------

/// `m × n` cylindrical grid (ring 0 outer) with each square given a random
/// diagonal with probability `diag`, then each edge dropped with
/// probability `drop`.
pub fn random_cylinder<R: Rng>(rng: &mut R, m: usize, n: usize, diag: f64, drop: f64) -> Cylinder {
    let id = |r: usize, j: usize| r * m + j % m;
    let mut edges = Vec::new();
    for r in 0..n {
        for j in 0..m {
            edges.push((id(r, j), id(r, j + 1)));
            if r + 1 < n {
                edges.push((id(r, j), id(r + 1, j)));
                if rng.gen_bool(diag) {
                    if rng.gen_bool(0.5) {
                        edges.push((id(r, j), id(r + 1, j + 1)));
                    } else {
                        edges.push((id(r, j + 1), id(r + 1, j)));
                    }
                }
            }
        }
    }
    let mut g = Graph::new();
    for v in 0..m * n {
        g.add_vertex(v);
    }
    for (u, v) in edges {
        if !rng.gen_bool(drop) {
            g.add_edge(u, v);
        }
    }
    Cylinder { graph: g, outer: (0..m).collect(), inner: (0..m).map(|j| id(n - 1, j)).collect() }
}

/// Fully triangulated cylinder: every square gets the diagonal
/// `(r, j) – (r+1, j+1)`, so staircase paths exist.
pub fn staircase_cylinder(m: usize, n: usize) -> Cylinder {
    let id = |r: usize, j: usize| r * m + j % m;
    let mut g = Graph::new();
    for r in 0..n {
        for j in 0..m {
            g.add_edge(id(r, j), id(r, j + 1));
            if r + 1 < n {
                g.add_edge(id(r, j), id(r + 1, j));
                g.add_edge(id(r, j), id(r + 1, j + 1));
            }
        }
    }
    Cylinder { graph: g, outer: (0..m).collect(), inner: (0..m).map(|j| id(n - 1, j)).collect() }
}

pub fn staircase(m: usize, n: usize, start: usize) -> Vec<usize> {
    (0..n).map(|r| r * m + (start + r) % m).collect()
}

/// Down one ring, `back` steps backwards along ring 1, then straight down.
pub fn backtrack(m: usize, n: usize, start: usize, back: usize) -> Vec<usize> {
    let col = |d: usize| (start + m - d % m) % m;
    let mut p = vec![start];
    p.extend((0..=back).map(|d| m + col(d)));
    p.extend((2..n).map(|r| r * m + col(back)));
    p
}

/// Blocks with `|B_i| ≥ 2 Σ|A_j|` on a staircase cylinder, with initial
/// families from flow, staircases, or backtracking paths that invade the
/// previous block.
pub fn buffer_instance<R: Rng>(rng: &mut R) -> (Cylinder, BufferPartition, Option<Vec<Vec<Vec<usize>>>>) {
    let blocks = rng.gen_range(1..=3);
    let mut a_sizes: Vec<usize> = (0..blocks).map(|_| rng.gen_range(0..=2)).collect();
    if a_sizes.iter().all(|&s| s == 0) {
        a_sizes[0] = 1;
    }
    let total: usize = a_sizes.iter().sum();
    let b_sizes: Vec<usize> = (0..blocks).map(|_| 2 * total + rng.gen_range(0..=2)).collect();
    let m: usize = a_sizes.iter().sum::<usize>() + b_sizes.iter().sum::<usize>();
    let n = rng.gen_range(2..=4);
    let cyl = staircase_cylinder(m, n);
    let mut next = 0;
    let mut part = Vec::new();
    for i in 0..blocks {
        let a: Vec<usize> = (next..next + a_sizes[i]).collect();
        next += a_sizes[i];
        let b: Vec<usize> = (next..next + b_sizes[i]).collect();
        next += b_sizes[i];
        part.push((a, b));
    }
    let initial = match rng.gen_range(0..3) {
        0 => None,
        1 => Some(part.iter().map(|(a, _)| a.iter().map(|&s| staircase(m, n, s)).collect()).collect()),
        _ => Some(
            part.iter()
                .enumerate()
                .map(|(i, (a, _))| {
                    let prev = &part[(i + blocks - 1) % blocks];
                    let reach = prev.1.len() + rng.gen_range(1..=prev.0.len() + 1);
                    a.iter()
                        .enumerate()
                        .map(|(j, &s)| if j == 0 && n >= 3 && m > n + 2 { backtrack(m, n, s, reach.min(m - n - 2)) } else { staircase(m, n, s) })
                        .collect()
                })
                .collect(),
        ),
    };
    (cyl, BufferPartition { blocks: part }, initial)
}

// ---------- linkages ----------

/// Disjoint paths along edges of `g` realising `p` in order.
pub fn is_linkage(g: &Graph, p: &Pattern, l: &Linkage) -> bool {
    if l.paths.len() != p.pairs.len() {
        return false;
    }
    let mut used = BTreeSet::new();
    for (path, &(s, t)) in l.paths.iter().zip(&p.pairs) {
        if path.is_empty() {
            return false;
        }
        let (a, b) = (path[0], *path.last().unwrap());
        if !((a == s && b == t) || (a == t && b == s)) {
            return false;
        }
        if s == t && path.len() != 1 {
            return false;
        }
        if path.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
            return false;
        }
        if path.iter().any(|&v| !g.contains(v) || !used.insert(v)) {
            return false;
        }
    }
    true
}

/// Two pairs cross iff exactly one end of one lies strictly between the
/// ends of the other along `ring`. Singletons never cross.
pub fn crosses(p: &Pattern, ring: &[usize]) -> bool {
    let pos = |v: usize| ring.iter().position(|&x| x == v).unwrap();
    let arcs: Vec<(usize, usize)> = p
        .pairs
        .iter()
        .filter(|(s, t)| s != t)
        .map(|&(s, t)| (pos(s).min(pos(t)), pos(s).max(pos(t))))
        .collect();
    arcs.iter().any(|&(a, b)| {
        arcs.iter().any(|&(c, d)| {
            let between = |x: usize| a < x && x < b;
            between(c) != between(d)
        })
    })
}

/// Every pattern of exactly `k` disjoint terminal sets (pairs or
/// singletons) on `ring`, each set listed once.
pub fn boundary_patterns(ring: &[usize], k: usize) -> Vec<Pattern> {
    fn go(ring: &[usize], k: usize, from: usize, used: &mut Vec<bool>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Pattern>) {
        if cur.len() == k {
            out.push(Pattern::new(cur.clone()).unwrap());
            return;
        }
        for i in from..ring.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            cur.push((ring[i], ring[i]));
            go(ring, k, i + 1, used, cur, out);
            cur.pop();
            for j in i + 1..ring.len() {
                if !used[j] {
                    used[j] = true;
                    cur.push((ring[i], ring[j]));
                    go(ring, k, i + 1, used, cur, out);
                    cur.pop();
                    used[j] = false;
                }
            }
            used[i] = false;
        }
    }
    let mut out = Vec::new();
    go(ring, k, 0, &mut vec![false; ring.len()], &mut Vec::new(), &mut out);
    out
}

// ---------- onion instances with bumps ----------

pub fn onion_id(m: usize, r: usize, j: usize) -> usize {
    1 + (r - 1) * m + j % m
}

/// Ring of a vertex in an onion; the center counts as ring 1.
pub fn onion_level(m: usize, x: usize) -> usize {
    if x == 0 {
        1
    } else {
        (x - 1) / m + 1
    }
}

pub struct BumpInstance {
    pub m: usize,
    pub t: usize,
    pub graph: EmbeddedGraph,
    pub pattern: Pattern,
    pub linkage: Linkage,
    pub bumps: usize,
}

/// Horizontal run at `ring` from column `a` to `b` with bumps inserted.
#[allow(clippy::too_many_arguments)]
fn run_with_bumps<R: Rng>(
    rng: &mut R,
    m: usize,
    ring: usize,
    a: usize,
    b: usize,
    max_up: usize,
    margin: usize,
    bumps: &mut usize,
) -> Vec<usize> {
    let mut out = Vec::new();
    let mut j = a;
    while j <= b {
        let room = (b - j).saturating_sub(margin);
        if max_up > 0 && j >= a + margin && room >= 2 && rng.gen_bool(0.35) {
            let w = rng.gen_range(2..=room.min(6));
            let h = rng.gen_range(1..=max_up);
            out.push(onion_id(m, ring, j));
            for r in ring + 1..=ring + h {
                out.push(onion_id(m, r, j));
            }
            let top = run_with_bumps(rng, m, ring + h, j + 1, j + w - 1, max_up - h, 0, bumps);
            out.extend(top);
            for r in (ring + 1..=ring + h).rev() {
                out.push(onion_id(m, r, j + w));
            }
            out.push(onion_id(m, ring, j + w));
            *bumps += 1;
            j += w + 1;
            continue;
        }
        out.push(onion_id(m, ring, j));
        j += 1;
    }
    out
}

/// Nested pairs on the outer ring of an onion; pair `i` dips to ring
/// `1 + 3i` and carries random (possibly nested) bumps of height ≤ 2.
pub fn bump_instance<R: Rng>(rng: &mut R) -> BumpInstance {
    let k = rng.gen_range(1..=3);
    let t = 3 * k + 1;
    let m = 4 * k + rng.gen_range(8..=14);
    let graph = onion(m, t, &[]).unwrap();
    let mut paths = Vec::new();
    let mut pairs = Vec::new();
    let mut bumps = 0;
    for i in 0..k {
        let (s, e) = (2 * i, m - 1 - 2 * i);
        let sigma = 1 + 3 * i;
        let mut p: Vec<usize> = (sigma + 1..=t).rev().map(|r| onion_id(m, r, s)).collect();
        let run = loop {
            let mut b = 0;
            let run = run_with_bumps(rng, m, sigma, s, e, 2, 1, &mut b);
            if b > 0 || i > 0 {
                bumps += b;
                break run;
            }
        };
        p.extend(run);
        p.extend((sigma + 1..=t).map(|r| onion_id(m, r, e)));
        pairs.push((p[0], *p.last().unwrap()));
        paths.push(p);
    }
    BumpInstance { m, t, graph, pattern: Pattern::new(pairs).unwrap(), linkage: Linkage { paths }, bumps }
}

/// Definition-level hill test for onion instances (no chords): a subpath
/// with both ends on ring `σ`, at least one internal vertex, and every
/// internal vertex on a higher ring.
pub fn has_hill(m: usize, paths: &[Vec<usize>]) -> bool {
    paths.iter().any(|p| {
        (0..p.len()).any(|r| {
            p[r] != 0 && {
                let sigma = onion_level(m, p[r]);
                let mut s = r + 1;
                while s < p.len() && p[s] != 0 && onion_level(m, p[s]) > sigma {
                    s += 1;
                }
                s > r + 1 && s < p.len() && p[s] != 0 && onion_level(m, p[s]) == sigma
            }
        })
    })
}

pub fn onion_phi(m: usize, paths: &[Vec<usize>]) -> usize {
    paths.iter().flatten().map(|&x| onion_level(m, x)).sum()
}

// ---------- protection by exhaustive cycle enumeration ----------

/// Faces as flag orbits, via the public rotation-system interface.
pub struct FaceModel {
    pub count: usize,
    /// Two face ids per edge.
    pub sides: Vec<[usize; 2]>,
    pub vfaces: Vec<BTreeSet<usize>>,
}

impl FaceModel {
    pub fn new(g: &EmbeddedGraph) -> FaceModel {
        let f = g.faces();
        let sides = (0..g.edge_count()).map(|e| [f.face[flag(2 * e, 0)], f.face[flag(2 * e, 1)]]).collect::<Vec<_>>();
        let mut vfaces = vec![BTreeSet::new(); g.vertex_count()];
        for (e, s) in sides.iter().enumerate() {
            for &v in &g.edge(e).ends {
                vfaces[v].insert(s[0]);
                vfaces[v].insert(s[1]);
            }
        }
        FaceModel { count: f.count, sides, vfaces }
    }

    /// Classes of faces separated by the cycle's edges.
    fn split(&self, g: &EmbeddedGraph, cycle: &[usize]) -> Vec<BTreeSet<usize>> {
        let wall: BTreeSet<usize> =
            (0..cycle.len()).map(|i| g.edge_between(cycle[i], cycle[(i + 1) % cycle.len()]).unwrap()).collect();
        let mut parent: Vec<usize> = (0..self.count).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (e, s) in self.sides.iter().enumerate() {
            if !wall.contains(&e) {
                let (a, b) = (find(&mut parent, s[0]), find(&mut parent, s[1]));
                parent[a] = b;
            }
        }
        let mut classes: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for f in 0..self.count {
            let r = find(&mut parent, f);
            classes.entry(r).or_default().insert(f);
        }
        classes.into_values().collect()
    }

    /// χ of the closed region `V − E + F` equals one and its frontier is
    /// exactly the cycle.
    fn disc_side(&self, g: &EmbeddedGraph, cycle: &[usize], side: &BTreeSet<usize>) -> bool {
        let v = (0..g.vertex_count()).filter(|&x| self.vfaces[x].iter().any(|f| side.contains(f))).count() as i64;
        let e = self.sides.iter().filter(|s| side.contains(&s[0]) || side.contains(&s[1])).count() as i64;
        let frontier = self.sides.iter().filter(|s| side.contains(&s[0]) != side.contains(&s[1])).count();
        v - e + side.len() as i64 == 1 && frontier == cycle.len()
    }
}

fn all_cycles(g: &EmbeddedGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut adj = vec![BTreeSet::new(); n];
    for e in g.edges() {
        let [u, v] = e.ends;
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut out = Vec::new();
    fn dfs(s: usize, adj: &[BTreeSet<usize>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let cur = *path.last().unwrap();
        for &w in &adj[cur] {
            if w == s && path.len() >= 3 && path[1] < cur {
                out.push(path.clone());
            } else if w > s && !path.contains(&w) {
                path.push(w);
                dfs(s, adj, path, out);
                path.pop();
            }
        }
    }
    for s in 0..n {
        dfs(s, &adj, &mut vec![s], &mut out);
    }
    out
}

/// Longest chain of vertex-disjoint cycles bounding nested discs around `v`
/// (plane graphs without holes), none with a terminal strictly inside the
/// outermost disc. `terms` and `v` are vertex indices.
pub fn protection_oracle(g: &EmbeddedGraph, v: usize, terms: &BTreeSet<usize>) -> usize {
    let fm = FaceModel::new(g);
    let inside = |side: &BTreeSet<usize>, x: usize| fm.vfaces[x].iter().all(|f| side.contains(f));
    let touches = |side: &BTreeSet<usize>, x: usize| fm.vfaces[x].iter().any(|f| side.contains(f));
    // (cycle vertex set, disc faces) for discs containing v
    let mut discs: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = Vec::new();
    for c in all_cycles(g) {
        for side in fm.split(g, &c) {
            if touches(&side, v) && fm.disc_side(g, &c, &side) && !terms.iter().any(|&x| inside(&side, x)) {
                discs.push((c.iter().copied().collect(), side));
            }
        }
    }
    discs.sort_by_key(|d| d.1.len());
    // best[i]: longest chain whose outermost disc is i
    let mut best = vec![1usize; discs.len()];
    for i in 0..discs.len() {
        for j in 0..i {
            let (cj, dj) = &discs[j];
            let (ci, di) = &discs[i];
            if dj.len() < di.len() && dj.is_subset(di) && cj.is_disjoint(ci) && best[j] + 1 > best[i] {
                best[i] = best[j] + 1;
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}
