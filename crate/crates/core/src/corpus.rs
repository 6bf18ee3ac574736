//! Instance generators: random planar graphs with random patterns, and
//! a fixed family of insulated fixtures on the sphere, torus and
//! projective plane.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::insulation::onion;
use crate::pattern::Pattern;
use crate::surface::{Edge, EmbeddedGraph};

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: EmbeddedGraph,
    /// On vertex labels.
    pub pattern: Pattern,
}

fn triangle() -> EmbeddedGraph {
    let edges = (0..3).map(|e| Edge { ends: [e, (e + 1) % 3], sign: 1, label: e }).collect();
    EmbeddedGraph::from_parts(vec![0, 1, 2], edges, vec![vec![0, 5], vec![1, 2], vec![3, 4]], Vec::new())
        .expect("triangle")
}

/// A connected plane graph on `n ≥ 3` vertices: a triangle grown by
/// starring random faces, then thinned by deleting about `drop` of the
/// edges whose removal keeps it connected.
pub fn random_planar<R: Rng>(rng: &mut R, n: usize, drop: f64) -> EmbeddedGraph {
    let mut g = triangle();
    while g.vertex_count() < n.max(3) {
        let f = rng.gen_range(0..g.flag_count());
        g = g.star_face(f);
    }
    let target = (g.edge_count() as f64 * drop) as usize;
    let mut removed = 0;
    let mut tries = 0;
    while removed < target && tries < 4 * g.edge_count() + 8 {
        tries += 1;
        let e = rng.gen_range(0..g.edge_count());
        if let Ok(h) = g.delete_edge(e) {
            if h.components().len() == 1 {
                g = h;
                removed += 1;
            }
        }
    }
    g
}

/// `k` disjoint terminal pairs on random vertex labels.
pub fn random_pattern<R: Rng>(rng: &mut R, g: &EmbeddedGraph, k: usize) -> Pattern {
    random_pairs(rng, g.labels(), k)
}

/// `k` disjoint pairs drawn from `labels` (fewer if there are too few).
pub fn random_pairs<R: Rng>(rng: &mut R, labels: &[usize], k: usize) -> Pattern {
    let mut labels = labels.to_vec();
    labels.shuffle(rng);
    let k = k.min(labels.len() / 2);
    Pattern::new((0..k).map(|i| (labels[2 * i], labels[2 * i + 1])).collect()).expect("distinct labels")
}

/// A random planar instance with `3..=max_n` vertices and `1..=max_k` pairs.
pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize, max_k: usize) -> Instance {
    let n = rng.gen_range(3..=max_n.max(3));
    let drop = rng.gen_range(0.0..0.5);
    let graph = random_planar(rng, n, drop);
    let k = rng.gen_range(1..=max_k.max(1));
    let pattern = random_pattern(rng, &graph, k);
    Instance { graph, pattern }
}

/// An onion fixture with its ring family (ring 1 innermost) around vertex 0.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub graph: EmbeddedGraph,
    /// On vertex indices, which equal labels for onions; an odd terminal
    /// list ends in a singleton.
    pub pattern: Pattern,
    pub cycles: Vec<Vec<usize>>,
}

fn fixture(name: String, m: usize, t: usize, exterior: &[(usize, usize, i8)], terms: &[usize]) -> Fixture {
    let graph = onion(m, t, exterior).expect("fixture");
    let outer = |j: usize| 1 + (t - 1) * m + j;
    let pairs = terms.chunks(2).map(|c| (outer(c[0]), outer(*c.last().unwrap()))).collect();
    let cycles = (1..=t).map(|r| (0..m).map(|j| 1 + (r - 1) * m + j).collect()).collect();
    Fixture { name, graph, pattern: Pattern::new(pairs).expect("fixture pattern"), cycles }
}

/// Insulated instances on the sphere, torus and projective plane.
pub fn insulated_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for t in 2..=3 {
        for m in [12, 16, 20] {
            // one or two nested chords over each terminal
            for depth in 1..=2usize {
                let terms: Vec<usize> = (0..m / 6).map(|i| 3 + 6 * i).collect();
                let mut ext = Vec::new();
                for &p in &terms {
                    for d in 1..=depth {
                        ext.push(((p + m - d) % m, (p + d) % m, 1));
                    }
                }
                out.push(fixture(format!("sphere-m{m}-t{t}-d{depth}"), m, t, &ext, &terms));
            }
            // one chord covering two terminals
            out.push(fixture(format!("sphere-wide-m{m}-t{t}"), m, t, &[(0, 5, 1), (m - 1, 6, 1)], &[2, 4]));
        }
        for w in 1..=3usize {
            let mut ext: Vec<(usize, usize, i8)> = (0..w).map(|j| (j, 9 - j, 1)).collect();
            ext.extend((0..w).map(|j| (4 + j, 13 - j, 1)));
            out.push(fixture(format!("torus-w{w}-t{t}"), 16, t, &ext, &[3, 14]));
            out.push(fixture(format!("torus2-w{w}-t{t}"), 16, t, &ext, &[3, 10, 14, 15]));
            let pp: Vec<(usize, usize, i8)> = (0..w).map(|j| (j, 8 + j, -1)).collect();
            out.push(fixture(format!("pp-w{w}-t{t}"), 16, t, &pp, &[4, 12]));
        }
    }
    out
}
