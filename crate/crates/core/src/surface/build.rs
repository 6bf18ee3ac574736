use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use rand::Rng;

use crate::error::{Error, Result};

use super::embedding::{dart_of, edge_of, Edge, EmbeddedGraph, Flag, Hole};
use super::BoundaryPath;

/// A rotation system for Σ(a, b, c). The base is a one-face bouquet of
/// loops (interleaved pairs for handles, twisted loops for crosscaps), or a
/// triangle for the sphere. Each refinement round subdivides every edge and
/// stars every face. Holes are pairwise far-apart triangular faces.
pub fn canonical(a: usize, b: usize, c: usize, rounds: usize) -> Result<EmbeddedGraph> {
    let mut g = if a == 0 && b == 0 {
        let edges = (0..3).map(|i| Edge { ends: [i, (i + 1) % 3], sign: 1, label: i }).collect();
        // vertex i holds dart 2i (out) and 2(i+2)+1 (in)
        let rotation = (0..3).map(|i| vec![2 * i, 2 * ((i + 2) % 3) + 1]).collect();
        EmbeddedGraph::from_parts(vec![0, 1, 2], edges, rotation, Vec::new())?
    } else {
        let mut edges = Vec::new();
        let mut rot = Vec::new();
        for _ in 0..a {
            let x = edges.len();
            edges.push(Edge { ends: [0, 0], sign: 1, label: x });
            edges.push(Edge { ends: [0, 0], sign: 1, label: x + 1 });
            rot.extend([2 * x, 2 * (x + 1), 2 * x + 1, 2 * (x + 1) + 1]);
        }
        for _ in 0..b {
            let x = edges.len();
            edges.push(Edge { ends: [0, 0], sign: -1, label: x });
            rot.extend([2 * x, 2 * x + 1]);
        }
        EmbeddedGraph::from_parts(vec![0], edges, vec![rot], Vec::new())?
    };
    for _ in 0..rounds.max(1) {
        g = refine(&g);
    }
    let holes = pick_hole_faces(&g, c)?;
    g.set_holes(holes)?;
    Ok(g)
}

/// Subdivides every edge once, then stars every face.
pub fn refine(g: &EmbeddedGraph) -> EmbeddedGraph {
    let mut h = g.clone();
    for e in 0..g.edge_count() {
        h = h.subdivide_edge(e);
    }
    let faces = h.faces();
    let mut reps: Vec<Flag> = vec![usize::MAX; faces.count];
    for f in (0..h.flag_count()).rev() {
        reps[faces.face[f]] = f;
    }
    for f in reps {
        h = h.star_face(f);
    }
    h
}

fn pick_hole_faces(g: &EmbeddedGraph, c: usize) -> Result<Vec<Hole>> {
    let faces = g.faces();
    let ig = g.to_index_graph();
    let mut blocked: BTreeSet<usize> = BTreeSet::new();
    let mut holes = Vec::new();
    let mut seen = vec![false; faces.count];
    for f in 0..g.flag_count() {
        if holes.len() == c {
            break;
        }
        let fc = faces.face[f];
        if seen[fc] {
            continue;
        }
        seen[fc] = true;
        let vs: BTreeSet<usize> = g.face_vertices(f).into_iter().collect();
        if vs.len() != g.face_vertices(f).len() || vs.iter().any(|v| blocked.contains(v)) {
            continue;
        }
        for &v in &vs {
            blocked.insert(v);
            blocked.extend(ig.neighbors(v));
        }
        holes.push(Hole { id: holes.len(), flag: f });
    }
    if holes.len() < c {
        return Err(Error::MalformedEmbedding(format!("only room for {} holes", holes.len())));
    }
    Ok(holes)
}

/// Edges lying on the boundary of some hole.
pub fn hole_edges(g: &EmbeddedGraph) -> BTreeSet<usize> {
    g.holes()
        .iter()
        .flat_map(|h| g.face_orbit(h.flag))
        .map(|f| edge_of(dart_of(f)))
        .collect()
}

/// A random boundary path: ends on holes (random, or the given pair),
/// interior through non-hole vertices. Half the time the path is forced
/// through a random interior vertex; legs are shortest paths under random
/// edge weights. `None` if the chosen ends cannot be joined.
pub fn random_bd_path<R: Rng>(
    g: &EmbeddedGraph,
    rng: &mut R,
    ends: Option<(usize, usize)>,
) -> Option<BoundaryPath> {
    let on_hole: BTreeSet<usize> = g.hole_vertex_sets().into_iter().flat_map(|(_, s)| s).collect();
    if on_hole.len() < 2 {
        return None;
    }
    let (s, t) = match ends {
        Some(e) => e,
        None => {
            let all: Vec<usize> = on_hole.iter().copied().collect();
            let s = all[rng.gen_range(0..all.len())];
            let mut t = s;
            while t == s {
                t = all[rng.gen_range(0..all.len())];
            }
            (s, t)
        }
    };
    let banned = hole_edges(g);
    let weights: Vec<u64> = (0..g.edge_count()).map(|_| rng.gen_range(1..=64)).collect();
    let interior: Vec<usize> = (0..g.vertex_count()).filter(|v| !on_hole.contains(v)).collect();
    let (vs, es) = if !interior.is_empty() && rng.gen_bool(0.5) {
        let w = interior[rng.gen_range(0..interior.len())];
        let (v1, e1) = leg(g, &on_hole, &banned, &weights, s, w, &BTreeSet::new())?;
        let used: BTreeSet<usize> = v1[..v1.len() - 1].iter().copied().collect();
        let (v2, e2) = leg(g, &on_hole, &banned, &weights, w, t, &used)?;
        let mut vs = v1;
        vs.extend_from_slice(&v2[1..]);
        let mut es = e1;
        es.extend(e2);
        (vs, es)
    } else {
        leg(g, &on_hole, &banned, &weights, s, t, &BTreeSet::new())?
    };
    BoundaryPath::new(g, vs, es).ok()
}

/// Shortest `s`–`t` path avoiding `avoid`, hole-boundary edges, and hole
/// vertices other than its ends.
fn leg(
    g: &EmbeddedGraph,
    on_hole: &BTreeSet<usize>,
    banned: &BTreeSet<usize>,
    weights: &[u64],
    s: usize,
    t: usize,
    avoid: &BTreeSet<usize>,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.vertex_count();
    let mut dist = vec![u64::MAX; n];
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut heap = BinaryHeap::from([Reverse((0u64, s))]);
    dist[s] = 0;
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] || u == t || (u != s && on_hole.contains(&u)) {
            continue;
        }
        for &dart in g.rotation(u) {
            let e = edge_of(dart);
            let w = g.head(dart);
            if banned.contains(&e) || w == u || avoid.contains(&w) || (on_hole.contains(&w) && w != t) {
                continue;
            }
            let nd = d + weights[e];
            if nd < dist[w] {
                dist[w] = nd;
                prev[w] = Some((u, e));
                heap.push(Reverse((nd, w)));
            }
        }
    }
    prev[t]?;
    let mut vs = vec![t];
    let mut es = Vec::new();
    let mut cur = t;
    while let Some((u, e)) = prev[cur] {
        vs.push(u);
        es.push(e);
        cur = u;
    }
    vs.reverse();
    es.reverse();
    Some((vs, es))
}
