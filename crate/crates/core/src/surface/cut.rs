use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

use super::embedding::{dart_of, edge_of, flag, side_of, Dart, Edge, EmbeddedGraph, Flag, Hole};
use super::{classify, BoundaryPath, Pseudotype, SurfaceSignature};

/// Outcome of slitting a surface along a boundary path.
#[derive(Debug, Clone)]
pub struct CutResult {
    pub graph: EmbeddedGraph,
    /// Image of every flag of the input graph.
    pub flag_map: Vec<Flag>,
    /// Images of the two hole-corner flags at the start and at the end:
    /// `[start side 1, start side 0, end side 1, end side 0]`.
    pub markers: [Flag; 4],
}

/// Slits `g` along `p`. Every vertex of the path is doubled; the two copies
/// of each path edge bound the slit, which joins the end holes.
pub fn cut_along(g: &EmbeddedGraph, p: &BoundaryPath) -> Result<CutResult> {
    let k = p.edges.len();
    let mut h = g.clone();
    // flag relabelling from g to h caused by switching
    let mut switched = vec![false; g.vertex_count()];
    for i in 0..k {
        if h.edge(p.edges[i]).sign == -1 {
            let v = p.vertices[i + 1];
            h.switch_vertex(v);
            switched[v] = !switched[v];
        }
    }
    let to_h = |f: Flag| if switched[g.vertex_of_flag(f)] { f ^ 1 } else { f };

    let d_out: Vec<Option<Dart>> = (0..=k).map(|i| (i < k).then(|| h.dart_at(p.edges[i], p.vertices[i]).unwrap())).collect();
    let d_in: Vec<Option<Dart>> =
        (0..=k).map(|i| (i > 0).then(|| h.dart_at(p.edges[i - 1], p.vertices[i]).unwrap())).collect();

    // hole corners at the ends, as the dart whose side 1 borders the corner in h
    let corner_dart = |f: Flag| -> Dart {
        let fh = to_h(f);
        if side_of(fh) == 1 {
            dart_of(fh)
        } else {
            dart_of(h.alpha1(fh))
        }
    };
    let c_start = corner_dart(p.corners.0);
    let c_end = corner_dart(p.corners.1);

    let n = h.vertex_count();
    let m = h.edge_count();
    let mut labels: Vec<usize> = h.labels().to_vec();
    let mut next_label = labels.iter().copied().max().map_or(0, |x| x + 1);
    // Y copy of each path vertex
    let mut y_copy = BTreeMap::new();
    for &v in &p.vertices {
        y_copy.insert(v, labels.len());
        labels.push(next_label);
        next_label += 1;
    }
    let mut edges: Vec<Edge> = h.edges().to_vec();
    let mut next_edge_label = edges.iter().map(|e| e.label).max().map_or(0, |x| x + 1);
    // Y copy of each path edge
    let mut y_edge = BTreeMap::new();
    for &e in &p.edges {
        y_edge.insert(e, edges.len());
        edges.push(Edge { ends: [usize::MAX; 2], sign: 1, label: next_edge_label });
        next_edge_label += 1;
    }
    let y_dart = |d: Dart| 2 * y_edge[&edge_of(d)] + d % 2;

    let mut rotation: Vec<Vec<Dart>> = (0..n).map(|v| h.rotation(v).to_vec()).collect();
    rotation.resize(labels.len(), Vec::new());

    for (i, &v) in p.vertices.iter().enumerate() {
        let rot = h.rotation(v);
        let len = rot.len();
        let idx = |d: Dart| rot.iter().position(|&x| x == d).unwrap();
        let (x_rot, y_rot) = if i > 0 && i < k {
            let (o, n_) = (d_out[i].unwrap(), d_in[i].unwrap());
            let (io, ii) = (idx(o), idx(n_));
            let arc = |from: usize, to: usize| -> Vec<Dart> {
                let mut out = Vec::new();
                let mut j = (from + 1) % len;
                while j != to {
                    out.push(rot[j]);
                    j = (j + 1) % len;
                }
                out
            };
            let mut x = vec![o];
            x.extend(arc(io, ii));
            x.push(n_);
            let mut y = vec![y_dart(n_)];
            y.extend(arc(ii, io));
            y.push(y_dart(o));
            (x, y)
        } else {
            let (pd, c) = if i == 0 { (d_out[0].unwrap(), c_start) } else { (d_in[k].unwrap(), c_end) };
            let ip = idx(pd);
            let after: Vec<Dart> = (1..len).map(|j| rot[(ip + j) % len]).collect();
            let j = if c == pd {
                0
            } else {
                after.iter().position(|&x| x == c).ok_or_else(|| {
                    Error::InvalidPath("hole corner not at the path end".into())
                })? + 1
            };
            let (first, second) = after.split_at(j);
            if i == 0 {
                let mut x = vec![pd];
                x.extend_from_slice(first);
                let mut y = second.to_vec();
                y.push(y_dart(pd));
                (x, y)
            } else {
                let mut y = vec![y_dart(pd)];
                y.extend_from_slice(first);
                let mut x = second.to_vec();
                x.push(pd);
                (x, y)
            }
        };
        let yv = y_copy[&v];
        for &d in &y_rot {
            if d < 2 * m {
                edges[edge_of(d)].ends[d % 2] = yv;
            }
        }
        rotation[v] = x_rot;
        rotation[yv] = y_rot;
    }
    for (i, &e) in p.edges.iter().enumerate() {
        let o = d_out[i].unwrap();
        let ye = y_edge[&e];
        edges[ye].ends[o % 2] = y_copy[&p.vertices[i]];
        edges[ye].ends[1 - o % 2] = y_copy[&p.vertices[i + 1]];
        debug_assert_eq!(edges[e].sign, 1);
    }

    let out_set: BTreeMap<Dart, ()> = d_out.iter().flatten().map(|&d| (d, ())).collect();
    let in_set: BTreeMap<Dart, ()> = d_in.iter().flatten().map(|&d| (d, ())).collect();
    let map_h = |f: Flag| -> Flag {
        let d = dart_of(f);
        let s = side_of(f);
        if out_set.contains_key(&d) && s == 0 || in_set.contains_key(&d) && s == 1 {
            flag(y_dart(d), s)
        } else {
            f
        }
    };
    let flag_map: Vec<Flag> = (0..g.flag_count()).map(|f| map_h(to_h(f))).collect();

    let mut candidate: Vec<(Flag, Option<usize>)> = g.holes().iter().map(|hl| (flag_map[hl.flag], Some(hl.id))).collect();
    for d in d_out.iter().flatten() {
        candidate.push((flag(*d, 0), None));
        candidate.push((flag(y_dart(*d), 1), None));
    }
    let bare = EmbeddedGraph::from_parts(labels.clone(), edges.clone(), rotation.clone(), Vec::new())?;
    let faces = bare.faces();
    let mut by_face: BTreeMap<usize, (Flag, Option<usize>)> = BTreeMap::new();
    for (f, id) in candidate {
        let e = by_face.entry(faces.face[f]).or_insert((f, id));
        if let Some(i) = id {
            if e.1.is_none_or(|j| i < j) {
                *e = (f, Some(i));
            }
        }
    }
    let mut fresh = g.holes().iter().map(|hl| hl.id).max().map_or(0, |x| x + 1);
    let holes: Vec<Hole> = by_face
        .values()
        .map(|&(f, id)| {
            let id = id.unwrap_or_else(|| {
                fresh += 1;
                fresh - 1
            });
            Hole { id, flag: f }
        })
        .collect();
    let graph = EmbeddedGraph::from_parts(labels, edges, rotation, holes)?;
    let markers = [
        flag_map[p.corners.0],
        flag_map[g.alpha1(p.corners.0)],
        flag_map[p.corners.1],
        flag_map[g.alpha1(p.corners.1)],
    ];
    Ok(CutResult { graph, flag_map, markers })
}

pub fn pseudotype(g: &EmbeddedGraph, p: &BoundaryPath) -> Result<Pseudotype> {
    let before = classify(g)?;
    let cut = cut_along(g, p)?;
    pseudotype_of_cut(g, p, before, &cut)
}

fn pseudotype_of_cut(
    g: &EmbeddedGraph,
    p: &BoundaryPath,
    before: SurfaceSignature,
    cut: &CutResult,
) -> Result<Pseudotype> {
    let infos = cut.graph.component_info();
    match infos.len() {
        1 => {
            let after = infos[0].signature()?;
            Ok(Pseudotype::NonSeparating {
                sides: before.genus().saturating_sub(after.genus()),
                orientable_after: after.orientable(),
            })
        }
        2 => {
            let comp_of = |f: Flag| {
                let v = cut.graph.vertex_of_flag(f);
                if infos[0].vertices.contains(&v) {
                    0
                } else {
                    1
                }
            };
            let first = comp_of(cut.markers[0]);
            let mut parts: [(SurfaceSignature, BTreeSet<usize>); 2] = [
                (infos[first].signature()?, BTreeSet::new()),
                (infos[1 - first].signature()?, BTreeSet::new()),
            ];
            let end_hole = p.end_holes.0;
            for hl in g.holes() {
                if hl.id == end_hole {
                    parts[0].1.insert(hl.id);
                    parts[1].1.insert(hl.id);
                } else {
                    let c = comp_of(cut.flag_map[hl.flag]);
                    parts[if c == first { 0 } else { 1 }].1.insert(hl.id);
                }
            }
            Ok(Pseudotype::Separating { parts })
        }
        n => Err(Error::MalformedEmbedding(format!("cut produced {n} components"))),
    }
}

/// Whether the two paths (with common ends) have the same type.
pub fn same_type(g: &EmbeddedGraph, p1: &BoundaryPath, p2: &BoundaryPath) -> Result<bool> {
    let (a1, b1) = p1.ends();
    let (a2, b2) = p2.ends();
    let (p2, swapped) = if (a1, b1) == (a2, b2) {
        (p2.clone(), false)
    } else if (a1, b1) == (b2, a2) {
        (reversed(g, p2)?, true)
    } else {
        return Err(Error::EndpointMismatch);
    };
    let _ = swapped;
    let before = classify(g)?;
    let c1 = cut_along(g, p1)?;
    let c2 = cut_along(g, &p2)?;
    let t1 = pseudotype_of_cut(g, p1, before, &c1)?;
    let t2 = pseudotype_of_cut(g, &p2, before, &c2)?;
    Ok(match (&t1, &t2) {
        (Pseudotype::Separating { .. }, Pseudotype::Separating { .. }) => t1 == t2,
        (Pseudotype::Separating { .. }, _) | (_, Pseudotype::Separating { .. }) => false,
        _ if before.orientable() => true,
        _ if p1.end_holes.0 == p1.end_holes.1 => t1 == t2,
        _ => opposite_marker(&c1)? == opposite_marker(&c2)?,
    })
}

/// Which end marker (2 or 3) lies opposite the first start marker on the
/// merged hole.
fn opposite_marker(cut: &CutResult) -> Result<usize> {
    let g = &cut.graph;
    let orbit = g.face_orbit(cut.markers[0]);
    let pos: Vec<usize> = cut
        .markers
        .iter()
        .map(|m| orbit.iter().position(|f| f == m))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::MalformedEmbedding("markers not on one hole".into()))?;
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by_key(|&i| pos[i]);
    Ok(order[2])
}

fn reversed(g: &EmbeddedGraph, p: &BoundaryPath) -> Result<BoundaryPath> {
    let mut vs = p.vertices.clone();
    vs.reverse();
    let mut es = p.edges.clone();
    es.reverse();
    BoundaryPath::new(g, vs, es)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{canonical, classify_components};

    /// A square with a hole outside and four spokes to a centre: a disk.
    fn wheel(signs: [i8; 8]) -> EmbeddedGraph {
        // rim 0-1-2-3, centre 4
        let mut text = String::new();
        text.push_str("V 0: 0.0 3.1 4.0\nV 1: 1.0 0.1 5.0\nV 2: 2.0 1.1 6.0\nV 3: 3.0 2.1 7.0\n");
        text.push_str("V 4: 4.1 7.1 6.1 5.1\n");
        for i in 0..4 {
            text.push_str(&format!("E {i} {i} {} {}\n", (i + 1) % 4, signs[i]));
        }
        for i in 0..4 {
            text.push_str(&format!("E {} {i} 4 {}\n", i + 4, signs[i + 4]));
        }
        let mut g = EmbeddedGraph::parse(&text).unwrap();
        let faces = g.faces();
        let outer = (0..g.flag_count()).find(|&f| g.face_vertices(f).len() == 4 && {
            let vs: BTreeSet<usize> = g.face_vertices(f).into_iter().collect();
            !vs.contains(&4)
        });
        let _ = faces;
        g.set_holes(vec![Hole { id: 0, flag: outer.unwrap() }]).unwrap();
        g
    }

    #[test]
    fn wheel_is_a_disk() {
        let g = wheel([1; 8]);
        assert_eq!(classify(&g).unwrap(), SurfaceSignature::new(0, 0, 1));
    }

    #[test]
    fn chord_of_disk_separates() {
        let g = wheel([1; 8]);
        let p = BoundaryPath::from_vertices(&g, vec![0, 4, 2]).unwrap();
        let cut = cut_along(&g, &p).unwrap();
        assert_eq!(cut.graph.euler(), g.euler() + 1);
        let mut sigs = classify_components(&cut.graph).unwrap();
        sigs.sort();
        assert_eq!(sigs, vec![SurfaceSignature::new(0, 0, 1); 2]);
        match pseudotype(&g, &p).unwrap() {
            Pseudotype::Separating { parts } => {
                assert_eq!(parts[0].0, SurfaceSignature::new(0, 0, 1));
            }
            t => panic!("{t}"),
        }
    }

    #[test]
    fn switched_wheel_still_cuts() {
        // switching the centre negates all spokes but leaves the surface alone
        let mut g = wheel([1; 8]);
        g.switch_vertex(4);
        assert_eq!(classify(&g).unwrap(), SurfaceSignature::new(0, 0, 1));
        let p = BoundaryPath::from_vertices(&g, vec![1, 4, 3]).unwrap();
        let cut = cut_along(&g, &p).unwrap();
        assert_eq!(cut.graph.euler(), g.euler() + 1);
    }

    #[test]
    fn canonical_cuts_raise_euler_by_one() {
        let g = canonical(1, 1, 1, 3).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        for _ in 0..20 {
            if let Some(p) = crate::surface::random_bd_path(&g, &mut rng, None) {
                let cut = cut_along(&g, &p).unwrap();
                assert_eq!(cut.graph.euler(), g.euler() + 1);
            }
        }
    }
}
