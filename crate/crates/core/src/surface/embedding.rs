//! Signed rotation systems.
//!
//! Every edge `e` owns two darts, `2e` (at its first endpoint) and `2e + 1`
//! (at its second). Every dart has two sides, giving four flags per edge:
//! flag `2d + s`. Side 1 of a dart faces its clockwise successor in the
//! vertex rotation, side 0 faces its predecessor. Three involutions act on
//! flags: `alpha0` crosses to the far end of the edge (keeping the geometric
//! side, so the side index flips on a `+1` edge and is kept on a `-1` edge),
//! `alpha1` crosses a corner to the neighbouring dart, and `alpha2` swaps
//! sides. Faces are the orbits of `<alpha0, alpha1>`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::SurfaceSignature;

pub type Dart = usize;
pub type Flag = usize;

#[inline]
pub fn edge_of(d: Dart) -> usize {
    d / 2
}
#[inline]
pub fn flag(d: Dart, side: usize) -> Flag {
    2 * d + side
}
#[inline]
pub fn dart_of(f: Flag) -> Dart {
    f / 2
}
#[inline]
pub fn side_of(f: Flag) -> usize {
    f % 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hole {
    pub id: usize,
    pub flag: Flag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub ends: [usize; 2],
    pub sign: i8,
    pub label: usize,
}

#[derive(Debug, Clone)]
pub struct EmbeddedGraph {
    labels: Vec<usize>,
    edges: Vec<Edge>,
    rotation: Vec<Vec<Dart>>,
    holes: Vec<Hole>,
    /// dart -> (vertex, position in that vertex's rotation)
    pos: Vec<(usize, usize)>,
}

/// Face structure of an embedding: `face[f]` is the face index of flag `f`.
#[derive(Debug, Clone)]
pub struct Faces {
    pub face: Vec<usize>,
    pub count: usize,
}

/// Per-component counts used for classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInfo {
    pub vertices: BTreeSet<usize>,
    pub edges: usize,
    pub faces: usize,
    pub holes: Vec<usize>,
    pub orientable: bool,
}

impl ComponentInfo {
    pub fn euler(&self) -> i64 {
        self.vertices.len() as i64 - self.edges as i64 + self.faces as i64 - self.holes.len() as i64
    }

    pub fn signature(&self) -> Result<SurfaceSignature> {
        SurfaceSignature::from_euler(self.euler(), self.orientable, self.holes.len())
    }
}

impl EmbeddedGraph {
    /// Builds and validates an embedding on dense vertices `0..rotation.len()`.
    pub fn from_parts(
        labels: Vec<usize>,
        edges: Vec<Edge>,
        rotation: Vec<Vec<Dart>>,
        holes: Vec<Hole>,
    ) -> Result<Self> {
        if labels.len() != rotation.len() {
            return Err(Error::MalformedEmbedding("label count differs from vertex count".into()));
        }
        let mut pos = vec![(usize::MAX, usize::MAX); 2 * edges.len()];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d >= pos.len() {
                    return Err(Error::MalformedEmbedding(format!("dart {d} has no edge")));
                }
                if pos[d].0 != usize::MAX {
                    return Err(Error::MalformedEmbedding(format!(
                        "half-edge {}.{} appears twice",
                        edges[edge_of(d)].label,
                        d % 2
                    )));
                }
                if edges[edge_of(d)].ends[d % 2] != v {
                    return Err(Error::MalformedEmbedding(format!(
                        "half-edge {}.{} listed at the wrong vertex",
                        edges[edge_of(d)].label,
                        d % 2
                    )));
                }
                pos[d] = (v, i);
            }
        }
        if let Some(d) = pos.iter().position(|p| p.0 == usize::MAX) {
            return Err(Error::MalformedEmbedding(format!(
                "half-edge {}.{} missing from every rotation",
                edges[edge_of(d)].label,
                d % 2
            )));
        }
        for e in &edges {
            if e.sign != 1 && e.sign != -1 {
                return Err(Error::MalformedEmbedding(format!("edge {} has sign {}", e.label, e.sign)));
            }
        }
        let g = EmbeddedGraph { labels, edges, rotation, holes, pos };
        let faces = g.faces();
        let mut seen = BTreeSet::new();
        for h in &g.holes {
            if h.flag >= 4 * g.edges.len() {
                return Err(Error::MalformedEmbedding(format!("hole {} has no face", h.id)));
            }
            if !seen.insert(faces.face[h.flag]) {
                return Err(Error::MalformedEmbedding(format!("hole {} marks an already marked face", h.id)));
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn holes(&self) -> &[Hole] {
        &self.holes
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn index_of(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn vertex_of(&self, d: Dart) -> usize {
        self.pos[d].0
    }

    /// Vertex at the far end of dart `d`.
    pub fn head(&self, d: Dart) -> usize {
        self.pos[d ^ 1].0
    }

    pub fn succ(&self, d: Dart) -> Dart {
        let (v, i) = self.pos[d];
        let rot = &self.rotation[v];
        rot[(i + 1) % rot.len()]
    }

    pub fn pred(&self, d: Dart) -> Dart {
        let (v, i) = self.pos[d];
        let rot = &self.rotation[v];
        rot[(i + rot.len() - 1) % rot.len()]
    }

    pub fn flag_count(&self) -> usize {
        4 * self.edges.len()
    }

    pub fn alpha0(&self, f: Flag) -> Flag {
        let d = dart_of(f);
        let s = side_of(f);
        let s2 = if self.edges[edge_of(d)].sign == 1 { 1 - s } else { s };
        flag(d ^ 1, s2)
    }

    pub fn alpha1(&self, f: Flag) -> Flag {
        let d = dart_of(f);
        if side_of(f) == 1 {
            flag(self.succ(d), 0)
        } else {
            flag(self.pred(d), 1)
        }
    }

    pub fn alpha2(&self, f: Flag) -> Flag {
        f ^ 1
    }

    pub fn vertex_of_flag(&self, f: Flag) -> usize {
        self.vertex_of(dart_of(f))
    }

    pub fn faces(&self) -> Faces {
        let n = self.flag_count();
        let mut face = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if face[start] != usize::MAX {
                continue;
            }
            for f in self.face_orbit(start) {
                face[f] = count;
            }
            count += 1;
        }
        Faces { face, count }
    }

    /// Flags of the face through `start`, in traversal order
    /// `start, alpha0(start), alpha1(alpha0(start)), ...`.
    pub fn face_orbit(&self, start: Flag) -> Vec<Flag> {
        let mut out = vec![start];
        let mut f = start;
        loop {
            let g = self.alpha0(f);
            out.push(g);
            let h = self.alpha1(g);
            if h == start {
                return out;
            }
            out.push(h);
            f = h;
        }
    }

    /// Vertices visited by the face through `start`, one per corner.
    pub fn face_vertices(&self, start: Flag) -> Vec<usize> {
        self.face_orbit(start)
            .chunks(2)
            .map(|c| self.vertex_of_flag(c[0]))
            .collect()
    }

    pub fn hole_faces(&self, faces: &Faces) -> Vec<usize> {
        self.holes.iter().map(|h| faces.face[h.flag]).collect()
    }

    /// Vertex set of every marked hole.
    pub fn hole_vertex_sets(&self) -> Vec<(usize, BTreeSet<usize>)> {
        self.holes
            .iter()
            .map(|h| (h.id, self.face_vertices(h.flag).into_iter().collect()))
            .collect()
    }

    pub fn on_hole(&self, v: usize) -> Option<usize> {
        self.hole_vertex_sets()
            .into_iter()
            .find(|(_, s)| s.contains(&v))
            .map(|(id, _)| id)
    }

    /// First corner at `v` (scanning its rotation from position 0) that lies
    /// on a marked hole, as the dart whose side 1 borders the corner.
    pub fn hole_corner(&self, v: usize) -> Option<(Dart, usize)> {
        let faces = self.faces();
        let holes: BTreeMap<usize, usize> = self.holes.iter().map(|h| (faces.face[h.flag], h.id)).collect();
        self.rotation[v]
            .iter()
            .find_map(|&d| holes.get(&faces.face[flag(d, 1)]).map(|&id| (d, id)))
    }

    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        self.to_index_graph().components()
    }

    /// Underlying graph on dense vertex indices.
    pub fn to_index_graph(&self) -> Graph {
        let mut g = Graph::new();
        for v in 0..self.vertex_count() {
            g.add_vertex(v);
        }
        for e in &self.edges {
            g.add_edge(e.ends[0], e.ends[1]);
        }
        g
    }

    /// Underlying graph on vertex labels.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        for &l in &self.labels {
            g.add_vertex(l);
        }
        for e in &self.edges {
            g.add_edge(self.labels[e.ends[0]], self.labels[e.ends[1]]);
        }
        g
    }

    pub fn component_info(&self) -> Vec<ComponentInfo> {
        let faces = self.faces();
        let hole_faces: BTreeMap<usize, usize> =
            self.holes.iter().map(|h| (faces.face[h.flag], h.id)).collect();
        let comps = self.components();
        let mut comp_of = vec![0; self.vertex_count()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut infos: Vec<ComponentInfo> = comps
            .into_iter()
            .map(|vertices| ComponentInfo {
                vertices,
                edges: 0,
                faces: 0,
                holes: Vec::new(),
                orientable: true,
            })
            .collect();
        for e in &self.edges {
            infos[comp_of[e.ends[0]]].edges += 1;
        }
        let mut face_seen = vec![false; faces.count];
        for f in 0..self.flag_count() {
            let fc = faces.face[f];
            if !face_seen[fc] {
                face_seen[fc] = true;
                let c = comp_of[self.vertex_of_flag(f)];
                infos[c].faces += 1;
                if let Some(&id) = hole_faces.get(&fc) {
                    infos[c].holes.push(id);
                }
            }
        }
        for info in infos.iter_mut() {
            if info.edges == 0 {
                // isolated vertex: a sphere with one face
                info.faces = 1;
            }
        }
        // orientability: proper 2-colouring of the flag graph
        let mut colour = vec![u8::MAX; self.flag_count()];
        for start in 0..self.flag_count() {
            if colour[start] != u8::MAX {
                continue;
            }
            colour[start] = 0;
            let mut queue = VecDeque::from([start]);
            let c = comp_of[self.vertex_of_flag(start)];
            while let Some(f) = queue.pop_front() {
                for g in [self.alpha0(f), self.alpha1(f), self.alpha2(f)] {
                    if colour[g] == u8::MAX {
                        colour[g] = 1 - colour[f];
                        queue.push_back(g);
                    } else if colour[g] == colour[f] {
                        infos[c].orientable = false;
                    }
                }
            }
        }
        infos
    }

    pub fn euler(&self) -> i64 {
        self.component_info().iter().map(|c| c.euler()).sum()
    }

    /// Reverses the rotation at `v` and negates the sign of every non-loop
    /// edge at `v`. The result embeds the same surface; flag `(d, s)` of a
    /// dart at `v` corresponds to `(d, 1 - s)`.
    pub fn switch_vertex(&mut self, v: usize) {
        self.rotation[v].reverse();
        let n = self.rotation[v].len();
        for (i, &d) in self.rotation[v].iter().enumerate() {
            self.pos[d] = (v, i);
        }
        debug_assert_eq!(n, self.rotation[v].len());
        let mut touched = BTreeSet::new();
        for &d in &self.rotation[v] {
            touched.insert(edge_of(d));
        }
        for e in touched {
            if self.edges[e].ends[0] != self.edges[e].ends[1] {
                self.edges[e].sign = -self.edges[e].sign;
            }
        }
        for h in self.holes.iter_mut() {
            if self.pos[dart_of(h.flag)].0 == v {
                h.flag ^= 1;
            }
        }
    }

    /// Switch-invariant flag relabelling used by [`Self::switch_vertex`].
    pub fn switched_flag(&self, v: usize, f: Flag) -> Flag {
        if self.vertex_of_flag(f) == v {
            f ^ 1
        } else {
            f
        }
    }

    pub fn set_holes(&mut self, holes: Vec<Hole>) -> Result<()> {
        let g = EmbeddedGraph::from_parts(
            self.labels.clone(),
            self.edges.clone(),
            self.rotation.clone(),
            holes,
        )?;
        *self = g;
        Ok(())
    }

    /// Keeps only the listed vertices and edges, renumbering densely.
    /// Returns the new graph and the map from surviving old flags to new ones.
    /// Hole representatives are moved to a surviving flag of their old face.
    fn compact(&self, keep_v: &[bool], keep_e: &[bool]) -> Result<(EmbeddedGraph, Vec<Option<Flag>>)> {
        let mut vmap = vec![usize::MAX; self.vertex_count()];
        let mut labels = Vec::new();
        for v in 0..self.vertex_count() {
            if keep_v[v] {
                vmap[v] = labels.len();
                labels.push(self.labels[v]);
            }
        }
        let mut emap = vec![usize::MAX; self.edge_count()];
        let mut edges = Vec::new();
        for (e, ed) in self.edges.iter().enumerate() {
            if keep_e[e] {
                emap[e] = edges.len();
                edges.push(Edge {
                    ends: [vmap[ed.ends[0]], vmap[ed.ends[1]]],
                    sign: ed.sign,
                    label: ed.label,
                });
            }
        }
        let rotation: Vec<Vec<Dart>> = (0..self.vertex_count())
            .filter(|&v| keep_v[v])
            .map(|v| {
                self.rotation[v]
                    .iter()
                    .filter(|&&d| keep_e[edge_of(d)])
                    .map(|&d| 2 * emap[edge_of(d)] + d % 2)
                    .collect()
            })
            .collect();
        let fmap: Vec<Option<Flag>> = (0..self.flag_count())
            .map(|f| {
                let d = dart_of(f);
                keep_e[edge_of(d)].then(|| flag(2 * emap[edge_of(d)] + d % 2, side_of(f)))
            })
            .collect();
        let mut holes = Vec::new();
        for h in &self.holes {
            if let Some(nf) = self.face_orbit(h.flag).into_iter().find_map(|f| fmap[f]) {
                holes.push(Hole { id: h.id, flag: nf });
            }
        }
        // two holes may have merged; keep the first of each face
        let mut g = EmbeddedGraph::from_parts(labels.clone(), edges.clone(), rotation.clone(), Vec::new())?;
        let faces = g.faces();
        let mut seen = BTreeSet::new();
        holes.retain(|h| seen.insert(faces.face[h.flag]));
        g.holes = holes;
        Ok((g, fmap))
    }

    pub fn delete_vertex(&self, v: usize) -> Result<EmbeddedGraph> {
        let mut keep_v = vec![true; self.vertex_count()];
        keep_v[v] = false;
        let keep_e: Vec<bool> = self.edges.iter().map(|e| e.ends[0] != v && e.ends[1] != v).collect();
        Ok(self.compact(&keep_v, &keep_e)?.0)
    }

    pub fn delete_vertices(&self, vs: &BTreeSet<usize>) -> Result<EmbeddedGraph> {
        let keep_v: Vec<bool> = (0..self.vertex_count()).map(|v| !vs.contains(&v)).collect();
        let keep_e: Vec<bool> = self.edges.iter().map(|e| keep_v[e.ends[0]] && keep_v[e.ends[1]]).collect();
        Ok(self.compact(&keep_v, &keep_e)?.0)
    }

    pub fn delete_edge(&self, e: usize) -> Result<EmbeddedGraph> {
        let keep_v = vec![true; self.vertex_count()];
        let mut keep_e = vec![true; self.edge_count()];
        keep_e[e] = false;
        Ok(self.compact(&keep_v, &keep_e)?.0)
    }

    /// Replaces edge `e` by a path of two edges through a new vertex.
    /// The sign moves to the second half.
    pub fn subdivide_edge(&self, e: usize) -> EmbeddedGraph {
        let mut g = self.clone();
        let w = g.rotation.len();
        let label = g.labels.iter().copied().max().map_or(0, |m| m + 1);
        let next_edge_label = g.edges.iter().map(|e| e.label).max().map_or(0, |m| m + 1);
        let [u, v] = g.edges[e].ends;
        let sign = g.edges[e].sign;
        let e2 = g.edges.len();
        // e keeps its dart at u; its far dart now sits at w
        g.edges[e] = Edge { ends: [u, w], sign: 1, label: g.edges[e].label };
        g.edges.push(Edge { ends: [w, v], sign, label: next_edge_label });
        // old dart 2e+1 at v becomes dart 2e2+1
        let (pv, iv) = g.pos[2 * e + 1];
        g.rotation[pv][iv] = 2 * e2 + 1;
        g.labels.push(label);
        g.rotation.push(vec![2 * e + 1, 2 * e2]);
        g.rebuild_pos();
        g.remap_hole_flags(|f| {
            if dart_of(f) == 2 * e + 1 {
                Some(flag(2 * e2 + 1, side_of(f)))
            } else {
                Some(f)
            }
        });
        g
    }

    /// Inserts a new vertex inside the face through `start` and joins it to
    /// every corner of that face.
    pub fn star_face(&self, start: Flag) -> EmbeddedGraph {
        let orbit = self.face_orbit(start);
        let mut g = self.clone();
        let z = g.rotation.len();
        g.labels.push(g.labels.iter().copied().max().map_or(0, |m| m + 1));
        g.rotation.push(Vec::new());
        let mut next_label = g.edges.iter().map(|e| e.label).max().map_or(0, |m| m + 1);
        // corners are the (alpha0(f), alpha1(alpha0(f))) pairs; walk them in order
        let corners: Vec<(Flag, Flag)> = orbit.chunks(2).map(|c| (c[1], self.alpha1(c[1]))).collect();
        // orientation reference: a corner crossed from side 1 to side 0 runs clockwise
        let mut new_darts = Vec::new();
        let mut inserts: Vec<(Dart, bool, usize)> = Vec::new();
        for (a, _b) in &corners {
            let clockwise = side_of(*a) == 1;
            let e = g.edges.len();
            let u = self.vertex_of_flag(*a);
            g.edges.push(Edge { ends: [u, z], sign: 1, label: next_label });
            next_label += 1;
            // insert the dart at u right after the dart with side 1 on this corner
            let anchor = if clockwise { dart_of(*a) } else { dart_of(self.alpha1(*a)) };
            inserts.push((anchor, clockwise, 2 * e));
            new_darts.push((2 * e + 1, clockwise));
        }
        let reference = new_darts[0].1;
        for (i, (d, cw)) in new_darts.iter().enumerate() {
            let e = edge_of(*d);
            g.edges[e].sign = if *cw == reference { 1 } else { -1 };
            let _ = i;
        }
        for (anchor, _cw, d) in inserts {
            let (v, _) = g.pos[anchor];
            let i = g.rotation[v].iter().position(|&x| x == anchor).unwrap();
            g.rotation[v].insert(i + 1, d);
        }
        let order: Vec<Dart> = new_darts.iter().map(|(d, _)| *d).collect();
        g.rotation[z] = if reference { order.into_iter().rev().collect() } else { order };
        g.pos = vec![(0, 0); 2 * g.edges.len()];
        g.rebuild_pos();
        g
    }

    fn rebuild_pos(&mut self) {
        self.pos = vec![(usize::MAX, 0); 2 * self.edges.len()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                self.pos[d] = (v, i);
            }
        }
    }

    fn remap_hole_flags(&mut self, f: impl Fn(Flag) -> Option<Flag>) {
        for h in self.holes.iter_mut() {
            if let Some(nf) = f(h.flag) {
                h.flag = nf;
            }
        }
    }

    pub fn parse(text: &str) -> Result<EmbeddedGraph> {
        parse_embedded(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let dart_tok = |d: Dart| format!("{}.{}", self.edges[edge_of(d)].label, d % 2);
        for (v, rot) in self.rotation.iter().enumerate() {
            let toks: Vec<String> = rot.iter().map(|&d| dart_tok(d)).collect();
            let _ = writeln!(out, "V {}: {}", self.labels[v], toks.join(" "));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "E {} {} {} {}",
                e.label, self.labels[e.ends[0]], self.labels[e.ends[1]], e.sign
            );
        }
        for h in &self.holes {
            let _ = writeln!(out, "HOLE {} {} {}", h.id, dart_tok(dart_of(h.flag)), side_of(h.flag));
        }
        out
    }

    /// Dart of edge `e` at vertex `v` (for loops, the first one).
    pub fn dart_at(&self, e: usize, v: usize) -> Option<Dart> {
        if self.edges[e].ends[0] == v {
            Some(2 * e)
        } else if self.edges[e].ends[1] == v {
            Some(2 * e + 1)
        } else {
            None
        }
    }

    /// Some edge joining `u` and `v`, lowest index first.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.rotation[u]
            .iter()
            .map(|&d| edge_of(d))
            .filter(|&e| {
                let [a, b] = self.edges[e].ends;
                (a == u && b == v) || (a == v && b == u)
            })
            .min()
    }

    /// Faces reachable from `start` without crossing any edge in `wall`.
    pub fn face_region(&self, faces: &Faces, start_face: usize, wall: &HashSet<usize>) -> BTreeSet<usize> {
        let adj = self.face_adjacency(faces, wall);
        let mut seen = BTreeSet::from([start_face]);
        let mut queue = VecDeque::from([start_face]);
        while let Some(f) = queue.pop_front() {
            for &g in &adj[f] {
                if seen.insert(g) {
                    queue.push_back(g);
                }
            }
        }
        seen
    }

    /// Face adjacency across edges not in `wall`.
    pub fn face_adjacency(&self, faces: &Faces, wall: &HashSet<usize>) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); faces.count];
        for e in 0..self.edge_count() {
            if wall.contains(&e) {
                continue;
            }
            let a = faces.face[flag(2 * e, 0)];
            let b = faces.face[flag(2 * e, 1)];
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }
}

fn parse_embedded(text: &str) -> Result<EmbeddedGraph> {
    struct VLine {
        line: usize,
        label: usize,
        darts: Vec<(usize, usize)>,
    }
    let mut vlines: Vec<VLine> = Vec::new();
    let mut elines: Vec<(usize, usize, usize, usize, i8)> = Vec::new();
    let mut hlines: Vec<(usize, usize, (usize, usize), usize)> = Vec::new();
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let parse_dart = |line: usize, s: &str| -> Result<(usize, usize)> {
        let (a, b) = s
            .split_once('.')
            .ok_or_else(|| perr(line, format!("half-edge `{s}` must look like <edge>.<0|1>")))?;
        let e: usize = a.parse().map_err(|_| perr(line, format!("bad edge id in `{s}`")))?;
        let end: usize = b.parse().map_err(|_| perr(line, format!("bad end in `{s}`")))?;
        if end > 1 {
            return Err(perr(line, format!("half-edge end must be 0 or 1 in `{s}`")));
        }
        Ok((e, end))
    };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "V" => {
                if toks.len() < 2 {
                    return Err(perr(ln, "V record needs an id".into()));
                }
                let (id_tok, rest): (&str, Vec<&str>) = match toks[1].strip_suffix(':') {
                    Some(id) => (id, toks[2..].to_vec()),
                    None if toks.get(2) == Some(&":") => (toks[1], toks[3..].to_vec()),
                    None => (toks[1], toks[2..].to_vec()),
                };
                let label = id_tok.parse().map_err(|_| perr(ln, format!("bad vertex id `{id_tok}`")))?;
                let darts = rest.iter().map(|t| parse_dart(ln, t)).collect::<Result<Vec<_>>>()?;
                vlines.push(VLine { line: ln, label, darts });
            }
            "E" => {
                if toks.len() != 5 {
                    return Err(perr(ln, "E record is `E <id> <u> <v> <sign>`".into()));
                }
                let n = |s: &str| s.parse::<usize>().map_err(|_| perr(ln, format!("bad id `{s}`")));
                let sign: i8 = match toks[4] {
                    "1" | "+1" | "+" => 1,
                    "-1" | "-" => -1,
                    s => return Err(perr(ln, format!("sign must be +1 or -1, found `{s}`"))),
                };
                elines.push((ln, n(toks[1])?, n(toks[2])?, n(toks[3])?, sign));
            }
            "HOLE" => {
                if toks.len() != 4 {
                    return Err(perr(ln, "HOLE record is `HOLE <id> <edge>.<end> <side>`".into()));
                }
                let id = toks[1].parse().map_err(|_| perr(ln, "bad hole id".into()))?;
                let d = parse_dart(ln, toks[2])?;
                let side: usize = toks[3].parse().map_err(|_| perr(ln, "bad side".into()))?;
                if side > 1 {
                    return Err(perr(ln, "side must be 0 or 1".into()));
                }
                hlines.push((ln, id, d, side));
            }
            t => return Err(perr(ln, format!("unknown record `{t}`"))),
        }
    }
    let mut vindex = BTreeMap::new();
    for (i, vl) in vlines.iter().enumerate() {
        if vindex.insert(vl.label, i).is_some() {
            return Err(perr(vl.line, format!("duplicate vertex {}", vl.label)));
        }
    }
    let mut eindex = BTreeMap::new();
    let mut edges = Vec::new();
    for &(ln, id, u, v, sign) in &elines {
        if eindex.insert(id, edges.len()).is_some() {
            return Err(perr(ln, format!("duplicate edge {id}")));
        }
        let iu = *vindex.get(&u).ok_or_else(|| perr(ln, format!("unknown vertex {u}")))?;
        let iv = *vindex.get(&v).ok_or_else(|| perr(ln, format!("unknown vertex {v}")))?;
        edges.push(Edge { ends: [iu, iv], sign, label: id });
    }
    let mut seen = BTreeSet::new();
    let mut rotation = Vec::new();
    for vl in &vlines {
        let mut rot = Vec::new();
        for &(e, end) in &vl.darts {
            let ei = *eindex.get(&e).ok_or_else(|| perr(vl.line, format!("unknown edge {e}")))?;
            if !seen.insert((e, end)) {
                return Err(perr(vl.line, format!("duplicate half-edge {e}.{end}")));
            }
            rot.push(2 * ei + end);
        }
        rotation.push(rot);
    }
    let mut holes = Vec::new();
    for &(ln, id, (e, end), side) in &hlines {
        let ei = *eindex.get(&e).ok_or_else(|| perr(ln, format!("unknown edge {e}")))?;
        holes.push(Hole { id, flag: flag(2 * ei + end, side) });
    }
    let labels = vlines.iter().map(|v| v.label).collect();
    EmbeddedGraph::from_parts(labels, edges, rotation, holes)
}
