//! Vertex-disjoint path flows. Every vertex has capacity one (vertex
//! splitting); sources may be grouped with per-group quotas.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph::Graph;

const BIG: u32 = u32::MAX / 4;

struct Net {
    head: Vec<usize>,
    cap: Vec<u32>,
    out: Vec<Vec<usize>>,
}

impl Net {
    fn new(n: usize) -> Net {
        Net { head: Vec::new(), cap: Vec::new(), out: vec![Vec::new(); n] }
    }

    fn add(&mut self, u: usize, v: usize, c: u32) -> usize {
        let e = self.head.len();
        self.head.push(v);
        self.cap.push(c);
        self.out[u].push(e);
        self.head.push(u);
        self.cap.push(0);
        self.out[v].push(e + 1);
        e
    }

    /// One BFS augmentation of a unit of flow; returns whether it succeeded.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut prev = vec![usize::MAX; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &e in &self.out[u] {
                let v = self.head[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    prev[v] = e;
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut v = t;
        while v != s {
            let e = prev[v];
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
            v = self.head[e ^ 1];
        }
        true
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.out[u] {
                let v = self.head[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    /// Vertex-disjoint paths, each from a source to a sink.
    pub paths: Vec<Vec<usize>>,
    /// A minimum vertex separator between the sources and the sinks (only
    /// meaningful without quotas).
    pub separator: BTreeSet<usize>,
}

/// Maximum family of vertex-disjoint paths from `groups` (each a set of
/// source vertices with a quota on how many paths may start there) to
/// `sinks`, avoiding `forbidden`.
pub fn disjoint_paths(
    g: &Graph,
    groups: &[(BTreeSet<usize>, usize)],
    sinks: &BTreeSet<usize>,
    forbidden: &BTreeSet<usize>,
) -> FlowResult {
    let verts: Vec<usize> = g.vertices().filter(|v| !forbidden.contains(v)).collect();
    let idx: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = verts.len();
    // nodes: v_in = 2i, v_out = 2i+1, source, sink, groups
    let s = 2 * n;
    let t = 2 * n + 1;
    let mut net = Net::new(2 * n + 2 + groups.len());
    for i in 0..n {
        net.add(2 * i, 2 * i + 1, 1);
    }
    for (i, &v) in verts.iter().enumerate() {
        for u in g.neighbors(v) {
            if let Some(&j) = idx.get(&u) {
                net.add(2 * i + 1, 2 * j, BIG);
            }
        }
        if sinks.contains(&v) {
            net.add(2 * i + 1, t, BIG);
        }
    }
    let mut source_edge: BTreeMap<usize, usize> = BTreeMap::new();
    for (gi, (set, quota)) in groups.iter().enumerate() {
        let gn = 2 * n + 2 + gi;
        net.add(s, gn, (*quota).min(BIG as usize) as u32);
        for v in set {
            if let Some(&i) = idx.get(v) {
                source_edge.insert(i, net.add(gn, 2 * i, 1));
            }
        }
    }
    while net.augment(s, t) {}

    // walk each saturated source edge forward along flow
    let mut paths = Vec::new();
    for (&i, &e) in &source_edge {
        if net.cap[e] != 0 {
            continue;
        }
        let mut path = vec![verts[i]];
        let mut cur = i;
        loop {
            let out = 2 * cur + 1;
            let next = net.out[out].iter().copied().find(|&e| e % 2 == 0 && net.cap[e ^ 1] > 0 && net.head[e] != 2 * cur);
            match next {
                Some(e) if net.head[e] == t => break,
                Some(e) => {
                    cur = net.head[e] / 2;
                    path.push(verts[cur]);
                }
                None => break,
            }
        }
        paths.push(path);
    }
    let reach = net.reachable(s);
    let mut separator = BTreeSet::new();
    for i in 0..n {
        if reach[2 * i] && !reach[2 * i + 1] {
            separator.insert(verts[i]);
        }
    }
    for &i in source_edge.keys() {
        let group_reached = groups
            .iter()
            .enumerate()
            .any(|(gi, (set, _))| set.contains(&verts[i]) && reach[2 * n + 2 + gi]);
        if !reach[2 * i] && group_reached {
            separator.insert(verts[i]);
        }
    }
    FlowResult { paths, separator }
}
