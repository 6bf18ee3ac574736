//! Patterns, linkages and the exhaustive linkage oracle.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Terminal sets `{s_i, t_i}`; a singleton is stored with `s == t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linkage {
    pub paths: Vec<Vec<usize>>,
}

impl Pattern {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(s, t) in &pairs {
            if !seen.insert(s) || (s != t && !seen.insert(t)) {
                return Err(Error::InvalidPattern(format!("terminal sets overlap at {{{s}, {t}}}")));
            }
        }
        Ok(Pattern { pairs })
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn terminals(&self) -> BTreeSet<usize> {
        self.pairs.iter().flat_map(|&(s, t)| [s, t]).collect()
    }

    pub fn parse(text: &str) -> Result<Pattern> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad vertex id `{s}`") })
            };
            match (toks[0], toks.len()) {
                ("PAIR", 3) => {
                    let (s, t) = (num(toks[1])?, num(toks[2])?);
                    if s == t {
                        return Err(Error::Parse { line: i + 1, msg: "PAIR needs two distinct vertices".into() });
                    }
                    pairs.push((s, t));
                }
                ("SINGLE", 2) => {
                    let s = num(toks[1])?;
                    pairs.push((s, s));
                }
                _ => return Err(Error::Parse { line: i + 1, msg: format!("expected `PAIR s t` or `SINGLE s`, found `{line}`") }),
            }
        }
        Pattern::new(pairs)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &(s, t) in &self.pairs {
            if s == t {
                let _ = writeln!(out, "SINGLE {s}");
            } else {
                let _ = writeln!(out, "PAIR {s} {t}");
            }
        }
        out
    }
}

impl Linkage {
    pub fn to_text(&self) -> String {
        self.paths
            .iter()
            .map(|p| p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// True iff no two pairs interleave in the cyclic `order`.
pub fn cross_free(p: &Pattern, order: &[usize]) -> Result<bool> {
    let pos = |v: usize| order.iter().position(|&x| x == v).ok_or(Error::TerminalMissing(v));
    let mut arcs = Vec::new();
    for &(s, t) in &p.pairs {
        let (a, b) = (pos(s)?, pos(t)?);
        if s != t {
            arcs.push((a.min(b), a.max(b)));
        }
    }
    for (i, &(a, b)) in arcs.iter().enumerate() {
        for &(c, d) in &arcs[i + 1..] {
            let c_in = a < c && c < b;
            let d_in = a < d && d < b;
            if c_in != d_in {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn verify(g: &Graph, p: &Pattern, l: &Linkage) -> bool {
    if l.paths.len() != p.pairs.len() {
        return false;
    }
    let mut used = HashSet::new();
    for (path, &(s, t)) in l.paths.iter().zip(&p.pairs) {
        let (Some(&first), Some(&last)) = (path.first(), path.last()) else {
            return false;
        };
        let ends_ok = (first == s && last == t) || (first == t && last == s);
        if !ends_ok || (s == t && path.len() != 1) {
            return false;
        }
        if path.iter().any(|&v| !g.contains(v) || !used.insert(v)) {
            return false;
        }
        if path.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
            return false;
        }
    }
    true
}

pub const ORACLE_MAX_VERTICES: usize = 128;

type Mask = u128;

fn bit(i: usize) -> Mask {
    1 << i
}

fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

struct Search<'a> {
    adj: Vec<Mask>,
    pairs: Vec<(usize, usize)>,
    budget: u64,
    nodes: u64,
    paths: Vec<Vec<usize>>,
    /// Failed subproblems: (next pair, relevant free vertices).
    dead: HashSet<(usize, Mask)>,
    _g: &'a Graph,
}

impl Search<'_> {
    fn flood(&self, start: usize, allowed: Mask) -> Mask {
        let mut seen = bit(start);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            next &= allowed & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// Each pair from `from` on (and the open path `head -> t` if given) must
    /// be connected through `free`.
    fn connected(&self, from: usize, free: Mask, open: Option<(usize, usize)>) -> bool {
        if let Some((h, t)) = open {
            if self.flood(h, free | bit(t)) & bit(t) == 0 {
                return false;
            }
        }
        for &(s, t) in &self.pairs[from..] {
            if s != t && self.flood(s, free | bit(t)) & bit(t) == 0 {
                return false;
            }
        }
        true
    }

    /// Free vertices that can still matter: those reachable from a remaining
    /// terminal.
    fn relevant(&self, from: usize, free: Mask) -> Mask {
        let mut r = 0;
        for &(s, t) in &self.pairs[from..] {
            if s != t && r & bit(s) == 0 {
                r |= self.flood(s, free | bit(t));
            }
        }
        r & free
    }

    fn route(&mut self, i: usize, free: Mask) -> Result<bool> {
        if i == self.pairs.len() {
            return Ok(true);
        }
        let key = (i, self.relevant(i, free));
        if self.dead.contains(&key) {
            return Ok(false);
        }
        let (s, t) = self.pairs[i];
        let ok = if s == t {
            self.paths.push(vec![s]);
            let ok = self.route(i + 1, free)?;
            if !ok {
                self.paths.pop();
            }
            ok
        } else {
            self.paths.push(vec![s]);
            let ok = self.extend(i, s, t, free)?;
            if !ok {
                self.paths.pop();
            }
            ok
        };
        if !ok {
            self.dead.insert(key);
        }
        Ok(ok)
    }

    fn extend(&mut self, i: usize, head: usize, t: usize, free: Mask) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        if self.adj[head] & bit(t) != 0 {
            self.paths[i].push(t);
            if self.route(i + 1, free)? {
                return Ok(true);
            }
            self.paths[i].pop();
        }
        for nb in bits(self.adj[head] & free) {
            let rest = free & !bit(nb);
            if !self.connected(i + 1, rest, Some((nb, t))) {
                continue;
            }
            self.paths[i].push(nb);
            if self.extend(i, nb, t, rest)? {
                return Ok(true);
            }
            self.paths[i].pop();
        }
        Ok(false)
    }
}

/// Exhaustive search for a `p`-linkage in `g`. `Ok(None)` means infeasible;
/// running past `budget` search nodes is an error, never a verdict.
pub fn solve_bruteforce(g: &Graph, p: &Pattern, budget: u64) -> Result<Option<Linkage>> {
    let verts: Vec<usize> = g.vertices().collect();
    if verts.len() > ORACLE_MAX_VERTICES {
        return Err(Error::TooLarge(verts.len(), ORACLE_MAX_VERTICES));
    }
    let index = |v: usize| verts.binary_search(&v).map_err(|_| Error::UnknownVertex(v));
    let mut pairs = Vec::new();
    for &(s, t) in &p.pairs {
        pairs.push((index(s)?, index(t)?));
    }
    let adj: Vec<Mask> = verts
        .iter()
        .map(|&v| g.neighbors(v).fold(0, |m, u| m | bit(verts.binary_search(&u).unwrap())))
        .collect();
    let all: Mask = if verts.len() == 128 { Mask::MAX } else { bit(verts.len()) - 1 };
    let term: Mask = pairs.iter().fold(0, |m, &(s, t)| m | bit(s) | bit(t));
    let mut search = Search { adj, pairs, budget, nodes: 0, paths: Vec::new(), dead: HashSet::new(), _g: g };
    let free = all & !term;
    if !search.connected(0, free, None) {
        return Ok(None);
    }
    if search.route(0, free)? {
        let paths = search.paths.into_iter().map(|p| p.into_iter().map(|i| verts[i]).collect()).collect();
        Ok(Some(Linkage { paths }))
    } else {
        Ok(None)
    }
}
