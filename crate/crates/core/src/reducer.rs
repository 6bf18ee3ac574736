//! Irrelevant-vertex reduction: delete deeply protected vertices, checking
//! each deletion against the exhaustive oracle (safe mode) or deleting
//! unconditionally and cross-checking afterwards (trusting mode).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::insulation::{index_pattern, protection_depth};
use crate::pattern::{solve_bruteforce, Pattern};
use crate::surface::EmbeddedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Safe,
    Trusting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    Feasible,
    Infeasible,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Deleted,
    /// Safe mode: the oracle saw a feasibility change.
    Rejected,
    SkippedUnknown,
    /// Trusting mode: deleted, and the oracle saw a feasibility change.
    Discrepancy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    /// Vertex label.
    pub vertex: usize,
    pub depth: usize,
    pub mode: Mode,
    pub before: Feasibility,
    pub after: Feasibility,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionLog {
    pub steps: Vec<Step>,
    pub initial_feasibility: Feasibility,
    pub final_feasibility: Feasibility,
    pub deleted: usize,
    pub discrepancies: usize,
    #[serde(skip)]
    pub final_graph: EmbeddedGraph,
}

/// Oracle verdict; running out of budget is `Unknown`.
pub fn feasibility(g: &EmbeddedGraph, p: &Pattern, budget: u64) -> Result<Feasibility> {
    match solve_bruteforce(&g.to_graph(), p, budget) {
        Ok(Some(_)) => Ok(Feasibility::Feasible),
        Ok(None) => Ok(Feasibility::Infeasible),
        Err(Error::BudgetExhausted(_)) => Ok(Feasibility::Unknown),
        Err(e) => Err(e),
    }
}

/// Non-terminal vertices (labels) with protection depth at least
/// `threshold`, deepest first, ties by label.
pub fn candidates(g: &EmbeddedGraph, p: &Pattern, threshold: usize) -> Result<Vec<(usize, usize)>> {
    let pi = index_pattern(g, p)?;
    let terms = pi.terminals();
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        if terms.contains(&v) {
            continue;
        }
        match protection_depth(g, v, &pi) {
            Ok(prot) if prot.depth >= threshold => out.push((g.label(v), prot.depth)),
            Ok(_) | Err(Error::TooLarge(..)) => {}
            Err(e) => return Err(e),
        }
    }
    out.sort_by_key(|&(l, d)| (std::cmp::Reverse(d), l));
    Ok(out)
}

/// Deletes protected vertices until none at `threshold` remains. `p` is on
/// vertex labels.
pub fn reduce(g: &EmbeddedGraph, p: &Pattern, threshold: usize, mode: Mode, budget: u64) -> Result<ReductionLog> {
    if threshold == 0 {
        return Err(Error::BadThreshold);
    }
    if g.components().len() > 1 {
        return Err(Error::Disconnected);
    }
    index_pattern(g, p)?;
    let mut g = g.clone();
    let initial = feasibility(&g, p, budget)?;
    let mut current = initial;
    let mut steps = Vec::new();
    let mut rejected: BTreeSet<usize> = BTreeSet::new();
    loop {
        let mut next = None;
        for (label, depth) in candidates(&g, p, threshold)? {
            if rejected.contains(&label) {
                continue;
            }
            let h = g.delete_vertex(g.index_of(label).expect("candidate label"))?;
            if h.components().len() > 1 {
                rejected.insert(label);
                continue;
            }
            next = Some((label, depth, h));
            break;
        }
        let Some((label, depth, h)) = next else { break };
        let after = feasibility(&h, p, budget)?;
        let step = |outcome| Step { vertex: label, depth, mode, before: current, after, outcome };
        let unknown = current == Feasibility::Unknown || after == Feasibility::Unknown;
        match mode {
            Mode::Safe if unknown => {
                steps.push(step(Outcome::SkippedUnknown));
                rejected.insert(label);
            }
            Mode::Safe if after != current => {
                steps.push(step(Outcome::Rejected));
                rejected.insert(label);
            }
            _ => {
                let changed = !unknown && after != current;
                steps.push(step(if changed { Outcome::Discrepancy } else { Outcome::Deleted }));
                g = h;
                current = after;
                rejected.clear();
            }
        }
    }
    Ok(ReductionLog {
        deleted: steps.iter().filter(|s| matches!(s.outcome, Outcome::Deleted | Outcome::Discrepancy)).count(),
        discrepancies: steps.iter().filter(|s| s.outcome == Outcome::Discrepancy).count(),
        steps,
        initial_feasibility: initial,
        final_feasibility: current,
        final_graph: g,
    })
}

/// Whether deleting the vertex labelled `v` leaves feasibility unchanged.
pub fn redundancy_probe(g: &EmbeddedGraph, p: &Pattern, v: usize, budget: u64) -> Result<bool> {
    if p.terminals().contains(&v) {
        return Err(Error::TerminalVertex(v));
    }
    let i = g.index_of(v).ok_or(Error::UnknownVertex(v))?;
    let h = g.delete_vertex(i)?;
    let decide = |g: &EmbeddedGraph| {
        solve_bruteforce(&g.to_graph(), p, budget).map(|l| l.is_some())
    };
    Ok(decide(g)? == decide(&h)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::insulation::onion;
    use crate::surface::Edge;

    fn four_cycle_with_pendant() -> EmbeddedGraph {
        // s=0, v=1, t=2, w=3 on a 4-cycle 0-1-2-3
        let edges = (0..4).map(|e| Edge { ends: [e, (e + 1) % 4], sign: 1, label: e }).collect();
        let rot = vec![vec![0, 7], vec![1, 2], vec![3, 4], vec![5, 6]];
        EmbeddedGraph::from_parts(vec![0, 1, 2, 3], edges, rot, Vec::new()).unwrap()
    }

    #[test]
    fn no_protected_vertex_leaves_graph() {
        let g = four_cycle_with_pendant();
        let p = Pattern::new(vec![(0, 2)]).unwrap();
        let log = reduce(&g, &p, 5, Mode::Safe, 10_000).unwrap();
        assert!(log.steps.is_empty());
        assert_eq!(log.final_graph.vertex_count(), 4);
    }

    #[test]
    fn onion_center_is_deleted() {
        let g = onion(6, 3, &[]).unwrap();
        let p = Pattern::new(vec![(13, 16), (14, 18)]).unwrap();
        let log = reduce(&g, &p, 3, Mode::Safe, 1_000_000).unwrap();
        assert!(log.steps.iter().any(|s| s.vertex == 0 && s.outcome == Outcome::Deleted));
        assert_eq!(log.initial_feasibility, log.final_feasibility);
        assert!(log.steps.iter().filter(|s| s.outcome == Outcome::Deleted).all(|s| s.before == s.after));
        let again = reduce(&log.final_graph, &p, 3, Mode::Safe, 1_000_000).unwrap();
        assert_eq!(again.deleted, 0);
    }

    #[test]
    fn trusting_mode_records_flip() {
        // pattern {s,t} plus singleton {w}: v is the only free route
        let g = four_cycle_with_pendant();
        let p = Pattern::new(vec![(0, 2), (3, 3)]).unwrap();
        assert!(!redundancy_probe(&g, &p, 1, 10_000).unwrap());
        let log = reduce(&g, &p, 1, Mode::Trusting, 10_000).unwrap();
        assert_eq!(log.discrepancies, 1);
        assert_eq!(log.initial_feasibility, Feasibility::Feasible);
        assert_eq!(log.final_feasibility, Feasibility::Infeasible);
        let safe = reduce(&g, &p, 1, Mode::Safe, 10_000).unwrap();
        assert_eq!(safe.deleted, 0);
        assert_eq!(safe.steps[0].outcome, Outcome::Rejected);
    }

    #[test]
    fn probes() {
        let g = onion(5, 2, &[]).unwrap();
        let p = Pattern::new(vec![(6, 8)]).unwrap();
        assert!(redundancy_probe(&g, &p, 0, 100_000).unwrap());
        assert_eq!(redundancy_probe(&g, &p, 6, 100), Err(Error::TerminalVertex(6)));
        let g = four_cycle_with_pendant();
        let path = g.delete_vertex(3).unwrap();
        let p = Pattern::new(vec![(0, 2)]).unwrap();
        assert!(!redundancy_probe(&path, &p, 1, 100).unwrap());
    }
}
