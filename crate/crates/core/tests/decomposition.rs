use std::collections::BTreeSet;

use linkage_lab::corpus::insulated_fixtures;
use linkage_lab::insulation::{decompose, onion, StripKind};
use linkage_lab::pattern::Pattern;
use linkage_lab::surface::classify;

#[test]
fn fixtures_respect_class_bounds() {
    for f in insulated_fixtures() {
        let d = decompose(&f.graph, &f.pattern, 0, f.cycles.clone()).unwrap();
        assert!(d.contractible_classes <= 2 * f.pattern.k(), "{}", f.name);
        assert!(d.non_contractible_classes <= 3 * classify(&f.graph).unwrap().genus(), "{}", f.name);
        assert!(d.terminals_on_corners, "{}", f.name);
        let mut edges = BTreeSet::new();
        for s in &d.strips {
            for &e in &s.edges {
                assert!(edges.insert(e), "{}: edge {e} in two strips", f.name);
            }
        }
        let t = f.cycles.len();
        let outer: BTreeSet<usize> = f.cycles[t - 1].iter().copied().collect();
        let exterior = f.graph.edges().iter().filter(|e| e.ends.iter().all(|v| outer.contains(v)) && {
            let [u, v] = e.ends;
            let m = outer.len();
            let (a, b) = ((u - 1) % m, (v - 1) % m);
            (a + 1) % m != b && (b + 1) % m != a
        });
        assert_eq!(exterior.count(), edges.len(), "{}", f.name);
    }
}

#[test]
fn one_nested_bundle_is_one_strip() {
    let g = onion(10, 2, &[(1, 5, 1), (2, 4, 1)]).unwrap();
    let p = Pattern::new(vec![(14, 19)]).unwrap();
    let cycles = (1..=2).map(|r| (0..10).map(|j| 1 + (r - 1) * 10 + j).collect()).collect();
    let d = decompose(&g, &p, 0, cycles).unwrap();
    assert_eq!(d.strips.len(), 1);
    assert_eq!(d.strips[0].kind, StripKind::Contractible);
    assert!(d.strips[0].matching);
}

#[test]
fn vertex_outside_outer_disc_is_rejected() {
    let g = onion(6, 3, &[]).unwrap();
    let p = Pattern::new(vec![(13, 16)]).unwrap();
    let inner = vec![(1..=6).collect::<Vec<_>>()];
    assert!(decompose(&g, &p, 0, inner).is_err());
}
