use std::collections::BTreeSet;

use linkage_lab::surface::{
    canonical, classify, classify_components, cut_along, pseudotype, random_bd_path, same_type, BoundaryPath,
    EmbeddedGraph, Hole, Pseudotype, SurfaceSignature,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent model of Σ − P. Refine the surface (subdivide every edge,
/// star every non-hole face) so each side of the path keeps a vertex, then
/// delete the path's vertices and declare every face that touched them
/// (together with the old holes) a hole.
fn oracle_cut(g: &EmbeddedGraph, p: &BoundaryPath) -> Vec<SurfaceSignature> {
    let mut r = g.clone();
    for e in 0..g.edge_count() {
        r = r.subdivide_edge(e);
    }
    let faces = r.faces();
    let hole_faces: BTreeSet<usize> = r.holes().iter().map(|h| faces.face[h.flag]).collect();
    let mut reps = vec![usize::MAX; faces.count];
    for f in (0..r.flag_count()).rev() {
        reps[faces.face[f]] = f;
    }
    for (fc, f) in reps.into_iter().enumerate() {
        if !hole_faces.contains(&fc) {
            r = r.star_face(f);
        }
    }
    let mut path: BTreeSet<usize> = p.vertices.iter().copied().collect();
    path.extend(p.edges.iter().map(|&e| r.edge(e).ends[1]));

    let faces = r.faces();
    let mut holes: Vec<Hole> = r.holes().to_vec();
    let mut used: BTreeSet<usize> = holes.iter().map(|h| faces.face[h.flag]).collect();
    let mut fresh = 1000;
    for f in 0..r.flag_count() {
        if path.contains(&r.vertex_of_flag(f)) && used.insert(faces.face[f]) {
            holes.push(Hole { id: fresh, flag: f });
            fresh += 1;
        }
    }
    r.set_holes(holes).unwrap();
    let r = r.delete_vertices(&path).unwrap();
    let mut sigs = classify_components(&r).unwrap();
    sigs.sort();
    sigs
}

fn cut_sigs(g: &EmbeddedGraph, p: &BoundaryPath) -> Vec<SurfaceSignature> {
    let mut s = classify_components(&cut_along(g, p).unwrap().graph).unwrap();
    s.sort();
    s
}

fn find_path(
    g: &EmbeddedGraph,
    seed: u64,
    want: impl Fn(&BoundaryPath, &Pseudotype) -> bool,
) -> Option<BoundaryPath> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..2000).find_map(|_| {
        let p = random_bd_path(g, &mut rng, None)?;
        let t = pseudotype(g, &p).ok()?;
        want(&p, &t).then_some(p)
    })
}

#[test]
fn cut_agrees_with_open_star_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for (a, b, c) in [(0, 0, 1), (0, 0, 2), (1, 0, 1), (0, 1, 1), (0, 2, 1), (1, 0, 2), (0, 1, 2)] {
        let g = canonical(a, b, c, 3).unwrap();
        for _ in 0..15 {
            if let Some(p) = random_bd_path(&g, &mut rng, None) {
                assert_eq!(cut_sigs(&g, &p), oracle_cut(&g, &p), "Σ({a},{b},{c}) path {:?}", p.vertices);
                checked += 1;
            }
        }
    }
    assert!(checked > 80);
}

#[test]
fn disk_chords_give_two_disks() {
    let g = canonical(0, 0, 1, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let p = random_bd_path(&g, &mut rng, None).unwrap();
        let disk = SurfaceSignature::new(0, 0, 1);
        assert_eq!(cut_sigs(&g, &p), vec![disk, disk]);
        assert!(matches!(pseudotype(&g, &p).unwrap(), Pseudotype::Separating { parts } if parts[0].0 == disk && parts[1].0 == disk));
    }
}

#[test]
fn mobius_core_chord() {
    let g = canonical(0, 1, 1, 3).unwrap();
    let p = find_path(&g, 1, |_, t| matches!(t, Pseudotype::NonSeparating { .. })).unwrap();
    assert_eq!(oracle_cut(&g, &p), vec![SurfaceSignature::new(0, 0, 1)]);
    assert_eq!(cut_sigs(&g, &p), vec![SurfaceSignature::new(0, 0, 1)]);
    assert_eq!(pseudotype(&g, &p).unwrap(), Pseudotype::NonSeparating { sides: 1, orientable_after: true });
}

#[test]
fn holed_torus_non_separating_chord() {
    let g = canonical(1, 0, 1, 3).unwrap();
    let p = find_path(&g, 2, |_, t| matches!(t, Pseudotype::NonSeparating { .. })).unwrap();
    assert_eq!(oracle_cut(&g, &p), vec![SurfaceSignature::new(0, 0, 2)]);
    assert_eq!(cut_sigs(&g, &p), vec![SurfaceSignature::new(0, 0, 2)]);
}

#[test]
fn holed_klein_bottle_types() {
    let g = canonical(0, 2, 1, 3).unwrap();
    let two_sided = Pseudotype::NonSeparating { sides: 2, orientable_after: true };
    let one_sided = Pseudotype::NonSeparating { sides: 1, orientable_after: false };
    let p2 = find_path(&g, 4, |_, t| *t == two_sided).unwrap();
    assert_eq!(oracle_cut(&g, &p2), vec![SurfaceSignature::new(0, 0, 2)]);
    let p1 = find_path(&g, 5, |_, t| *t == one_sided).unwrap();
    assert_eq!(oracle_cut(&g, &p1), vec![SurfaceSignature::new(0, 1, 1)]);
    assert_eq!(cut_sigs(&g, &p1), vec![SurfaceSignature::new(0, 1, 1)]);
    // same ends, different pseudotype
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let pair = (0..400).find_map(|_| {
        let p = random_bd_path(&g, &mut rng, None)?;
        if pseudotype(&g, &p).ok()? != one_sided {
            return None;
        }
        let ends = p.ends();
        let q = (0..200)
            .filter_map(|_| random_bd_path(&g, &mut rng, Some(ends)))
            .find(|q| pseudotype(&g, q).unwrap() == two_sided)?;
        Some((p, q))
    });
    let (p, q) = pair.expect("no pair of chords with common ends and different pseudotypes");
    assert!(!same_type(&g, &p, &q).unwrap());
    assert!(same_type(&g, &p, &p).unwrap());
}

#[test]
fn holed_torus_chords_with_common_ends_share_type() {
    let g = canonical(1, 0, 1, 3).unwrap();
    let p = find_path(&g, 7, |_, t| matches!(t, Pseudotype::NonSeparating { .. })).unwrap();
    let (s, t) = p.ends();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut n = 0;
    for _ in 0..200 {
        if let Some(q) = random_bd_path(&g, &mut rng, Some((s, t))) {
            if matches!(pseudotype(&g, &q).unwrap(), Pseudotype::NonSeparating { .. }) {
                assert!(same_type(&g, &p, &q).unwrap());
                n += 1;
            }
        }
    }
    assert!(n > 0);
}

#[test]
fn same_type_mismatched_ends() {
    let g = canonical(0, 0, 1, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = random_bd_path(&g, &mut rng, None).unwrap();
    let q = (0..100)
        .filter_map(|_| random_bd_path(&g, &mut rng, None))
        .find(|q| {
            let (a, b) = q.ends();
            let (c, d) = p.ends();
            BTreeSet::from([a, b]) != BTreeSet::from([c, d])
        })
        .unwrap();
    assert!(same_type(&g, &p, &q).is_err());
}

#[test]
fn same_type_is_an_equivalence() {
    for (a, b, c, seed) in [(0, 1, 1, 20), (0, 2, 1, 21), (1, 0, 1, 22), (0, 1, 2, 23), (0, 0, 2, 24)] {
        let g = canonical(a, b, c, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_bd_path(&g, &mut rng, None).unwrap();
        let ends = p.ends();
        let mut family = vec![p];
        for _ in 0..60 {
            if let Some(q) = random_bd_path(&g, &mut rng, Some(ends)) {
                if !family.contains(&q) {
                    family.push(q);
                }
            }
        }
        let n = family.len();
        let rel: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| same_type(&g, &family[i], &family[j]).unwrap()).collect())
            .collect();
        for i in 0..n {
            assert!(rel[i][i]);
            for j in 0..n {
                assert_eq!(rel[i][j], rel[j][i]);
                for k in 0..n {
                    if rel[i][j] && rel[j][k] {
                        assert!(rel[i][k], "Σ({a},{b},{c}) transitivity");
                    }
                }
            }
        }
    }
}

#[test]
fn canonical_up_to_three() {
    for a in 0..=3 {
        for b in 0..=3 {
            for c in 0..=3 {
                let g = canonical(a, b, c, 3).unwrap();
                assert_eq!(classify(&g).unwrap(), SurfaceSignature::new(a, b, c));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cutting_raises_euler_and_never_raises_genus(a in 0usize..2, b in 0usize..3, c in 1usize..3, seed in any::<u64>()) {
        let g = canonical(a, b, c, 3).unwrap();
        let before = classify(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(p) = random_bd_path(&g, &mut rng, None) {
            let cut = cut_along(&g, &p).unwrap();
            prop_assert_eq!(cut.graph.euler(), g.euler() + 1);
            let genus: usize = classify_components(&cut.graph).unwrap().iter().map(|s| s.genus()).sum();
            prop_assert!(genus <= before.genus());
            if let Pseudotype::NonSeparating { sides, .. } = pseudotype(&g, &p).unwrap() {
                if p.end_holes.0 == p.end_holes.1 {
                    prop_assert!(sides == 1 || sides == 2);
                } else {
                    prop_assert_eq!(sides, 0);
                }
            }
        }
    }
}
