mod common;

use std::collections::BTreeSet;

use common::protection_oracle;
use linkage_lab::corpus::{random_pattern, random_planar};
use linkage_lab::insulation::{index_pattern, onion, protection_depth, LeveledDisk};
use linkage_lab::pattern::Pattern;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn depth_matches_exhaustive_chains(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..=10);
        let drop = rng.gen_range(0.0..0.4);
        let g = random_planar(&mut rng, n, drop);
        let k = rng.gen_range(1..=2);
        let p = index_pattern(&g, &random_pattern(&mut rng, &g, k)).unwrap();
        let terms = p.terminals();
        for v in (0..g.vertex_count()).filter(|v| !terms.contains(v)) {
            let prot = protection_depth(&g, v, &p).unwrap();
            prop_assert_eq!(prot.depth, protection_oracle(&g, v, &terms), "vertex {}", v);
            if prot.depth > 0 {
                let d = LeveledDisk::from_protection(g.clone(), v, &prot).unwrap();
                prop_assert!(d.protects(&p));
                let all: BTreeSet<usize> = prot.cycles.iter().flatten().copied().collect();
                prop_assert_eq!(all.len(), prot.cycles.iter().map(Vec::len).sum::<usize>());
            }
        }
    }
}

#[test]
fn onion_depth_equals_ring_count() {
    for t in 1..=4 {
        let g = onion(5, t, &[]).unwrap();
        let outer = |j: usize| 1 + (t - 1) * 5 + j;
        let p = Pattern::new(vec![(outer(0), outer(2))]).unwrap();
        assert_eq!(protection_depth(&g, 0, &p).unwrap().depth, t);
        if t <= 2 {
            assert_eq!(protection_oracle(&g, 0, &p.terminals()), t);
        }
    }
}

#[test]
fn nested_family_is_validated() {
    let g = onion(5, 2, &[]).unwrap();
    let ring = |r: usize| (0..5).map(|j| 1 + (r - 1) * 5 + j).collect::<Vec<_>>();
    assert!(LeveledDisk::new(g.clone(), 0, vec![ring(1), ring(2)]).is_ok());
    assert!(LeveledDisk::new(g.clone(), 0, vec![ring(1), ring(1)]).is_err());
    assert!(LeveledDisk::new(g, 0, vec![vec![1, 2, 7]]).is_err());
}
