use flatspin::catalog::random_diagonal_group;
use flatspin::crystal::{betti_profile, h1_elementary_divisors, holonomy_characters};
use flatspin::lifting::{cocycle_oracle_decide, decide, verify_verdict, Answer, StructureKind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spin_implies_spinc_and_evidence_replays(seed in any::<u64>(), n in 1usize..=6) {
        let g = random_diagonal_group(&mut ChaCha8Rng::seed_from_u64(seed), n);
        prop_assert!(g.is_torsion_free() && g.is_orientable());
        let spin = decide(&g, StructureKind::Spin).unwrap();
        let spinc = decide(&g, StructureKind::SpinC).unwrap();
        if spin.answer == Answer::Yes {
            prop_assert_eq!(spinc.answer, Answer::Yes);
        }
        prop_assert!(verify_verdict(&g, &spin).unwrap());
        prop_assert!(verify_verdict(&g, &spinc).unwrap());
    }

    #[test]
    fn oracle_agrees(seed in any::<u64>(), n in 1usize..=5) {
        let g = random_diagonal_group(&mut ChaCha8Rng::seed_from_u64(seed), n);
        for kind in [StructureKind::Spin, StructureKind::SpinC] {
            let v = cocycle_oracle_decide(&g, kind).unwrap();
            prop_assert_eq!(v.answer, decide(&g, kind).unwrap().answer);
            prop_assert!(verify_verdict(&g, &v).unwrap());
        }
    }

    #[test]
    fn homology_is_consistent(seed in any::<u64>(), n in 1usize..=6) {
        let g = random_diagonal_group(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let b = betti_profile(&g);
        prop_assert_eq!(b[0], 1);
        // Poincaré duality on an orientable closed manifold
        for p in 0..=n {
            prop_assert_eq!(b[p], b[n - p]);
        }
        prop_assert_eq!(h1_elementary_divisors(&g).free_rank as u64, b[1]);
        prop_assert!(holonomy_characters(&g).iter().all(|c| c.is_homomorphism));
        for gen in g.generators() {
            prop_assert!(g.normal_form(gen).is_some());
        }
    }
}
