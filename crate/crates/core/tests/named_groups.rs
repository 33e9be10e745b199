use flatspin::catalog::{by_name, cyclic_hw, enumerate_specs, hw_5_1, hw_from_spec, torus, CatalogError, EnumerationMode, HwSpec};
use flatspin::crystal::{betti, betti_profile, derived_relation_check, h1_elementary_divisors, holonomy_characters};
use flatspin::lifting::{decide_spin, decide_spinc, verify_verdict, Answer};
use flatspin::linalg::rational::rat;
use flatspin::signs::SignVector;
use num_bigint::BigInt;

fn hw_profile(n: usize) -> Vec<u64> {
    let mut v = vec![0; n + 1];
    v[0] = 1;
    v[n] = 1;
    v
}

#[test]
fn cyclic_groups_are_rational_homology_spheres() {
    for n in (3..=13).step_by(2) {
        let g = cyclic_hw(n).unwrap();
        assert!(g.is_hw(), "n = {n}");
        assert_eq!(betti_profile(&g), hw_profile(n), "n = {n}");
    }
    assert_eq!(betti_profile(&hw_5_1()), hw_profile(5));
}

#[test]
fn first_homology_of_catalog_groups() {
    for n in [5, 7, 9] {
        let h = h1_elementary_divisors(&cyclic_hw(n).unwrap());
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion, vec![BigInt::from(2); n - 1], "n = {n}");
    }
    let h = h1_elementary_divisors(&hw_5_1());
    assert_eq!(h.torsion, vec![BigInt::from(2); 4]);
    let h = h1_elementary_divisors(&cyclic_hw(3).unwrap());
    assert_eq!(h.torsion, vec![BigInt::from(4); 2]);
}

#[test]
fn gamma_one_generators() {
    let g = hw_5_1();
    assert_eq!(*g.generators()[2].rotation(), SignVector::from_signs(&[-1, 1, 1, -1, 1]).unwrap());
    assert!(g.is_hw());
    assert_eq!(g.holonomy_order(), 16);
    assert_eq!(betti(&g, 2).unwrap(), 0);
    assert_ne!(g.generators(), cyclic_hw(5).unwrap().generators());
}

#[test]
fn last_cyclic_generator_is_printed_form() {
    let g = cyclic_hw(5).unwrap();
    let last = &g.generators()[4];
    assert_eq!(last.translation(), &[rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1), rat(-1, 2)]);
    assert_eq!(g.generators().len(), 5);
    assert_eq!(g.holonomy_rank(), 4);
}

#[test]
fn derived_relation_in_odd_dimensions() {
    for n in (5..=15).step_by(2) {
        assert!(derived_relation_check(&cyclic_hw(n).unwrap()), "n = {n}");
    }
}

#[test]
fn characters_are_homomorphisms() {
    let mut groups = vec![hw_5_1(), torus(4).unwrap()];
    groups.extend((3..=13).step_by(2).map(|n| cyclic_hw(n).unwrap()));
    for g in groups {
        let chars = holonomy_characters(&g);
        assert_eq!(chars.len(), g.dim());
        assert!(chars.iter().all(|c| c.is_homomorphism));
    }
}

#[test]
fn spec_of_cyclic_group_rebuilds_it() {
    let n = 5;
    let masks: Vec<u64> = (0..n - 1).map(|i| 0b11 << i).collect();
    let spec = HwSpec::from_half_masks(n, masks).unwrap();
    let g = hw_from_spec(&spec).unwrap();
    let c = cyclic_hw(n).unwrap();
    assert_eq!(g.generators(), &c.generators()[..n - 1]);
    assert_eq!(g.presentation(), c.presentation());
}

#[test]
fn zero_translations_have_torsion() {
    let spec = HwSpec::from_half_masks(5, vec![0; 4]).unwrap();
    match hw_from_spec(&spec) {
        Err(CatalogError::Torsion { witness }) => {
            assert_eq!(*witness.rotation(), SignVector::from_signs(&[1, -1, -1, -1, -1]).unwrap());
            assert!(witness.translation().iter().all(|q| *q == rat(0, 1)));
        }
        other => panic!("expected torsion, got {other:?}"),
    }
}

#[test]
fn catalog_names() {
    assert_eq!(by_name("hw-5-2").unwrap().generators(), cyclic_hw(5).unwrap().generators());
    assert_eq!(by_name("torus-3").unwrap().holonomy_rank(), 0);
    for bad in ["cyclic-hw-4", "cyclic-hw-07", "hw-5-3", "torus-", "torus-64"] {
        assert!(by_name(bad).is_err(), "{bad}");
    }
}

#[test]
fn catalog_verdicts_and_certificates() {
    let mut groups = vec![hw_5_1()];
    groups.extend((5..=13).step_by(2).map(|n| cyclic_hw(n).unwrap()));
    for g in &groups {
        for v in [decide_spin(g).unwrap(), decide_spinc(g).unwrap()] {
            assert_eq!(v.answer, Answer::No);
            assert!(verify_verdict(g, &v).unwrap());
        }
    }
    let t = torus(5).unwrap();
    assert_eq!(decide_spin(&t).unwrap().answer, Answer::Yes);
    assert_eq!(decide_spinc(&t).unwrap().answer, Answer::Yes);
}

#[test]
fn three_dimensional_scan() {
    let specs: Vec<_> = enumerate_specs(3, EnumerationMode::Exhaustive).unwrap().collect();
    assert_eq!(specs.len(), 8);
    for c in &specs {
        let g = hw_from_spec(&c.spec).unwrap();
        assert!(g.is_hw());
    }
}

#[test]
fn sampling_is_reproducible() {
    let draw = |seed| -> Vec<HwSpec> {
        enumerate_specs(7, EnumerationMode::Sample { count: 100, seed })
            .unwrap()
            .map(|c| c.spec)
            .collect()
    };
    let a = draw(1);
    assert_eq!(a.len(), 100);
    assert_eq!(a, draw(1));
    assert_ne!(a, draw(2));
    for spec in &a {
        assert!(hw_from_spec(spec).unwrap().is_hw());
    }
}

#[test]
fn exhaustive_refused_from_seven() {
    for n in [7, 9] {
        assert!(matches!(
            enumerate_specs(n, EnumerationMode::Exhaustive).err(),
            Some(CatalogError::ExhaustiveRefused { .. })
        ));
    }
}
