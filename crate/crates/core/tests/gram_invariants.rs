use calogero_core::fock::{AlgebraParams, BasisKind, Guards, ModeSequence};
use calogero_core::gram::{build_gram, family_trace, verify_eigenfamily, EigenFamily, GramError};
use calogero_core::scalar::{NuScalar, Rat};
use proptest::prelude::*;

fn guards() -> Guards {
    Guards::default()
}

#[test]
fn symmetric_and_invariant_under_both_permutation_groups() {
    for (m, n) in [(2, 3), (3, 2), (3, 3), (4, 2)] {
        let g = build_gram(&AlgebraParams::symbolic(m).unwrap(), n, BasisKind::Sequence, &guards()).unwrap();
        assert!(g.is_symmetric());
        let cyclic: Vec<usize> = (0..m).map(|k| (k + 1) % m).collect();
        for bra in g.index() {
            for ket in g.index() {
                let v = g.entry_for(bra, ket).unwrap();
                // reordering the creation string does not change the state
                let mut rotated = bra.indices().to_vec();
                rotated.rotate_left(1);
                assert_eq!(g.entry_for(&ModeSequence::new(rotated), ket).unwrap(), v);
                // relabeling every mode the same way
                let relabel = |s: &ModeSequence| ModeSequence::new(s.indices().iter().map(|&k| cyclic[k]).collect());
                assert_eq!(g.entry_for(&relabel(bra), &relabel(ket)).unwrap(), v);
            }
        }
    }
}

#[test]
fn trace_equals_family_sum() {
    for m in 2..=5 {
        for n in 1..=2 {
            let g = build_gram(&AlgebraParams::symbolic(m).unwrap(), n, BasisKind::Sequence, &guards()).unwrap();
            assert_eq!(g.trace(), family_trace(n, m), "M={m} n={n}");
        }
    }
}

#[test]
fn two_particle_families_symbolic() {
    for m in 2..=5 {
        for f in EigenFamily::for_particles(2) {
            match verify_eigenfamily(f, m, &guards()) {
                Ok(check) => assert!(check.passed(), "{check:?}"),
                Err(GramError::NotApplicable { .. }) => assert!(!f.applies(m)),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn one_mode_entries_are_factorials() {
    // one mode: ⟨0|a^n a†^n|0⟩ = n! for every coupling
    for n in 0..=6 {
        let g = build_gram(&AlgebraParams::symbolic(1).unwrap(), n, BasisKind::Multiset, &guards()).unwrap();
        let fact: i64 = (1..=n as i64).product();
        assert_eq!(g.class_matrix(), &[vec![NuScalar::from_int(fact)]]);
    }
}

#[test]
fn guards_reject_large_bases() {
    let tight = Guards {
        max_basis: 100,
        ..Guards::default()
    };
    let err = build_gram(&AlgebraParams::symbolic(3).unwrap(), 5, BasisKind::Sequence, &tight).unwrap_err();
    assert!(err.to_string().contains("243"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sequence_and_multiset_ranks_agree(m in 2usize..=3, n in 1usize..=3, p in -3i64..=6, q in 1i64..=4) {
        let params = AlgebraParams::at(m, Rat::new(p, q)).unwrap();
        let seq = build_gram(&params, n, BasisKind::Sequence, &guards()).unwrap();
        let multi = build_gram(&params, n, BasisKind::Multiset, &guards()).unwrap();
        prop_assert_eq!(seq.rank_exact().unwrap(), multi.rank_exact().unwrap());
    }

    #[test]
    fn evaluation_commutes_with_construction(m in 2usize..=3, n in 1usize..=3, p in -3i64..=6, q in 1i64..=4) {
        let nu = Rat::new(p, q);
        let symbolic = build_gram(&AlgebraParams::symbolic(m).unwrap(), n, BasisKind::Sequence, &guards()).unwrap();
        let direct = build_gram(&AlgebraParams::at(m, nu.clone()).unwrap(), n, BasisKind::Sequence, &guards()).unwrap();
        prop_assert_eq!(symbolic.evaluate(&nu).unwrap().rational_entries().unwrap(), direct.rational_entries().unwrap());
    }
}
