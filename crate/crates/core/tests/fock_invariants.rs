use calogero_core::fock::{AlgebraParams, FockState, ModeSequence, Occupation};
use calogero_core::scalar::{NuScalar, Rat};
use proptest::prelude::*;

fn params(modes: usize, nu: Option<(i64, i64)>) -> AlgebraParams {
    match nu {
        None => AlgebraParams::symbolic(modes).unwrap(),
        Some((p, q)) => AlgebraParams::at(modes, Rat::new(p, q)).unwrap(),
    }
}

/// A random monomial on `2..=4` modes with total degree `≤ max_degree`, and
/// either the symbolic coupling or a small rational one.
fn setup(max_degree: u32) -> impl Strategy<Value = (AlgebraParams, Occupation)> {
    (2usize..=4, prop::option::of((-4i64..=6, 1i64..=4))).prop_flat_map(move |(m, nu)| {
        prop::collection::vec(0u32..=max_degree, m)
            .prop_filter("degree bound", move |v| v.iter().sum::<u32>() <= max_degree)
            .prop_map(move |v| (params(m, nu), Occupation::new(v)))
    })
}

fn zero(p: &AlgebraParams) -> FockState {
    FockState::zero(p.modes())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn annihilators_commute((p, o) in setup(5), i in 0usize..4, j in 0usize..4) {
        let (i, j) = (i % p.modes(), j % p.modes());
        let s = FockState::monomial(o);
        prop_assert_eq!(p.annihilate(i, &p.annihilate(j, &s)), p.annihilate(j, &p.annihilate(i, &s)));
    }

    #[test]
    fn commutator_matches_exchange_form((p, o) in setup(4), i in 0usize..4, j in 0usize..4) {
        let (i, j) = (i % p.modes(), j % p.modes());
        let s = FockState::monomial(o);
        let direct = &p.annihilate(i, &s.create(j)) - &p.annihilate(i, &s).create(j);
        prop_assert_eq!(direct, p.commutator_action(i, j, &s));
    }

    #[test]
    fn exchange_braid((p, o) in setup(4)) {
        prop_assume!(p.modes() >= 3);
        let s = FockState::monomial(o);
        let k = |t: &FockState, a: usize, b: usize| t.exchange(a, b).unwrap();
        let lhs = k(&k(&s, 1, 2), 0, 1);
        prop_assert_eq!(&lhs, &k(&k(&s, 0, 2), 1, 2));
        prop_assert_eq!(&lhs, &k(&k(&s, 0, 1), 0, 2));
    }

    #[test]
    fn transition_commutators((p, o) in setup(4), idx in prop::array::uniform4(0usize..4)) {
        let m = p.modes();
        let [i, j, k, l] = idx.map(|x| x % m);
        let s = FockState::monomial(o);
        let lhs = &s.create(k).transition(i, j) - &s.transition(i, j).create(k);
        prop_assert_eq!(lhs, if j == k { s.create(i) } else { zero(&p) });
        let lhs = &s.transition(k, l).transition(i, j) - &s.transition(i, j).transition(k, l);
        let mut rhs = zero(&p);
        if j == k {
            rhs = &rhs + &s.transition(i, l);
        }
        if i == l {
            rhs = &rhs - &s.transition(k, j);
        }
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(s.transition(j, j).transition(i, i), s.transition(i, i).transition(j, j));
    }

    #[test]
    fn dual_pair((p, o) in setup(4), i in 0usize..4, j in 0usize..4) {
        let (i, j) = (i % p.modes(), j % p.modes());
        let s = FockState::monomial(o);
        let lhs = &s.create(j).dual_annihilate(i) - &s.dual_annihilate(i).create(j);
        prop_assert_eq!(lhs, if i == j { s.clone() } else { zero(&p) });
        prop_assert_eq!(s.dual_annihilate(i).dual_annihilate(j), s.dual_annihilate(j).dual_annihilate(i));
    }

    #[test]
    fn exchange_from_transitions((p, o) in setup(4), i in 0usize..4, j in 0usize..4) {
        let (i, j) = (i % p.modes(), j % p.modes());
        prop_assume!(i != j);
        let (ni, nj) = (o.count(i), o.count(j));
        let s = FockState::monomial(o);
        let mut t = s.clone();
        for _ in 0..nj {
            t = t.transition(i, j);
        }
        for _ in 0..ni {
            t = t.transition(j, i);
        }
        let fact: Rat = (1..=(ni + nj) as i64).map(Rat::from).product();
        prop_assert_eq!(t.scale_rat(&fact.recip().unwrap()), s.exchange(i, j).unwrap());
    }

    #[test]
    fn total_number_counts_quanta((p, o) in setup(5)) {
        let n = o.degree() as i64;
        let s = FockState::monomial(o);
        let mut total = zero(&p);
        for i in 0..p.modes() {
            total = &total + &s.transition(i, i);
        }
        prop_assert_eq!(total, s.scale(&NuScalar::from_int(n)));
    }

    #[test]
    fn hamiltonian_is_degree_plus_ground_energy((p, o) in setup(4)) {
        let n = o.degree() as i64;
        let s = FockState::monomial(o);
        let mut h = zero(&p);
        for i in 0..p.modes() {
            h = &h + &p.annihilate(i, &s.create(i));
            h = &h + &p.annihilate(i, &s).create(i);
        }
        let energy = &NuScalar::from_int(n) + &p.ground_energy();
        prop_assert_eq!(h.scale_rat(&Rat::new(1, 2)), s.scale(&energy));
    }

    #[test]
    fn relabeling_commutes((p, o) in setup(4), seed in any::<u64>(), i in 0usize..4) {
        let m = p.modes();
        let i = i % m;
        // a permutation from the seed
        let mut perm: Vec<usize> = (0..m).collect();
        let mut x = seed;
        for k in (1..m).rev() {
            perm.swap(k, (x % (k as u64 + 1)) as usize);
            x /= k as u64 + 1;
        }
        let s = FockState::monomial(o.clone());
        prop_assert_eq!(p.annihilate(perm[i], &s.relabeled(&perm)), p.annihilate(i, &s).relabeled(&perm));
        prop_assert_eq!(s.create(i).relabeled(&perm), s.relabeled(&perm).create(perm[i]));
        let bra = o.mode_sequence();
        let bra_perm = ModeSequence::new(bra.indices().iter().map(|&k| perm[k]).collect());
        for ket in [o.swapped(0, 1), o.clone()] {
            let ket = FockState::monomial(ket);
            prop_assert_eq!(p.inner_product(&bra, &ket), p.inner_product(&bra_perm, &ket.relabeled(&perm)));
        }
    }

    #[test]
    fn inner_product_is_symmetric((p, o) in setup(4), seed in any::<u64>()) {
        let m = p.modes();
        let mut v = vec![0u32; m];
        let mut x = seed;
        for _ in 0..o.degree() {
            v[(x % m as u64) as usize] += 1;
            x /= m as u64;
        }
        let other = Occupation::new(v);
        let lhs = p.inner_product(&o.mode_sequence(), &FockState::monomial(other.clone()));
        let rhs = p.inner_product(&other.mode_sequence(), &FockState::monomial(o));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn vacuum_conditions() {
    for m in 1..=5 {
        let p = params(m, None);
        let vac = FockState::vacuum(m);
        for i in 0..m {
            assert!(p.annihilate(i, &vac).is_zero());
            for j in (0..m).filter(|&j| j != i) {
                assert_eq!(p.annihilate(i, &vac.create(j)), vac.scale(&-p.nu()));
                assert_eq!(vac.exchange(i, j).unwrap(), vac);
            }
        }
    }
}
