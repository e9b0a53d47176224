mod common;

use common::*;
use kmss::gcm::{GeneralizedCartanMatrix, IndexSet, Realization, DEFAULT_GROUP_CAP};
use kmss::holim::{
    build_complex, cohomology, group_cohomology_weyl, lim_of_invariants, lim_of_invariants_over, Coefficients,
    FunctorPresentation, PrimePower,
};
use kmss::invariants::{invariant_lattice, molien_series, sym_action, weyl_invariants, SymPower};
use kmss::linalg::{invariant_factors, IntMatrix, Lattice};
use kmss::poset::FinitePoset;
use kmss::sseq::uct_consistency_complex;
use num_integer::binomial;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn molien_ints(real: &Realization, j: IndexSet, max: usize) -> Vec<i64> {
    molien_series(real, j, max, DEFAULT_GROUP_CAP)
        .unwrap()
        .into_iter()
        .map(|x| {
            assert!(x.is_integer());
            i64::try_from(x.to_integer()).unwrap()
        })
        .collect()
}

#[test]
fn a2_molien_matches_trace_oracle() {
    let rows = vec![vec![2, -1], vec![-1, 2]];
    let group = matrix_group(&reflections_for_invertible(&rows), 100).unwrap();
    assert_eq!(molien_by_traces(&group, 6), vec![1, 0, 1, 1, 1, 1, 2]);
    let real = Realization::new(&GeneralizedCartanMatrix::validate(&rows).unwrap());
    assert_eq!(molien_ints(&real, IndexSet::full(2), 6), vec![1, 0, 1, 1, 1, 1, 2]);
}

#[test]
fn molien_agrees_with_oracle_on_finite_types() {
    for (name, rows, _) in finite_types() {
        let real = Realization::new(&GeneralizedCartanMatrix::validate(&rows).unwrap());
        let group = matrix_group(&reflections_for_invertible(&rows), 100).unwrap();
        assert_eq!(molien_ints(&real, IndexSet::full(rows.len()), 10), molien_by_traces(&group, 10), "{name}");
    }
}

/// Ranks of invariant lattices equal Molien dimensions for every spherical
/// subset of the test matrices, `m <= 8`.
#[test]
fn reynolds_consistency() {
    let mut cases: Vec<Vec<Vec<i64>>> = finite_types().into_iter().map(|c| c.1).collect();
    for fixture in [AFFINE, RANK3, HYPERBOLIC, AFFINE_A2] {
        cases.push(fixture.iter().map(|r| r.to_vec()).collect());
    }
    for rows in cases {
        let k = kmss::gcm::KacMoody::from_rows(&rows).unwrap();
        let max = if k.realization().rank() > 3 { 6 } else { 8 };
        for &j in k.poset().subsets() {
            let molien = molien_ints(k.realization(), j, max);
            for (m, &d) in molien.iter().enumerate() {
                let lattice = invariant_lattice(k.realization(), j, m).unwrap();
                assert_eq!(lattice.rank() as i64, d, "{rows:?} J = {j} m = {m}");
            }
        }
    }
}

#[test]
fn affine_molien_singleton() {
    let k = km(AFFINE);
    let molien = molien_ints(k.realization(), IndexSet::singleton(0), 6);
    for (m, d) in molien.into_iter().enumerate() {
        assert_eq!(invariant_lattice(k.realization(), IndexSet::singleton(0), m).unwrap().rank() as i64, d);
    }
}

#[test]
fn sym_dimension_and_trivial_group() {
    let k = km(RANK3);
    for m in 0..6 {
        let s = SymPower::new(3, m);
        assert_eq!(s.dimension() as u64, binomial(m as u64 + 2, 2));
        assert_eq!(invariant_lattice(k.realization(), IndexSet::EMPTY, m).unwrap().rank(), s.dimension());
    }
}

#[test]
fn lattices_are_saturated_and_monotone() {
    for fixture in [AFFINE, RANK3, HYPERBOLIC] {
        let k = km(fixture);
        for m in 0..=4 {
            let lattices: Vec<_> =
                k.poset().subsets().iter().map(|&j| invariant_lattice(k.realization(), j, m).unwrap()).collect();
            for l in &lattices {
                let divisors = invariant_factors(&l.basis().to_sparse());
                assert!(divisors.iter().all(|d| *d == 1.into()));
                for g in l.subset().iter() {
                    let action = sym_action(k.realization().weight_reflection(g), m).unwrap();
                    for b in l.lattice().basis() {
                        assert_eq!(&action.mul_vec(b).unwrap(), b);
                    }
                }
            }
            for a in &lattices {
                for b in &lattices {
                    if a.subset().is_subset_of(b.subset()) {
                        assert!(b.lattice().is_sublattice_of(a.lattice()));
                    }
                }
            }
            let w = weyl_invariants(k.realization(), m).unwrap();
            assert!(w.lattice().is_saturated());
        }
    }
}

#[test]
fn weyl_invariants_equal_full_invariants_for_finite_types() {
    for (name, rows, _) in finite_types() {
        let real = Realization::new(&GeneralizedCartanMatrix::validate(&rows).unwrap());
        for m in 0..=5 {
            assert_eq!(
                weyl_invariants(&real, m).unwrap().lattice(),
                invariant_lattice(&real, IndexSet::full(rows.len()), m).unwrap().lattice(),
                "{name} m = {m}"
            );
        }
    }
}

#[test]
fn affine_weyl_invariant_degree_one() {
    assert_eq!(weyl_invariants(km(AFFINE).realization(), 1).unwrap().rank(), 1);
}

fn pullback() -> FunctorPresentation {
    let poset = FinitePoset::from_subsets(&[0b00, 0b01, 0b10]);
    let two = IntMatrix::from_rows(&[[2]]);
    FunctorPresentation::new(poset, vec![1, 1, 1], [((0, 1), two.clone()), ((0, 2), two)]).unwrap()
}

#[test]
fn pullback_functor() {
    let c = build_complex(&pullback()).unwrap();
    let z = cohomology(&c, Coefficients::Integer).unwrap();
    assert_eq!(z.degree(0).free_rank, 1);
    assert_eq!(z.degree(1).free_rank, 0);
    assert_eq!(z.degree(1).torsion, vec![PrimePower { prime: 2, exponent: 1 }]);
    assert!(cohomology(&c, Coefficients::Rational).unwrap().degree(1).is_zero());
    // hand universal coefficients: F_2 sees the torsion twice
    let f2 = cohomology(&c, Coefficients::ModPrime(2)).unwrap();
    assert_eq!(f2.degree(0).free_rank, 2);
    assert_eq!(f2.degree(1).free_rank, 1);
    assert!(uct_consistency_complex(&c, 2).consistent);
}

#[test]
fn affine_lim_j2_and_chain_counts() {
    let k = km(AFFINE);
    let counts: Vec<usize> = (0..3).map(|d| k.poset().poset().chains(d).len()).collect();
    assert_eq!(counts, vec![3, 2, 0]);
    let h = lim_of_invariants_over(&k, 2, Coefficients::Rational, DEFAULT_GROUP_CAP).unwrap();
    assert_eq!((h.degree(0).free_rank, h.degree(1).free_rank), (1, 0));
    let f = kmss::holim::invariant_functor(&k, 1).unwrap();
    let c = build_complex(&f).unwrap();
    assert_eq!((c.dimension(0), c.dimension(1)), (7, 6));
}

#[test]
fn finite_type_lim_is_terminal_value() {
    for (name, rows, _) in finite_types() {
        let k = kmss::gcm::KacMoody::from_rows(&rows).unwrap();
        for j in (0..=8).step_by(2) {
            let h = lim_of_invariants(&k, 5, j, DEFAULT_GROUP_CAP).unwrap();
            let top = invariant_lattice(k.realization(), k.cartan().full_set(), j / 2).unwrap();
            assert_eq!(h.degree(0).free_rank, top.rank(), "{name} j = {j}");
            assert!(h.vanishes_above_zero(), "{name} j = {j}");
        }
    }
}

/// Finite groups away from their order: only invariants survive. The oracle
/// averages over the explicitly enumerated group.
#[test]
fn finite_group_cohomology_by_averaging() {
    for (name, rows, _) in finite_types().into_iter().take(5) {
        let k = kmss::gcm::KacMoody::from_rows(&rows).unwrap();
        let group = matrix_group(&reflections_for_invertible(&rows), 100).unwrap();
        for m in 0..=3usize {
            let gens: Vec<IntMatrix> =
                (0..rows.len()).map(|i| sym_action(k.realization().weight_reflection(i), m).unwrap()).collect();
            let h = group_cohomology_weyl(&k, &gens, 5, 3, DEFAULT_GROUP_CAP).unwrap();
            // rank of the averaging projector = trace / |G|
            let trace: i64 = group
                .iter()
                .map(|g| sym_action(&IntMatrix::from_rows(g), m).unwrap().trace())
                .sum();
            assert_eq!(h.degree(0).free_rank as i64 * group.len() as i64, trace, "{name} m = {m}");
            assert!(h.vanishes_above_zero());
        }
    }
}

#[test]
fn infinite_dihedral_trivial_coefficients() {
    let k = km(AFFINE);
    for q in [3, 5, 7] {
        let h = group_cohomology_weyl(&k, &[IntMatrix::identity(1), IntMatrix::identity(1)], q, 4, 1000).unwrap();
        assert_eq!(h.degree(0).free_rank, 1);
        assert!(h.vanishes_above_zero());
    }
    let err = group_cohomology_weyl(&k, &[IntMatrix::identity(1), IntMatrix::identity(1)], 2, 4, 1000);
    assert_eq!(err.unwrap_err().name(), "BadPrime");
}

fn check_functor(f: &FunctorPresentation) -> Result<(), TestCaseError> {
    let c = build_complex(f).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for d in 1..c.len().saturating_sub(1) {
        let sq = c.differential(d).checked_mul(&c.differential(d - 1)).unwrap();
        prop_assert!(sq.is_zero());
    }
    let d0 = c.differential(0).to_dense();
    let kernel = if d0.nrows() == 0 { Lattice::full(c.dimension(0)) } else { Lattice::kernel(&d0).unwrap() };
    prop_assert_eq!(kernel, equalizer(f));
    let q = cohomology(&c, Coefficients::Rational).unwrap();
    let euler: i64 = q.degrees.iter().enumerate().map(|(i, d)| if i % 2 == 0 { 1 } else { -1 } * d.free_rank as i64).sum();
    prop_assert_eq!(euler, c.euler_characteristic());
    for d in 0..c.len() {
        let m = c.differential(d).to_dense();
        prop_assert_eq!(invariant_factors(&m.to_sparse()).len(), rational_rank(&m));
        for p in [2i64, 3] {
            let f = cohomology(&c, Coefficients::ModPrime(p as u64)).unwrap();
            let expected = c.dimension(d) - rank_mod(&m, p) - if d > 0 { rank_mod(&c.differential(d - 1).to_dense(), p) } else { 0 };
            prop_assert_eq!(f.degree(d).free_rank, expected);
        }
    }
    for q in [2, 3] {
        prop_assert!(uct_consistency_complex(&c, q).consistent);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_functors(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check_functor(&random_functor(&mut rng))?;
    }
}
