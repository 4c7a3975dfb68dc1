//! Randomized property suites with a fixed seed, shared by the
//! `properties` and `acceptance` targets.

use autbound_core::arith::{find_reduction_prime, Cyclo};
use autbound_core::bounds::{
    bound_b, max_exceptional_degree, max_exceptional_degree_scan, partitions, Partition,
};
use autbound_core::group::{CycloMatrix, GeneratedGroup};
use autbound_core::invariant::{invariant_dimension, reynolds_basis, InvariantOptions};
use autbound_core::poly::{act, is_invariant, HomogPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use std::collections::BTreeSet;

const SEED: [u8; 32] = *b"autbound-property-suite-seed-001";

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>)
where
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED));
    if let Err(e) = runner.run(&strategy, test) {
        panic!("{e}");
    }
}

const CONDUCTORS: [u32; 7] = [3, 4, 5, 7, 8, 12, 15];

fn cyclo_in(m: u32) -> impl Strategy<Value = Cyclo> {
    let deg = autbound_core::arith::euler_phi(m);
    (
        proptest::collection::vec(-9i64..=9, deg),
        1i64..=6,
    )
        .prop_map(move |(nums, den)| {
            let coeffs: Vec<BigRational> = nums
                .into_iter()
                .map(|n| BigRational::new(BigInt::from(n), BigInt::from(den)))
                .collect();
            Cyclo::from_power_coeffs(m, &coeffs)
        })
}

fn three_elements() -> impl Strategy<Value = (Cyclo, Cyclo, Cyclo)> {
    proptest::sample::select(CONDUCTORS.to_vec())
        .prop_flat_map(|m| (cyclo_in(m), cyclo_in(m), cyclo_in(m)))
}

pub fn field_axioms() {
    run(160, three_elements(), |(a, b, c)| {
        let m = a.conductor();
        let zero = Cyclo::zero(m);
        let one = Cyclo::one(m);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert!((&a * &inv).is_one());
        }
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        Ok(())
    });
}

pub fn reduction_is_a_ring_homomorphism() {
    run(160, three_elements(), |(a, b, _)| {
        let map = find_reduction_prime(a.conductor(), 10_007);
        let p = map.prime();
        let ra = map.reduce(&a).unwrap();
        let rb = map.reduce(&b).unwrap();
        prop_assert_eq!(map.reduce(&(&a + &b)).unwrap(), (ra + rb) % p);
        prop_assert_eq!(map.reduce(&(&a - &b)).unwrap(), (ra + p - rb) % p);
        prop_assert_eq!(
            map.reduce(&(&a * &b)).unwrap(),
            (ra as u128 * rb as u128 % p as u128) as u64
        );
        prop_assert_eq!(map.reduce(&Cyclo::one(a.conductor())).unwrap(), 1);
        prop_assert_eq!(map.reduce(&Cyclo::zeta(a.conductor(), 1)).unwrap(), map.root());
        Ok(())
    });
}

/// Invertible 3x3 matrices: a signed permutation times a unipotent integer
/// matrix, all over Q(ζ_4) with a root-of-unity diagonal.
fn invertible_matrix() -> impl Strategy<Value = CycloMatrix> {
    (
        Just(vec![0usize, 1, 2]).prop_shuffle(),
        proptest::collection::vec(0i64..4, 3),
        proptest::collection::vec(-2i64..=2, 3),
    )
        .prop_map(|(perm, powers, upper)| {
            let diag: Vec<Cyclo> = powers.iter().map(|&k| Cyclo::zeta(4, k)).collect();
            let mono = CycloMatrix::permutation(&perm).mul(&CycloMatrix::diagonal(&diag));
            let z = |v: i64| Cyclo::from_int(4, v);
            let unip = CycloMatrix::from_rows(vec![
                vec![z(1), z(upper[0]), z(upper[1])],
                vec![z(0), z(1), z(upper[2])],
                vec![z(0), z(0), z(1)],
            ])
            .unwrap();
            mono.mul(&unip)
        })
}

fn cubic_form() -> impl Strategy<Value = HomogPoly> {
    proptest::collection::vec((0u32..=3, 0u32..=3, -5i64..=5), 1..6).prop_filter_map(
        "nonzero cubic",
        |terms| {
            let terms: Vec<(Vec<u32>, Cyclo)> = terms
                .into_iter()
                .filter(|(a, b, _)| a + b <= 3)
                .map(|(a, b, c)| (vec![a, b, 3 - a - b], Cyclo::from_int(1, c)))
                .collect();
            HomogPoly::new(3, 3, terms).ok()
        },
    )
}

pub fn action_composes() {
    run(
        120,
        (invertible_matrix(), invertible_matrix(), cubic_form()),
        |(g, h, f)| {
            let gh = g.mul(&h);
            let lhs = act(&gh, &f).unwrap();
            let rhs = act(&g, &act(&h, &f).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let id = CycloMatrix::identity(3, 4);
            prop_assert_eq!(act(&id, &f).unwrap(), f);
            Ok(())
        },
    );
}

/// Groups generated by one or two monomial matrices whose nonzero entries
/// are 4th or 6th roots of unity, in 2 or 3 variables.
fn monomial_group() -> impl Strategy<Value = GeneratedGroup> {
    (2usize..=3, prop_oneof![Just(4u32), Just(6u32)], 1usize..=2)
        .prop_flat_map(|(n, m, count)| {
            let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
            let gen = (perm, proptest::collection::vec(0i64..m as i64, n));
            (Just(m), proptest::collection::vec(gen, count))
        })
        .prop_map(|(m, gens)| {
            let mats = gens
                .into_iter()
                .map(|(perm, powers)| {
                    let diag: Vec<Cyclo> = powers.iter().map(|&k| Cyclo::zeta(m, k)).collect();
                    CycloMatrix::permutation(&perm).mul(&CycloMatrix::diagonal(&diag))
                })
                .collect();
            GeneratedGroup::new(mats).unwrap()
        })
}

pub fn molien_matches_reynolds() {
    let opts = InvariantOptions::default();
    run(100, (monomial_group(), 1u32..=4), |(g, k)| {
        let dim = invariant_dimension(&g, k, &opts).unwrap();
        let basis = reynolds_basis(&g, k, &opts).unwrap();
        prop_assert_eq!(basis.len() as u64, dim);
        for f in &basis {
            prop_assert!(is_invariant(g.generators(), f).unwrap());
        }
        Ok(())
    });
}

fn partition_of(max_total: u32) -> impl Strategy<Value = Partition> {
    proptest::collection::vec(1u32..=max_total, 1..=4).prop_map(Partition::new).prop_map(Result::unwrap)
}

fn block_set(p: &Partition) -> BTreeSet<u32> {
    p.blocks().iter().copied().collect()
}

pub fn concatenation_inequality() {
    run(200, (partition_of(9), partition_of(9), 3u32..=12), |(a, b, d)| {
        let lhs = bound_b(&a, d).unwrap() * bound_b(&b, d).unwrap();
        let rhs = bound_b(&a.concat(&b), d).unwrap();
        prop_assert!(lhs <= rhs);
        if block_set(&a).is_disjoint(&block_set(&b)) {
            prop_assert_eq!(lhs, rhs);
        }
        Ok(())
    });
}

pub fn concatenation_equality_on_disjoint_blocks() {
    // draws block sizes from disjoint ranges so the equality case is exercised
    run(
        100,
        (
            proptest::collection::vec(1u32..=4, 1..=4),
            proptest::collection::vec(5u32..=9, 1..=3),
            3u32..=12,
        ),
        |(x, y, d)| {
            let a = Partition::new(x).unwrap();
            let b = Partition::new(y).unwrap();
            let lhs = bound_b(&a, d).unwrap() * bound_b(&b, d).unwrap();
            prop_assert_eq!(lhs, bound_b(&a.concat(&b), d).unwrap());
            Ok(())
        },
    );
}

pub fn bound_ignores_block_order() {
    run(
        100,
        (proptest::collection::vec(1u32..=8, 1..=6), 3u32..=12).prop_flat_map(|(v, d)| {
            (Just(v.clone()), Just(v).prop_shuffle(), Just(d))
        }),
        |(v, shuffled, d)| {
            let a = Partition::new(v).unwrap();
            let b = Partition::new(shuffled).unwrap();
            prop_assert_eq!(bound_b(&a, d).unwrap(), bound_b(&b, d).unwrap());
            Ok(())
        },
    );
}

pub fn max_degree_closed_form_matches_scan() {
    for n in 2..=14 {
        for pi in partitions(n) {
            if let Ok(d) = max_exceptional_degree(&pi) {
                assert_eq!(Some(d), max_exceptional_degree_scan(&pi).ok(), "{pi}");
            }
        }
    }
}
