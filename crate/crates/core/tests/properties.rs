// SPDX-License-Identifier: Apache-2.0

//! Property tests for the invariants of each module.

mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rm_metric::boolfn::{apply_affine_substitution, parse_abbrev, run_script, BooleanFunction, TransformScript};
use rm_metric::classify15::{class_of, class_of_by_search, distance_rm15, tables};
use rm_metric::gf2linalg::{enumerate_invertible, gl_order, random_invertible, BitMatrix, BitVector, SymmetricMatrix};
use rm_metric::oracle;
use rm_metric::rmcodes::{
    covering_radius, distance_to_code, metric_complement, rm26_witness_distance, rm_code, second_complement_members,
    CosetSpace, DistanceMethod,
};
use rm_metric::syndrome::{is_t_maximal, t_of_s};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_script<R: Rng>(rng: &mut R, m: usize) -> TransformScript {
    let steps: Vec<String> = (0..rng.gen_range(1..=6))
        .map(|_| {
            let i = rng.gen_range(1..=m);
            let j = rng.gen_range(1..=m);
            match rng.gen_range(0..3) {
                0 if i != j => format!("{i}<->{j}"),
                1 if i != j => format!("{i}<-{i}+{j}"),
                _ => format!("{i}<-{i}+0"),
            }
        })
        .collect();
    TransformScript::parse(&steps.join(";")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parseval_and_affine_distance(seed: u64) {
        prop_assert_eq!(common::parseval(&mut rng(seed)), Ok(()));
    }

    #[test]
    fn moebius_round_trip(seed: u64) {
        prop_assert_eq!(common::moebius_round_trip(&mut rng(seed)), Ok(()));
    }

    #[test]
    fn factor_ops_keep_product(seed: u64) {
        prop_assert_eq!(common::factor_op(&mut rng(seed)), Ok(()));
    }

    #[test]
    fn block_form_biconditional(seed: u64) {
        prop_assert_eq!(common::block_form(&mut rng(seed)), Ok(()));
    }

    #[test]
    fn cofactor_transforms_by_leading_block(seed: u64) {
        prop_assert_eq!(common::cofactor_transform(&mut rng(seed)), Ok(()));
    }

    #[test]
    fn parity_extension_matches_brute_force(seed: u64) {
        prop_assert_eq!(common::parity_extension_rule(&mut rng(seed)), Ok(()));
    }

    #[test]
    fn rank_invariant_under_equivalence(seed: u64) {
        let mut r = rng(seed);
        let rows = r.gen_range(1..=8);
        let cols = r.gen_range(1..=8);
        let m = BitMatrix::from_fn(rows, cols, |_, _| r.gen());
        let p = random_invertible(rows, &mut r);
        let q = random_invertible(cols, &mut r);
        let pmq = p.mul(&m).unwrap().mul(&q).unwrap();
        prop_assert_eq!(pmq.rank(), m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn invert_exactly_when_full_rank(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=8);
        let m = BitMatrix::from_fn(n, n, |_, _| r.gen());
        match m.invert() {
            Ok(inv) => {
                prop_assert_eq!(m.rank(), n);
                prop_assert_eq!(inv.mul(&m).unwrap(), BitMatrix::identity(n));
            }
            Err(_) => prop_assert!(m.rank() < n),
        }
    }

    #[test]
    fn substitution_is_a_weight_preserving_bijection(seed: u64) {
        let mut r = rng(seed);
        let m = r.gen_range(1..=7);
        let a = random_invertible(m, &mut r);
        let b = BitVector::from_u64(m, r.gen::<u64>() & ((1 << m) - 1));
        let f = common::random_function(&mut r, m);
        let g = apply_affine_substitution(&f, &a, &b).unwrap();
        prop_assert_eq!(g.weight(), f.weight());
        // points map one to one: substituting indicator functions moves single points
        let mut seen = HashSet::new();
        for x in 0..(1u32 << m) {
            let point = BooleanFunction::from_fn(m, |y| y == x);
            let moved = apply_affine_substitution(&point, &a, &b).unwrap();
            prop_assert_eq!(moved.weight(), 1);
            seen.insert(moved.support()[0]);
        }
        prop_assert_eq!(seen.len(), 1 << m);
    }

    #[test]
    fn script_equals_composed_map(seed: u64) {
        let mut r = rng(seed);
        let m = r.gen_range(2..=6);
        let script = random_script(&mut r, m);
        let f = common::random_function(&mut r, m);
        let map = script.composed(m).unwrap();
        prop_assert_eq!(run_script(&f, &script).unwrap(), apply_affine_substitution(&f, &map.matrix, &map.shift).unwrap());
    }

    #[test]
    fn complement_radius_and_second_complement(seed: u64) {
        let mut r = rng(seed);
        let code = common::random_code(&mut r, 12);
        let n = code.len();
        let comp = metric_complement(&code).unwrap();
        let words = comp.expand().unwrap();
        prop_assert_eq!(oracle::covering_radius(n, &words).unwrap(), comp.radius);
        let members = second_complement_members(&code, &comp).unwrap();
        prop_assert!(members.contains(&0));
        let brute = oracle::metric_complement(n, &words).unwrap();
        for c in oracle::span(&code.generator_words().unwrap()) {
            prop_assert!(brute.binary_search(&c).is_ok());
        }
    }

    #[test]
    fn class_is_invariant_under_affine_maps(seed: u64) {
        let mut r = rng(seed);
        let t = tables().unwrap();
        let row = &t.table1[r.gen_range(0..t.table1.len())];
        let a = random_invertible(5, &mut r);
        let b = BitVector::from_u64(5, r.gen::<u64>() & 31);
        let moved = apply_affine_substitution(&row.representative.truth_table(), &a, &b).unwrap();
        let affine = common::random_anf(&mut r, 5, 1).truth_table();
        prop_assert_eq!(class_of(&moved.add(&affine).unwrap()).unwrap(), row.no);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn walsh_distance_matches_enumeration(m in 1usize..=5, bits: u64) {
        let n = 1usize << m;
        let v = if n == 64 { bits } else { bits & ((1 << n) - 1) };
        let code = rm_code(1, m).unwrap();
        let walsh = CosetSpace::with_method(&code, DistanceMethod::Walsh).unwrap().distance(v);
        let brute = oracle::distance_by_enumeration(v, &oracle::span(&code.generator_words().unwrap()));
        prop_assert_eq!(walsh, brute);
        prop_assert_eq!(distance_to_code(&BitVector::from_u64(n, v), &code).unwrap(), brute);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    // twenty codewords per pair: 10^3 triples in all
    #[test]
    fn uuv_superadditivity(seed: u64) {
        let mut r = rng(seed);
        let (y, w): (u32, u32) = (r.gen(), r.gen());
        let d = rm26_witness_distance(y, w);
        let rm25 = oracle::rm_generators(2, 5).unwrap();
        for _ in 0..20 {
            let u = rm25.iter().filter(|_| r.gen_bool(0.5)).fold(0u64, |acc, g| acc ^ g) as u32;
            let bound = (y ^ u).count_ones() + distance_rm15(&BooleanFunction::from_u64(5, u64::from(w ^ u))).unwrap();
            prop_assert!(d <= bound, "d = {} > {}", d, bound);
        }
    }
}

#[test]
fn enumerate_invertible_is_complete_and_distinct() {
    for m in 1..=3 {
        let all: Vec<_> = enumerate_invertible(m).unwrap().map(|a| a.to_bit_matrix()).collect();
        assert!(all.iter().all(BitMatrix::is_invertible));
        let distinct: HashSet<_> = all.iter().map(|a| format!("{a:?}")).collect();
        assert_eq!(distinct.len() as u128, gl_order(m));
        assert_eq!(all.len() as u128, gl_order(m));
    }
    let mut r = rng(7);
    for m in 4..=5 {
        for a in enumerate_invertible(m).unwrap().filter(|_| r.gen_bool(0.001)) {
            assert!(a.to_bit_matrix().is_invertible());
        }
    }
}

#[test]
fn t_bounds_maximality_and_minimal_factors() {
    for m in 1..=5 {
        for bits in 0..1u128 << SymmetricMatrix::packed_len(m) {
            let s = SymmetricMatrix::from_packed(m, bits);
            let (t, factor) = t_of_s(&s).unwrap();
            assert!(s.rank() <= t && t <= m + 1, "m={m} S={}", s.to_hex());
            assert!(factor.proper_subsets_independent(), "m={m} S={}", s.to_hex());
            assert_eq!(factor.gram(), s);
            assert_eq!(is_t_maximal(&s), t == m + 1 - m % 2, "m={m} S={}", s.to_hex());
        }
    }
}

#[test]
fn rm_m3_radii() {
    for (m, expected) in [(3, 4), (4, 6), (5, 6)] {
        assert_eq!(covering_radius(&rm_code(m - 3, m).unwrap()).unwrap(), expected, "m={m}");
    }
}

#[test]
fn complement_of_rm_m2_is_the_rest_of_the_even_code() {
    for m in 3..=5usize {
        let code = rm_code(m - 2, m).unwrap();
        let comp = metric_complement(&code).unwrap();
        let n = 1u32 << m;
        let reps = comp.representatives().unwrap();
        assert!(reps.iter().all(|r| r.count_ones() % 2 == 0), "m={m}");
        // |RM(m-1,m)| - |RM(m-2,m)| = 2^(n-1) - 2^(n-1-m)
        let expected = (1u128 << (n - 1)) - (1u128 << (n - 1 - m as u32));
        assert_eq!(comp.size(), expected, "m={m}");
    }
}

#[test]
fn search_agrees_with_orbit_table() {
    let mut r = rng(11);
    for _ in 0..4 {
        let f = loop {
            let f = common::random_function(&mut r, 5);
            if f.weight().is_multiple_of(2) {
                break f;
            }
        };
        assert_eq!(class_of_by_search(&f).unwrap(), class_of(&f).unwrap(), "{}", f.to_hex());
    }
    let rep = parse_abbrev("123+14+25", 5).unwrap().truth_table();
    assert_eq!(class_of_by_search(&rep).unwrap(), 22);
}
