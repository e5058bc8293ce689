//! Randomized invariants.

mod common;

use common::{int_scalar, matrix_with, naive_eval, naive_mul, scalar, small_square, square, word_expr};
use proptest::prelude::*;
use tropid::dominance::{
    cycle_criterion, dominantize, is_dominant, potentials_for_nonneg, CycleCheck, DominanceParams,
    Dominantized, PotentialsOutcome,
};
use tropid::factor3::factor_rank2;
use tropid::harness::{run_suite, GenConfig, Suite};
use tropid::permanent::{compose, permanent_with_witnesses, sign_singular};
use tropid::tropcore::{parse_matrix, Potentials};
use tropid::words::first_difference;
use tropid::TropScalar;

fn potentials(n: usize) -> impl Strategy<Value = Potentials> {
    proptest::collection::vec(scalar(), n).prop_map(Potentials)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalar_arithmetic_matches_big_rationals(a in scalar(), b in scalar()) {
        prop_assert_eq!((&a + &b).to_big(), a.to_big() + b.to_big());
        prop_assert_eq!((&a - &b).to_big(), a.to_big() - b.to_big());
        prop_assert_eq!(a.cmp(&b), a.to_big().cmp(&b.to_big()));
        prop_assert_eq!(a.to_string().parse::<TropScalar>().unwrap(), a);
    }

    #[test]
    fn associativity((n, a, b, c) in (1usize..=5).prop_flat_map(|n| (Just(n), square(n), square(n), square(n)))) {
        let _ = n;
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
    }

    #[test]
    fn rectangular_associativity(
        a in matrix_with(3, 2, scalar()),
        b in matrix_with(2, 4, scalar()),
        c in matrix_with(4, 1, scalar()),
    ) {
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn similarity_is_an_automorphism(
        (a, b, s) in (1usize..=5).prop_flat_map(|n| (square(n), square(n), potentials(n)))
    ) {
        let lhs = a.mul(&b).unwrap().similarity(&s).unwrap();
        let rhs = a.similarity(&s).unwrap().mul(&b.similarity(&s).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.similarity(&s).unwrap().diagonal(), a.diagonal());
    }

    #[test]
    fn hadamard_is_commutative_and_idempotent((a, b) in (1usize..=4).prop_flat_map(|n| (square(n), square(n)))) {
        prop_assert_eq!(a.hadamard_min(&b).unwrap(), b.hadamard_min(&a).unwrap());
        prop_assert_eq!(a.hadamard_min(&a).unwrap(), a);
    }

    #[test]
    fn power_matches_repeated_product(a in small_square(3), k in 1u64..=64) {
        let mut naive = a.clone();
        for _ in 1..k {
            naive = naive.mul(&a).unwrap();
        }
        prop_assert_eq!(a.pow(k).unwrap(), naive);
    }

    #[test]
    fn text_round_trip(a in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix_with(r, c, scalar()))) {
        prop_assert_eq!(parse_matrix(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn permanent_multiplicativity(
        (a, b) in (1usize..=4).prop_flat_map(|n| (matrix_with(n, n, int_scalar(6)), matrix_with(n, n, int_scalar(6))))
    ) {
        let ab = permanent_with_witnesses(&a.mul(&b).unwrap()).unwrap();
        let pa = permanent_with_witnesses(&a).unwrap();
        let pb = permanent_with_witnesses(&b).unwrap();
        // perm(AB) <= perm(A) + perm(B) always; equality and composition when AB is sign-nonsingular
        prop_assert!(ab.value <= &pa.value + &pb.value);
        if !ab.sign_singular {
            prop_assert_eq!(&ab.value, &(&pa.value + &pb.value));
            prop_assert!(!pa.sign_singular && !pb.sign_singular);
            for s in &pa.witnesses {
                for t in &pb.witnesses {
                    prop_assert!(ab.contains(&compose(t, s).unwrap()));
                }
            }
        }
    }

    #[test]
    fn power_identity(a in (1usize..=3).prop_flat_map(|n| matrix_with(n, n, int_scalar(5)))) {
        let k: u64 = (1..=a.rows() as u64).product();
        let rep = permanent_with_witnesses(&a.pow(k).unwrap()).unwrap();
        prop_assert!(rep.sign_singular || rep.contains_identity());
    }

    #[test]
    fn potentials_are_certificates(
        m in (1usize..=5).prop_flat_map(|n| matrix_with(n, n, int_scalar(8)))
    ) {
        match potentials_for_nonneg(&m).unwrap() {
            PotentialsOutcome::Found { potentials } => {
                let out = m.similarity(&potentials).unwrap();
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        if i != j {
                            prop_assert!(!out.get(i, j).is_negative());
                        }
                    }
                }
                // with the off-diagonal arcs fine, a negative diagonal entry would be a negative loop
                prop_assert!(m.diagonal().iter().all(|d| !d.is_negative()));
            }
            PotentialsOutcome::NoSolution { cycle } => {
                prop_assert!(cycle.weight.is_negative());
                let v = &cycle.vertices;
                let w: TropScalar = (0..v.len()).map(|l| m.get(v[l], v[(l + 1) % v.len()]).clone()).sum();
                prop_assert_eq!(w, cycle.weight);
            }
        }
    }

    #[test]
    fn dominantize_is_sound(
        (c, hv) in ((1usize..=4).prop_flat_map(|n| matrix_with(n, n, int_scalar(20))), 1i64..=4)
    ) {
        let h = DominanceParams::from_int(hv).unwrap();
        match dominantize(&c, &h).unwrap() {
            Dominantized::Normalized { potentials, matrix } => {
                prop_assert!(is_dominant(&matrix, &h).unwrap());
                prop_assert_eq!(c.similarity(&potentials).unwrap(), matrix);
            }
            Dominantized::Violated { witness } => {
                prop_assert!(witness.cycle_sum < witness.bound);
                prop_assert!(cycle_criterion(&c, &h).unwrap() != CycleCheck::Pass);
            }
        }
    }

    #[test]
    fn stream_count_equals_length(w in word_expr()) {
        prop_assert_eq!(w.expand_stream().count() as u64, w.len());
        prop_assert_eq!(w.to_letters().len() as u64, w.len());
    }

    #[test]
    fn dag_eval_matches_naive(w in word_expr(), a in square(2), b in square(2)) {
        prop_assert_eq!(w.eval(&a, &b).unwrap(), naive_eval(&w, &a, &b));
    }

    #[test]
    fn substitution_commutes_with_expansion(w in word_expr(), u in word_expr(), v in word_expr()) {
        let sub = w.substitute(&u, &v);
        let want: String = w
            .to_letters()
            .chars()
            .map(|c| if c == 'x' { u.to_letters() } else { v.to_letters() })
            .collect();
        prop_assert_eq!(sub.to_letters(), want);
    }

    #[test]
    fn first_difference_matches_strings(a in word_expr(), b in word_expr()) {
        let (sa, sb) = (a.to_letters(), b.to_letters());
        let want = sa.bytes().zip(sb.bytes()).position(|(x, y)| x != y).map(|p| p as u64);
        let want = want.or_else(|| (sa.len() != sb.len()).then(|| sa.len().min(sb.len()) as u64));
        prop_assert_eq!(first_difference(&a, &b), want);
    }

    #[test]
    fn factor_round_trip(
        p in matrix_with(3, 2, scalar()),
        q in matrix_with(2, 3, scalar()),
    ) {
        let a = p.mul(&q).unwrap();
        prop_assert!(sign_singular(&a).unwrap());
        let f = factor_rank2(&a).unwrap().expect("rank-2 product must factor");
        prop_assert_eq!(f.product(), a);
        for k in 0..2 {
            prop_assert_eq!(f.p.column(k).into_iter().min().unwrap(), TropScalar::ZERO);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reports_are_deterministic(seed in any::<u64>(), idx in 0usize..Suite::ALL.len()) {
        let suite = Suite::ALL[idx];
        let cfg = GenConfig { seed, trials: 40, ..suite.default_config() };
        let a = run_suite(suite, &cfg, None).unwrap().without_timing();
        let b = run_suite(suite, &cfg, None).unwrap().without_timing();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
