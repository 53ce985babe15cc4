//! Partial quotients of √D checked against an independent oracle: the
//! expansions of the two rational endpoints of a dyadic enclosure of √D
//! agree on a prefix that every number in between shares.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::Zero;
use proptest::prelude::*;
use pscf_core::cf::{self, is_perfect_square, quality_bound_check, trace_identity_check};

/// Euclid on `num/den`, dropping the final quotient whose value is ambiguous.
fn rational_cf(mut num: BigInt, mut den: BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    while !den.is_zero() {
        let (q, r) = num.div_mod_floor(&den);
        out.push(q);
        num = den;
        den = r;
    }
    out.pop();
    out
}

/// At least `want` partial quotients of √D, certified by the enclosure
/// `N/2^K ≤ √D < (N + 1)/2^K`.
fn oracle_quotients(d: u64, want: usize) -> Vec<BigInt> {
    let mut k = 64u32;
    loop {
        let scaled = BigInt::from(d) << (2 * k);
        let n = scaled.sqrt();
        let den = BigInt::from(1) << k;
        let lo = rational_cf(n.clone(), den.clone());
        let hi = rational_cf(n + 1, den);
        let common: Vec<BigInt> = lo
            .iter()
            .zip(&hi)
            .take_while(|(a, b)| a == b)
            .map(|(a, _)| a.clone())
            .collect();
        if common.len() >= want {
            return common;
        }
        k *= 2;
    }
}

fn smallest_period(xs: &[BigInt]) -> usize {
    (1..=xs.len())
        .find(|&p| (p..xs.len()).all(|i| xs[i] == xs[i - p]))
        .unwrap()
}

fn check(d: u64) {
    let e = cf::sqrt_cf(&BigInt::from(d)).unwrap();
    let r = e.period_len();
    assert!(e.preperiod.is_empty(), "√{d} is purely periodic after a0");
    let want = 1 + 3 * r;
    let oracle = oracle_quotients(d, want);
    for (i, a) in oracle.iter().take(want).enumerate() {
        assert_eq!(e.quotient(i), a, "√{d}: quotient {i}");
    }
    // no shorter period fits three copies of the claimed one
    assert_eq!(smallest_period(&oracle[1..want]), r, "√{d}: period length");
}

#[test]
fn matches_oracle_for_small_radicands() {
    for d in 2..=600u64 {
        if !is_perfect_square(&BigInt::from(d)) {
            check(d);
        }
    }
}

#[test]
fn hand_checked_expansions() {
    let e = cf::sqrt_cf(&BigInt::from(33)).unwrap();
    assert_eq!(e.to_string(), "[5; | 1, 2, 1, 10]");
    let e = cf::sqrt_cf(&BigInt::from(94)).unwrap();
    assert_eq!(e.period_len(), 16);
}

#[test]
fn summary_agrees_with_full_expansion() {
    for d in (2..3000u64).step_by(7) {
        let big = BigInt::from(d);
        if is_perfect_square(&big) {
            continue;
        }
        let e = cf::sqrt_cf(&big).unwrap();
        let s = cf::exact_summary(&big, cf::DEFAULT_MAX_STEPS, 8, 1 << 12).unwrap();
        assert_eq!(s.a0, e.a0);
        assert_eq!(s.period_len, e.period_len());
        assert_eq!(s.last, *e.period.last().unwrap());
        assert_eq!(s.full.as_deref(), Some(&e.period[..]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn large_radicands_match_oracle(d in 2u64..(1 << 28)) {
        prop_assume!(!is_perfect_square(&BigInt::from(d)));
        let e = cf::sqrt_cf(&BigInt::from(d)).unwrap();
        let want = (1 + e.period_len()).min(400);
        let oracle = oracle_quotients(d, want);
        for (i, a) in oracle.iter().take(want).enumerate() {
            prop_assert_eq!(e.quotient(i), a);
        }
    }

    #[test]
    fn structure_of_sqrt_expansions(d in 2u64..2_000_000) {
        let big = BigInt::from(d);
        prop_assume!(!is_perfect_square(&big));
        let e = cf::sqrt_cf(&big).unwrap();
        let last = e.period.last().unwrap();
        prop_assert_eq!(last, &(&e.a0 * 2));
        let body = &e.period[..e.period.len() - 1];
        prop_assert!(body.iter().eq(body.iter().rev()), "palindromic body");
        prop_assert!(trace_identity_check(&e.a0, &e.period));
        for i in 0..=10 {
            prop_assert!(quality_bound_check(&big, &e, i));
        }
    }

    #[test]
    fn reduced_surds_are_purely_periodic(d in 2i64..5000, pick in 0usize..1000) {
        prop_assume!(!is_perfect_square(&BigInt::from(d)));
        let a0 = d.sqrt();
        // reduced: 0 < √D − P < Q < √D + P, with Q | D − P²
        let reduced: Vec<(i64, i64)> = (1..=a0)
            .flat_map(|p| (a0 - p + 1..=a0 + p).map(move |q| (p, q)))
            .filter(|&(p, q)| (d - p * p) % q == 0)
            .collect();
        let (p, q) = reduced[pick % reduced.len()];
        let x = cf::QuadSurd::new(BigInt::from(p), BigInt::from(q), BigInt::from(d)).unwrap();
        prop_assert!(x.is_reduced());
        let e = cf::surd_cf(&x, cf::DEFAULT_MAX_STEPS).unwrap();
        prop_assert!(e.preperiod.is_empty());
        prop_assert_eq!(e.period.last().unwrap(), &e.a0);
    }
}
