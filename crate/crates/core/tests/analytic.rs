use std::f64::consts::PI;

use moments_core::analytic::*;
use moments_core::arith::prime_factors;
use moments_core::disc::{enumerate_fundamental, FundamentalDiscriminant, Sign};
use proptest::prelude::*;

fn fd(d: i64) -> FundamentalDiscriminant {
    FundamentalDiscriminant::new(d).unwrap()
}

#[test]
fn l_values_against_closed_forms() {
    let l4 = l_value_at_1(fd(-4), 1e-8).unwrap();
    assert!((l4.value - PI / 4.0).abs() < 1e-6);
    let l5 = l_value_at_1(fd(5), 1e-8).unwrap();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((l5.value - 2.0 / 5f64.sqrt() * golden.ln()).abs() < 1e-6);
    let l3 = l_value_at_1(fd(-3), 1e-8).unwrap();
    assert!((l3.value - PI / (3.0 * 3f64.sqrt())).abs() < 1e-6);
}

#[test]
fn character_sum_agrees_with_class_number_formula() {
    for d in enumerate_fundamental(500, Sign::Negative).chain(enumerate_fundamental(500, Sign::Positive)) {
        let a = l_value_at_1(d, 1e-9).unwrap();
        let b = l_value_class_number(d).unwrap();
        assert!(a.agrees_with(&b), "D = {d}: {a:?} vs {b:?}");
        let c = l_value_smoothed(d, 1e-10);
        assert!(a.agrees_with(&c), "D = {d}: {a:?} vs {c:?}");
    }
}

#[test]
fn l_value_rejects_large_or_bad_requests() {
    assert!(l_value_at_1(fd(-4), 0.0).is_err());
    let big = (L_VALUE_BOUND as i64 + 1..).find(|&d| moments_core::disc::is_fundamental(d)).unwrap();
    assert!(l_value_at_1(fd(big), 1e-3).is_err());
}

fn m_identity(n: u64, chi: RealCharacter, s: f64, cutoff: u64) -> (f64, f64) {
    let lhs = m_function(n, Sign::Positive, &chi, s, cutoff).unwrap()
        * m_function(n, Sign::Negative, &chi, s, cutoff).unwrap();
    let removed: f64 = prime_factors(n)
        .iter()
        .map(|&q| 1.0 / (1.0 + 2.0 * chi.value(q as i64) as f64 * (q as f64).powf(-s)))
        .product();
    (lhs, removed * squarefree_dirichlet_sum(&chi, s, cutoff))
}

#[test]
fn m_function_product_identity() {
    // tails of the squarefree sum: ~ log x / x at s = 2, ~ x^{-1/2} at s = 1.5
    for n in [3u64, 15, 39, 65] {
        let (lhs, rhs) = m_identity(n, RealCharacter::trivial(), 2.0, 1_000_000);
        assert!((lhs / rhs - 1.0).abs() < 1e-4, "n = {n}: {lhs} vs {rhs}");
        let chi = RealCharacter::new(-4).unwrap();
        let (lhs, rhs) = m_identity(n, chi, 1.5, 1_000_000);
        assert!((lhs / rhs - 1.0).abs() < 1e-2, "n = {n}: {lhs} vs {rhs}");
    }
}

const PAIRS: [(i64, i64, Sign); 6] = [
    (-3, 13, Sign::Negative),
    (-7, 5, Sign::Negative),
    (-11, 17, Sign::Negative),
    (5, 13, Sign::Positive),
    (5, 17, Sign::Positive),
    (-15, 13, Sign::Negative),
];

#[test]
fn residues_positive_and_bounded_below() {
    for (d1, d2, sign) in PAIRS {
        let r = residue_q8(d1, d2, sign, 100_000).unwrap();
        assert!(r.value > 0.0);
        let c = lower_bound_constant(sign, 100_000);
        let n = (d1 * d2).unsigned_abs() as f64;
        assert!(r.value >= c * r.l_value.value / n, "({d1}, {d2})");
        assert!(residue_q8_derived(d1, d2, sign, 100_000).unwrap().value > 0.0);
    }
}

#[test]
fn residue_stable_in_cutoff() {
    let a = residue_q8(-3, 13, Sign::Negative, 100_000).unwrap().value;
    let b = residue_q8(-3, 13, Sign::Negative, 1_000_000).unwrap().value;
    assert!((a / b - 1.0).abs() < 1e-5, "{a} vs {b}");
}

/// The derived residue tracks the partial sums closely at moderate `X`.
#[test]
fn derived_residue_tracks_partial_sums() {
    for (d1, d2, sign) in PAIRS[..3].iter().copied() {
        let c = tauberian_check(d1, d2, sign, 300_000, 100_000).unwrap();
        assert!(c.empirical >= 0.0);
        assert!((c.derived_ratio - 1.0).abs() < 0.1, "({d1}, {d2}): {c:?}");
    }
    assert!(tauberian_check(-3, 13, Sign::Negative, 50_000, 1000).is_err());
}

#[test]
fn d4_symbol_sum_for_split_primes() {
    // d2 ≡ 1 mod 4·d1 forces both symbols to be 1
    for (d1, d2) in [(5i64, 41i64), (5, 61), (13, 53), (17, 137)] {
        assert_eq!(d4_symbol_sum(d1, d2), 4, "({d1}, {d2})");
    }
    let s = d4_symbol_sum(5, 13);
    assert_eq!(s, 0);
    assert_eq!(residue_d4(5, 13, Sign::Positive).unwrap().value, 0.0);
}

#[test]
fn gh_probe_grows() {
    let sums = gh_partial_sums(&[1000, 10_000, 30_000]).unwrap();
    assert!(sums.windows(2).all(|w| w[1].1 > w[0].1));
    assert!((gh_divergence_probe(10_000).unwrap() - sums[1].1).abs() < 1e-9);
    assert!(gh_divergence_probe(GH_BOUND + 1).is_err());
}

proptest! {
    #[test]
    fn characters_multiplicative_and_periodic(i in 0usize..300, a in 1i64..5000, b in 1i64..5000) {
        let ds: Vec<_> = enumerate_fundamental(1000, Sign::Negative).chain(enumerate_fundamental(1000, Sign::Positive)).collect();
        let d = ds[i % ds.len()];
        let chi = RealCharacter::new(d.value()).unwrap();
        prop_assert_eq!(chi.value(a * b), chi.value(a) * chi.value(b));
        prop_assert_eq!(chi.value(a), chi.value(a + d.abs() as i64));
        prop_assert_eq!(chi.value(a) == 0, moments_core::arith::gcd(a as u64, d.abs()) > 1);
    }

    #[test]
    fn euler_product_monotone_for_positive_factors(c1 in 100u64..2000, extra in 1u64..2000) {
        let chi = RealCharacter::trivial();
        let a = truncated_euler_product(2, &chi, 2.0, c1).unwrap().value;
        let b = truncated_euler_product(2, &chi, 2.0, c1 + extra).unwrap().value;
        prop_assert!(b >= a);
    }
}
