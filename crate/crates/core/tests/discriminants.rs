use moments_core::arith::{gcd, prime_factors};
use moments_core::disc::*;
use num_rational::Ratio;
use proptest::prelude::*;

fn odd_fundamental() -> impl Strategy<Value = FundamentalDiscriminant> {
    (3i64..200_000, any::<bool>()).prop_filter_map("fundamental and odd", |(n, neg)| {
        let d = if neg { -n } else { n };
        (d % 2 != 0).then(|| FundamentalDiscriminant::new(d).ok()).flatten()
    })
}

/// Euler's criterion on each prime of `n`, independent of the reciprocity loop.
fn jacobi_by_euler(a: i64, n: u64) -> i32 {
    let mut r = 1;
    let mut m = n;
    for p in prime_factors(n) {
        while m.is_multiple_of(p) {
            m /= p;
            let e = moments_core::arith::pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
            r *= match e {
                0 => 0,
                1 => 1,
                _ => -1,
            };
        }
    }
    r
}

proptest! {
    #[test]
    fn kronecker_multiplicative_in_both_arguments(a in -500i64..500, b in -500i64..500, n in 1i64..2000, m in 1i64..2000) {
        prop_assume!(a != 0 && b != 0);
        prop_assert_eq!(kronecker(a * b, n).unwrap(), kronecker(a, n).unwrap() * kronecker(b, n).unwrap());
        prop_assert_eq!(kronecker(a, n * m).unwrap(), kronecker(a, n).unwrap() * kronecker(a, m).unwrap());
    }

    #[test]
    fn jacobi_matches_euler_factorwise(a in -10_000i64..10_000, k in 0u64..5000) {
        let n = 2 * k + 1;
        prop_assert_eq!(jacobi(a, n), jacobi_by_euler(a, n));
    }

    #[test]
    fn quadratic_reciprocity(k in 1u64..5000, l in 1u64..5000) {
        let (m, n) = (2 * k + 1, 2 * l + 1);
        prop_assume!(gcd(m, n) == 1);
        let sign = if (m % 4 == 3) && (n % 4 == 3) { -1 } else { 1 };
        prop_assert_eq!(jacobi(m as i64, n) * jacobi(n as i64, m), sign);
    }

    #[test]
    fn q8_property_ignores_part_order(d in odd_fundamental()) {
        for f in enumerate_3factorizations(d) {
            let want = is_q8_factorization(&f);
            for parts in f.all_orderings() {
                let g = DiscFactorization3::new(parts).unwrap();
                prop_assert_eq!(is_q8_factorization(&g), want);
            }
        }
    }

    #[test]
    fn eq1_agrees_with_legendre_conditions(d in odd_fundamental()) {
        for f in enumerate_3factorizations(d) {
            prop_assert_eq!(eq1_indicator(&f).unwrap() == 1, is_q8_factorization(&f), "{:?}", f.parts());
        }
    }

    #[test]
    fn counts_are_integral_and_agree(d in odd_fundamental()) {
        let q = q8_count(d).unwrap();
        prop_assert!(q.count.is_integer());
        prop_assert_eq!(eq2_count(d).unwrap(), q.count);
        let d4 = d4_count(d).unwrap();
        prop_assert_eq!(Ratio::from_integer(d4), d4_count_with(d, Parity::OddOnly).unwrap());
    }

    #[test]
    fn multiplicity_is_product_over_parts(d in odd_fundamental()) {
        for f in enumerate_3factorizations(d) {
            let per_part: u64 = f.parts().iter().map(|&p| 1u64 << (prime_factors(p.unsigned_abs()).len() - 1)).product();
            prop_assert_eq!(f.multiplicity(Parity::OddOnly), Ratio::from_integer(per_part));
            prop_assert_eq!(per_part, 1u64 << (d.omega() - 3));
        }
    }
}

/// Independent Legendre-symbol check of the Q8 conditions on `(-3, 13, 61)`:
/// every prime of each part must be a residue of the product of the other two.
#[test]
fn q8_base_cases() {
    let parts = [-3i64, 13, 61];
    for (i, &p) in parts.iter().enumerate() {
        let q = p.unsigned_abs();
        let other: i64 = parts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).product();
        assert_eq!(jacobi_by_euler(other, q), 1, "({other}/{q})");
    }
    let d = FundamentalDiscriminant::new(-2379).unwrap();
    assert_eq!(q8_count(d).unwrap().integer_count(), Some(1));
    assert_eq!(q8_count(FundamentalDiscriminant::new(-7).unwrap()).unwrap().integer_count(), Some(0));
}

/// Summing the restricted terms over every ordered choice of the first two
/// parts recovers the full count.
#[test]
fn restricted_terms_recover_q8_count() {
    for sign in [Sign::Negative, Sign::Positive] {
        for d in enumerate_fundamental(30_000, sign).filter(|d| d.is_odd() && d.omega() >= 3).step_by(5) {
            let mut total = Ratio::from_integer(0u64);
            for f in enumerate_3factorizations(d) {
                for [d1, d2, d3] in f.all_orderings() {
                    if d2 < 0 || d3 < 0 || (sign == Sign::Positive && d1 < 0) {
                        continue;
                    }
                    total += Ratio::new(restricted_term_numerator(d1, d2, d3 as u64), 16 * sign.delta());
                }
            }
            assert_eq!(total, q8_count(d).unwrap().count, "D = {d}");
        }
    }
}

#[test]
fn restricted_sum_matches_term_enumeration() {
    let x = 200_000;
    let by_terms: u64 = (3..=x / 39)
        .step_by(2)
        .filter(|&m| gcd(m, 39) == 1 && prime_factors(m).iter().all(|&p| m % (p * p) != 0))
        .map(|m| restricted_term_numerator(-3, 13, m))
        .sum();
    assert_eq!(restricted_sum(-3, 13, Sign::Negative, x).unwrap(), Ratio::new(by_terms, 32));
}

#[test]
fn sieve_matches_direct_counts() {
    let x = 20_000;
    for sign in [Sign::Negative, Sign::Positive] {
        let (mut q8, mut d4, mut fields) = (0u64, 0u64, 0u64);
        for d in enumerate_fundamental(x, sign) {
            fields += 1;
            if d.is_odd() {
                q8 += q8_count(d).unwrap().integer_count().unwrap();
                d4 += d4_count(d).unwrap();
            }
        }
        let s = sieve_moments(MomentGroup::Q8, sign, x, &[]).unwrap();
        assert_eq!((s.numerators[0], s.denominators[0]), (q8, fields));
        let s = sieve_moments(MomentGroup::D4, sign, x, &[]).unwrap();
        assert_eq!((s.numerators[0], s.denominators[0]), (d4, fields));
    }
}

#[test]
fn sieve_num_fields_at_100() {
    for sign in [Sign::Negative, Sign::Positive] {
        let brute = (1..=100i64).map(|n| sign.apply(n as u64)).filter(|&d| is_fundamental(d)).count() as u64;
        for group in [MomentGroup::Q8, MomentGroup::D4] {
            assert_eq!(sieve_moments(group, sign, 100, &[]).unwrap().denominators, [brute]);
        }
    }
}

#[test]
fn moments_grow_across_checkpoints() {
    for group in [MomentGroup::Q8, MomentGroup::D4] {
        let s = sieve_moments(group, Sign::Negative, 1_000_000, &[10_000, 100_000]).unwrap();
        assert!(s.is_strictly_increasing(), "{group:?}: {:?}", s.moments());
    }
}

#[test]
fn twist_count_against_direct_enumeration() {
    let d = FundamentalDiscriminant::new(-3).unwrap();
    let x = 30_000;
    let direct = enumerate_fundamental(x / 3, Sign::Positive)
        .chain(enumerate_fundamental(x / 3, Sign::Negative))
        .filter(|a| gcd(a.abs(), 3) == 1)
        .count() as u64;
    assert_eq!(count_compositum_twists(d, x), direct);
}
