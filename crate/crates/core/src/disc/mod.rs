//! Fundamental discriminants, Kronecker symbols and the unramified
//! Q8 / D4 counts attached to 3-part discriminant factorizations.
//!
//! Counts are exact: symmetry factors are divided out as rationals and
//! integrality is checked, never approximated.

mod factor;
mod sieve;

pub(crate) use sieve::check_restricted_parts;

use alloc::vec::Vec;
use core::fmt;

use crate::arith::prime_factors;
use crate::error::bail;
use crate::Result;

pub use factor::{
    d4_condition, d4_count, d4_count_with, enumerate_3factorizations, eq1_indicator, eq1_indicator_with, eq2_count,
    is_q8_factorization, q8_count, q8_count_with, DiscFactorization3, Parity, Q8CountResult, D4_SYMMETRY,
};
pub use sieve::{
    count_compositum_twists, restricted_sum, restricted_term_numerator, sieve_moments, sieve_moments_with, sieve_range,
    twist_density_constant, CountKernel, MomentGroup, MomentSeries, RangeTotals, SieveConfig, SIEVE_BOUND,
};

/// Sign of a discriminant: real (`Positive`) or imaginary (`Negative`) quadratic fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(v: i64) -> Sign {
        if v < 0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn apply(self, n: u64) -> i64 {
        match self {
            Sign::Positive => n as i64,
            Sign::Negative => -(n as i64),
        }
    }

    /// Number of orderings of a 3-part factorization compatible with the
    /// negative part sitting first: 2 for imaginary fields, 6 for real ones.
    pub fn delta(self) -> u64 {
        match self {
            Sign::Positive => 6,
            Sign::Negative => 2,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "pos",
            Sign::Negative => "neg",
        })
    }
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
pub fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(a/n)`, with `(a/2)` given by `a mod 8` and
/// `(a/-1)` by the sign of `a`.
pub fn kronecker(a: i64, n: i64) -> Result<i32> {
    if a == 0 && n == 0 {
        bail!(Domain, "the Kronecker symbol (0/0) is undefined");
    }
    Ok(kron(a, n))
}

pub(crate) fn kron(a: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(a == 1 || a == -1);
    }
    let mut sign = 1;
    if n < 0 && a < 0 {
        sign = -1;
    }
    let mut m = n.unsigned_abs();
    let v = m.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        m >>= v;
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    sign * jacobi(a, m)
}

pub(crate) fn is_squarefree(n: u64) -> bool {
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Whether `d` is the discriminant of a quadratic field.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// The prime discriminant `±p ≡ 1 mod 4` attached to an odd prime.
pub fn odd_prime_discriminant(p: u64) -> i64 {
    if p % 4 == 1 {
        p as i64
    } else {
        -(p as i64)
    }
}

/// A validated quadratic field discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FundamentalDiscriminant(i64);

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            bail!(Validation, "{d} is not a fundamental discriminant");
        }
        Ok(FundamentalDiscriminant(d))
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> u64 {
        self.0.unsigned_abs()
    }

    pub fn sign(self) -> Sign {
        Sign::of(self.0)
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 != 0
    }

    /// Number of distinct rational primes dividing `d`, 2 included.
    pub fn omega(self) -> u32 {
        prime_factors(self.abs()).len() as u32
    }

    /// The prime discriminants whose product is `d`, ordered by prime.
    pub fn prime_discriminants(self) -> Vec<i64> {
        let mut out = Vec::new();
        let mut odd_product = 1i64;
        for p in prime_factors(self.abs()) {
            if p != 2 {
                let ps = odd_prime_discriminant(p);
                odd_product *= ps;
                out.push(ps);
            }
        }
        if self.0 % 2 == 0 {
            // the quotient is one of -4, 8, -8
            out.insert(0, self.0 / odd_product);
        }
        out
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Fundamental discriminants of one sign with `|D| <= x`, ascending by `|D|`.
pub fn enumerate_fundamental(x: u64, sign: Sign) -> impl Iterator<Item = FundamentalDiscriminant> {
    (3..=x).map(move |n| sign.apply(n)).filter(|&d| is_fundamental(d)).map(FundamentalDiscriminant)
}

pub fn prime_discriminant_factorization(d: FundamentalDiscriminant) -> Vec<i64> {
    d.prime_discriminants()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 5), Ok(1));
        assert_eq!(kronecker(8, 3), Ok(-1));
        assert_eq!(kronecker(15, 5), Ok(0));
        assert!(kronecker(0, 0).is_err());
        assert_eq!(kronecker(5, 2), Ok(-1));
        assert_eq!(kronecker(-7, 2), Ok(1));
        assert_eq!(kronecker(-3, -1), Ok(-1));
        assert_eq!(kronecker(3, 0), Ok(0));
    }

    #[test]
    fn jacobi_against_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            for a in -30i64..30 {
                let e = crate::arith::pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let expect = match e {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(jacobi(a, p), expect, "({a}/{p})");
            }
        }
    }

    #[test]
    fn fundamental_examples() {
        assert!(is_fundamental(-3));
        assert!(is_fundamental(-4));
        assert!(!is_fundamental(9));
        assert!(!is_fundamental(1));
        let neg: Vec<i64> = enumerate_fundamental(20, Sign::Negative).map(|d| d.value()).collect();
        assert_eq!(neg, vec![-3, -4, -7, -8, -11, -15, -19, -20]);
    }

    #[test]
    fn prime_discriminants_multiply_back() {
        let d = FundamentalDiscriminant::new(-84).unwrap();
        assert_eq!(d.prime_discriminants(), vec![-4, -3, -7]);
        assert_eq!(FundamentalDiscriminant::new(5).unwrap().prime_discriminants(), vec![5]);
        assert_eq!(FundamentalDiscriminant::new(-8).unwrap().prime_discriminants(), vec![-8]);
        for d in enumerate_fundamental(2000, Sign::Positive).chain(enumerate_fundamental(2000, Sign::Negative)) {
            let parts = d.prime_discriminants();
            assert_eq!(parts.iter().product::<i64>(), d.value());
            assert!(parts.iter().all(|&p| is_fundamental(p)));
        }
    }
}
