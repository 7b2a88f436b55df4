use alloc::vec::Vec;
use core::ops::{Add, AddAssign};

use num_rational::Ratio;

use super::factor::three_block_partitions;
use super::{jacobi, kron, FundamentalDiscriminant, Sign};
use crate::arith::{divisors, gcd, prime_factors, SpfTable};
use crate::error::bail;
use crate::Result;

/// Default largest `|D|` a sieve will cover; the factor table for it takes
/// about 40 MB.
pub const SIEVE_BOUND: u64 = 10_000_000;

/// Which unramified extensions a sieve sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentGroup {
    Q8,
    D4,
}

/// Q8 and D4 counts for odd discriminants from their prime factors.
///
/// Legendre symbols between the prime discriminants are packed into
/// bitmasks, so each 3-block partition is checked with a few popcounts.
#[derive(Debug, Clone, Default)]
pub struct CountKernel {
    partitions: Vec<Vec<[u32; 3]>>,
    neg: Vec<u32>,
}

impl CountKernel {
    pub fn new() -> Self {
        Self::default()
    }

    fn partitions(&mut self, k: usize) -> &[[u32; 3]] {
        while self.partitions.len() <= k {
            let n = self.partitions.len();
            let mut v = Vec::new();
            three_block_partitions(n, &mut |m| v.push(m));
            self.partitions.push(v);
        }
        &self.partitions[k]
    }

    /// `(q8_count, d4_count)` for the odd fundamental discriminant whose
    /// absolute value is the product of the distinct odd `primes`.
    pub fn counts(&mut self, primes: &[u32]) -> (u64, u64) {
        let k = primes.len();
        if k < 3 {
            return (0, 0);
        }
        assert!(k < 32, "too many prime factors");
        // neg[i]: primes j whose prime discriminant is a non-residue mod p_i
        self.neg.clear();
        let mut negative = 0u32;
        for (i, &pi) in primes.iter().enumerate() {
            if pi % 4 == 3 {
                negative |= 1 << i;
            }
            let mut m = 0u32;
            for (j, &pj) in primes.iter().enumerate() {
                if i != j && jacobi(super::odd_prime_discriminant(pj as u64), pi as u64) == -1 {
                    m |= 1 << j;
                }
            }
            self.neg.push(m);
        }
        let neg = core::mem::take(&mut self.neg);
        let parity_ok = |i: usize, block: u32| (neg[i] & block).count_ones().is_multiple_of(2);
        let pair_ok = |a: u32, b: u32| {
            (0..k).filter(|&i| a >> i & 1 == 1).all(|i| parity_ok(i, b))
                && (0..k).filter(|&i| b >> i & 1 == 1).all(|i| parity_ok(i, a))
        };
        let (mut q8, mut d4) = (0u64, 0u64);
        for &blocks in self.partitions(k) {
            if blocks.iter().filter(|&&b| (b & negative).count_ones() % 2 == 1).count() > 1 {
                continue;
            }
            let block_of = |i: usize| blocks.iter().position(|&b| b >> i & 1 == 1).unwrap_or(0);
            let q8_ok = (0..k).all(|i| {
                let own = block_of(i);
                parity_ok(i, blocks[(own + 1) % 3]) == parity_ok(i, blocks[(own + 2) % 3])
            });
            q8 += u64::from(q8_ok);
            d4 += (0..3).filter(|&free| pair_ok(blocks[(free + 1) % 3], blocks[(free + 2) % 3])).count() as u64;
        }
        self.neg = neg;
        let mult = 1u64 << (k - 3);
        (q8 * mult, d4 * mult)
    }
}

/// Exact totals over a range of `|D|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RangeTotals {
    pub q8: u64,
    pub d4: u64,
    /// Fundamental discriminants of the sign, even ones included.
    pub fields: u64,
}

impl RangeTotals {
    pub fn numerator(&self, group: MomentGroup) -> u64 {
        match group {
            MomentGroup::Q8 => self.q8,
            MomentGroup::D4 => self.d4,
        }
    }
}

impl Add for RangeTotals {
    type Output = RangeTotals;

    fn add(self, o: RangeTotals) -> RangeTotals {
        RangeTotals { q8: self.q8 + o.q8, d4: self.d4 + o.d4, fields: self.fields + o.fields }
    }
}

impl AddAssign for RangeTotals {
    fn add_assign(&mut self, o: RangeTotals) {
        *self = *self + o;
    }
}

/// Totals for `lo <= |D| <= hi`. Counts are summed over odd `D` only;
/// `fields` counts every fundamental discriminant of the sign.
pub fn sieve_range(table: &SpfTable, sign: Sign, lo: u64, hi: u64) -> RangeTotals {
    assert!(hi as usize <= table.limit(), "factor table too small for {hi}");
    let mut kernel = CountKernel::new();
    let mut primes = Vec::new();
    let mut t = RangeTotals::default();
    for n in lo.max(3)..=hi {
        let d = sign.apply(n);
        match n % 4 {
            1 | 3 => {
                if d.rem_euclid(4) != 1 || !table.squarefree_primes(n, &mut primes) {
                    continue;
                }
                t.fields += 1;
                let (q8, d4) = kernel.counts(&primes);
                t.q8 += q8;
                t.d4 += d4;
            }
            0 => {
                let m = n / 4;
                if matches!((d / 4).rem_euclid(4), 2 | 3) && table.squarefree_primes(m, &mut primes) {
                    t.fields += 1;
                }
            }
            _ => {}
        }
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    pub bound: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { bound: SIEVE_BOUND }
    }
}

/// Running sums of counts and field numbers at each cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSeries {
    pub group: MomentGroup,
    pub sign: Sign,
    pub cutoffs: Vec<u64>,
    pub numerators: Vec<u64>,
    pub denominators: Vec<u64>,
    /// Set when the requested range exceeded the bound; the series stops there.
    pub truncated_at: Option<u64>,
}

impl MomentSeries {
    pub fn moments(&self) -> Vec<Ratio<u64>> {
        self.numerators.iter().zip(&self.denominators).map(|(&n, &d)| Ratio::new(n, d.max(1))).collect()
    }

    pub fn moment_f64(&self, i: usize) -> f64 {
        self.numerators[i] as f64 / self.denominators[i].max(1) as f64
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.moments().windows(2).all(|w| w[0] < w[1])
    }
}

pub fn sieve_moments(group: MomentGroup, sign: Sign, x_max: u64, checkpoints: &[u64]) -> Result<MomentSeries> {
    sieve_moments_with(group, sign, x_max, checkpoints, SieveConfig::default())
}

/// Sieves `|D| <= min(x_max, bound)`, reporting totals at each checkpoint
/// (and at `x_max` if it is not one).
pub fn sieve_moments_with(
    group: MomentGroup,
    sign: Sign,
    x_max: u64,
    checkpoints: &[u64],
    config: SieveConfig,
) -> Result<MomentSeries> {
    if x_max < 3 {
        bail!(Precondition, "x_max must be at least 3, got {x_max}");
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        bail!(Precondition, "checkpoints must be strictly increasing");
    }
    let mut cuts: Vec<u64> = checkpoints.iter().copied().filter(|&c| c < x_max).collect();
    cuts.push(x_max);
    let limit = x_max.min(config.bound);
    let truncated_at = (x_max > config.bound).then_some(config.bound);
    cuts.retain(|&c| c <= limit);
    let table = SpfTable::new(limit as usize);
    let mut series = MomentSeries {
        group,
        sign,
        cutoffs: Vec::new(),
        numerators: Vec::new(),
        denominators: Vec::new(),
        truncated_at,
    };
    let mut acc = RangeTotals::default();
    let mut lo = 0;
    for c in cuts {
        acc += sieve_range(&table, sign, lo, c);
        lo = c + 1;
        series.cutoffs.push(c);
        series.numerators.push(acc.numerator(group));
        series.denominators.push(acc.fields);
    }
    Ok(series)
}

pub(crate) fn check_restricted_parts(d1: i64, d2: i64, sign: Sign) -> Result<()> {
    for d in [d1, d2] {
        if !super::is_fundamental(d) || d % 2 == 0 {
            bail!(Validation, "{d} is not an odd fundamental discriminant");
        }
    }
    if gcd(d1.unsigned_abs(), d2.unsigned_abs()) != 1 {
        bail!(Validation, "parts {d1} and {d2} are not coprime");
    }
    let ok = match sign {
        Sign::Negative => d1 < 0 && d2 > 0,
        Sign::Positive => d1 > 0 && d2 > 0,
    };
    if !ok {
        bail!(Validation, "parts ({d1}, {d2}) do not fit sign {sign}: only d1 may be negative");
    }
    Ok(())
}

/// `Σ_{a|d1} (d2 m/a) · Σ_{b|d2} (d1 m/b) · ∏_{q|m} (1 + (d1 d2/q)) · (1 + χ4(m))`
/// for odd squarefree `m` coprime to `d1 d2`. Dividing by `16δ` gives
/// the number of unramified Q8-extensions of `Q(√(d1 d2 m))` coming from
/// factorizations with these first two parts.
pub fn restricted_term_numerator(d1: i64, d2: i64, m: u64) -> u64 {
    let (n1, n2) = (d1.unsigned_abs(), d2.unsigned_abs());
    let mi = m as i64;
    let sa: i64 = divisors(n1).into_iter().map(|a| kron(d2 * mi, a as i64) as i64).sum();
    let sb: i64 = divisors(n2).into_iter().map(|b| kron(d1 * mi, b as i64) as i64).sum();
    let sq: i64 = prime_factors(m).into_iter().map(|q| 1 + kron(d1 * d2, q as i64) as i64).product();
    let chi4 = if m % 4 == 1 { 1 } else { -1 };
    (sa * sb * sq * (1 + chi4)) as u64
}

/// `Σ a_{d, d1, d2}` over `d = d1 d2 m` with `|d| <= x`, where `m > 1`
/// runs over odd squarefree integers coprime to `d1 d2`.
pub fn restricted_sum(d1: i64, d2: i64, sign: Sign, x: u64) -> Result<Ratio<u64>> {
    check_restricted_parts(d1, d2, sign)?;
    let n = d1.unsigned_abs() * d2.unsigned_abs();
    let mut total = 0u64;
    let mut m = 3;
    while m <= x / n {
        if gcd(m, n) == 1 && super::is_squarefree(m) {
            total += restricted_term_numerator(d1, d2, m);
        }
        m += 2;
    }
    Ok(Ratio::new(total, 16 * sign.delta()))
}

fn fundamental_with(table: &SpfTable, d: i64, scratch: &mut Vec<u32>) -> bool {
    let n = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => n > 1 && table.squarefree_primes(n, scratch),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && table.squarefree_primes(n / 4, scratch),
        _ => false,
    }
}

/// Number of fundamental `D = a·d` with `|D| <= x`, `a` a fundamental
/// discriminant coprime to `d`.
pub fn count_compositum_twists(d: FundamentalDiscriminant, x: u64) -> u64 {
    let dd = d.abs();
    let y = x / dd;
    if y < 3 {
        return 0;
    }
    let table = SpfTable::new(y as usize);
    let mut scratch = Vec::new();
    let mut count = 0;
    for n in 3..=y {
        if gcd(n, dd) != 1 {
            continue;
        }
        for a in [n as i64, -(n as i64)] {
            if fundamental_with(&table, a, &mut scratch) {
                count += 1;
            }
        }
    }
    count
}

/// The asymptotic density of [`count_compositum_twists`] claimed for
/// discriminant `d`: `27 / (4|d|π²)` for odd `d`, `3 / (|d'|π²)` for
/// `d = 2^t d'`.
pub fn twist_density_constant(d: FundamentalDiscriminant) -> f64 {
    let pi2 = core::f64::consts::PI * core::f64::consts::PI;
    let n = d.abs();
    if d.is_odd() {
        27.0 / (4.0 * n as f64 * pi2)
    } else {
        let odd = n >> n.trailing_zeros();
        3.0 / (odd as f64 * pi2)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{d4_count, enumerate_fundamental, q8_count};
    use super::*;

    #[test]
    fn kernel_matches_factorization_counts() {
        let table = SpfTable::new(200_000);
        let mut kernel = CountKernel::new();
        let mut primes = Vec::new();
        for sign in [Sign::Negative, Sign::Positive] {
            for d in enumerate_fundamental(200_000, sign).filter(|d| d.is_odd()).step_by(7) {
                assert!(table.squarefree_primes(d.abs(), &mut primes));
                let (q8, d4) = kernel.counts(&primes);
                assert_eq!(Some(q8), q8_count(d).unwrap().integer_count(), "Q8 at {d}");
                assert_eq!(Ok(d4), d4_count(d), "D4 at {d}");
            }
        }
    }

    #[test]
    fn small_sieve() {
        let s = sieve_moments(MomentGroup::Q8, Sign::Negative, 50, &[20]).unwrap();
        assert_eq!(s.numerators, [0, 0]);
        assert_eq!(s.denominators[0], 8);
        let neg100 = enumerate_fundamental(100, Sign::Negative).count() as u64;
        let pos100 = enumerate_fundamental(100, Sign::Positive).count() as u64;
        assert_eq!(sieve_moments(MomentGroup::D4, Sign::Negative, 100, &[]).unwrap().denominators, [neg100]);
        assert_eq!(sieve_moments(MomentGroup::D4, Sign::Positive, 100, &[]).unwrap().denominators, [pos100]);
        let t = sieve_moments_with(MomentGroup::Q8, Sign::Negative, 1000, &[100, 500], SieveConfig { bound: 600 });
        let t = t.unwrap();
        assert_eq!(t.cutoffs, [100, 500]);
        assert_eq!(t.truncated_at, Some(600));
    }

    #[test]
    fn restricted_sum_edges() {
        assert_eq!(restricted_sum(-3, 13, Sign::Negative, 38), Ok(Ratio::from_integer(0)));
        assert!(restricted_sum(3, 13, Sign::Negative, 1000).is_err());
        assert!(restricted_sum(-3, 21, Sign::Negative, 1000).is_err());
        assert!(restricted_sum(-3, 13, Sign::Positive, 1000).is_err());
        // d = -3·13·61 is the first term
        assert_eq!(restricted_sum(-3, 13, Sign::Negative, 2379), Ok(Ratio::new(1, 2)));
    }

    #[test]
    fn twist_counts() {
        let five = FundamentalDiscriminant::new(5).unwrap();
        assert_eq!(count_compositum_twists(five, 14), 0);
        // a ∈ {-3, -4}
        assert_eq!(count_compositum_twists(five, 20), 2);
        let c = twist_density_constant(five);
        assert!((c - 27.0 / (20.0 * core::f64::consts::PI * core::f64::consts::PI)).abs() < 1e-15);
    }
}
