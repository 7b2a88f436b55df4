use alloc::vec::Vec;

use num_rational::Ratio;

use super::{kron, FundamentalDiscriminant, Sign};
use crate::arith::prime_factors;
use crate::error::bail;
use crate::Result;

/// Swapping `d1` and `d2` preserves the D4 conditions, so ordered sums are
/// divided by 2 for both signs.
pub const D4_SYMMETRY: u64 = 2;

/// Whether even discriminants are accepted, with the 2-adic adjustment of
/// the multiplicity (`ω(d_i) - 1` in place of `ω(d_i)` when `d_i ≡ 4 mod 8`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parity {
    #[default]
    OddOnly,
    IncludeEven,
}

/// `d = d1·d2·d3` with coprime fundamental parts, none equal to 1 and at
/// most one negative. For `d < 0` the negative part is `d1`; the remaining
/// parts are stored by increasing absolute value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscFactorization3 {
    parts: [i64; 3],
}

impl DiscFactorization3 {
    pub fn new(parts: [i64; 3]) -> Result<Self> {
        for &d in &parts {
            if !super::is_fundamental(d) {
                bail!(Validation, "part {d} is not a fundamental discriminant");
            }
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if crate::arith::gcd(parts[i].unsigned_abs(), parts[j].unsigned_abs()) != 1 {
                    bail!(Validation, "parts {} and {} are not coprime", parts[i], parts[j]);
                }
            }
        }
        if parts.iter().filter(|&&d| d < 0).count() > 1 {
            bail!(Validation, "more than one negative part in {parts:?}");
        }
        Ok(Self::canonical(parts))
    }

    fn canonical(mut parts: [i64; 3]) -> Self {
        parts.sort_by_key(|&d| (d > 0, d.unsigned_abs()));
        DiscFactorization3 { parts }
    }

    pub fn parts(&self) -> [i64; 3] {
        self.parts
    }

    pub fn product(&self) -> i64 {
        self.parts.iter().product()
    }

    pub fn sign(&self) -> Sign {
        Sign::of(self.product())
    }

    pub fn is_odd(&self) -> bool {
        self.product() % 2 != 0
    }

    /// Orderings counted by the Q8 sum: the negative part stays first.
    pub fn ordered_variants(&self) -> Vec<[i64; 3]> {
        let [a, b, c] = self.parts;
        match self.sign() {
            Sign::Negative => alloc::vec![[a, b, c], [a, c, b]],
            Sign::Positive => all_orderings(self.parts),
        }
    }

    /// All six orderings, used by the D4 sum where any slot may hold the
    /// negative part.
    pub fn all_orderings(&self) -> Vec<[i64; 3]> {
        all_orderings(self.parts)
    }

    pub fn multiplicity(&self, parity: Parity) -> Ratio<u64> {
        multiplicity(&self.parts, parity)
    }
}

fn all_orderings([a, b, c]: [i64; 3]) -> Vec<[i64; 3]> {
    alloc::vec![[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

fn primes_of(d: i64) -> Vec<u64> {
    prime_factors(d.unsigned_abs())
}

/// `∏ 2^{ω(d_i) - 1}`, with one fewer factor of 2 for parts `≡ 4 mod 8`.
fn multiplicity(parts: &[i64; 3], parity: Parity) -> Ratio<u64> {
    let mut exp: i32 = 0;
    for &d in parts {
        exp += primes_of(d).len() as i32 - 1;
        if parity == Parity::IncludeEven && d.rem_euclid(8) == 4 {
            exp -= 1;
        }
    }
    if exp >= 0 {
        Ratio::from_integer(1u64 << exp)
    } else {
        Ratio::new(1, 1u64 << -exp)
    }
}

fn check_parity(odd: bool, parity: Parity) -> Result<()> {
    if !odd && parity == Parity::OddOnly {
        bail!(Precondition, "even discriminants need Parity::IncludeEven");
    }
    Ok(())
}

/// Calls `f` with the block masks of every partition of `k` labelled items
/// into exactly three nonempty unlabelled blocks.
pub(crate) fn three_block_partitions(k: usize, f: &mut impl FnMut([u32; 3])) {
    fn rec(i: usize, k: usize, used: usize, masks: &mut [u32; 3], f: &mut impl FnMut([u32; 3])) {
        if k - i < 3 - used {
            return;
        }
        if i == k {
            f(*masks);
            return;
        }
        for b in 0..(used + 1).min(3) {
            masks[b] |= 1 << i;
            rec(i + 1, k, used.max(b + 1), masks, f);
            masks[b] &= !(1 << i);
        }
    }
    if k >= 3 {
        rec(0, k, 0, &mut [0; 3], f);
    }
}

/// Every unordered 3-part factorization of `d`.
pub fn enumerate_3factorizations(d: FundamentalDiscriminant) -> Vec<DiscFactorization3> {
    let primes = d.prime_discriminants();
    let mut out = Vec::new();
    three_block_partitions(primes.len(), &mut |masks| {
        let parts =
            masks.map(|m| primes.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &p)| p).product::<i64>());
        if parts.iter().filter(|&&x| x < 0).count() <= 1 {
            out.push(DiscFactorization3::canonical(parts));
        }
    });
    out.sort();
    out
}

/// `(d_j d_k / p) = 1` for every prime `p | d_i`.
pub fn is_q8_factorization(f: &DiscFactorization3) -> bool {
    let d = f.parts;
    (0..3).all(|i| {
        let other = d[(i + 1) % 3] * d[(i + 2) % 3];
        primes_of(d[i]).into_iter().all(|p| kron(other, p as i64) == 1)
    })
}

/// The product `∏_{p | d} (1 + (d1d2/p))(1 + (d1d3/p))(1 + (d2d3/p))`
/// before normalization by `2^ω(d)`.
fn eq1_product(parts: &[i64; 3]) -> u64 {
    let [d1, d2, d3] = *parts;
    let mut acc = 1u64;
    for p in primes_of(d1 * d2 * d3) {
        let p = p as i64;
        for x in [d1 * d2, d1 * d3, d2 * d3] {
            acc *= (1 + kron(x, p)) as u64;
        }
    }
    acc
}

/// The normalized product over primes of `d`, which is 0 or 1.
pub fn eq1_indicator(f: &DiscFactorization3) -> Result<u8> {
    eq1_indicator_with(f, Parity::OddOnly)
}

pub fn eq1_indicator_with(f: &DiscFactorization3, parity: Parity) -> Result<u8> {
    check_parity(f.is_odd(), parity)?;
    let omega = primes_of(f.product()).len() as u32;
    let prod = eq1_product(&f.parts);
    let scale = 1u64 << omega;
    if !prod.is_multiple_of(scale) || prod / scale > 1 {
        bail!(Validation, "product {prod} for {:?} is not 0 or 2^{omega}", f.parts);
    }
    Ok((prod / scale) as u8)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q8CountResult {
    pub discriminant: FundamentalDiscriminant,
    /// Number of unramified Q8-extensions; an integer for odd `d`.
    pub count: Ratio<u64>,
    pub admissible_factorizations: Vec<DiscFactorization3>,
    pub omega_total: u32,
}

impl Q8CountResult {
    pub fn integer_count(&self) -> Option<u64> {
        self.count.is_integer().then(|| self.count.to_integer())
    }
}

/// Sum over ordered admissible factorizations of `∏ 2^{ω(d_i) - 1}`,
/// divided by the sign's symmetry factor.
pub fn q8_count(d: FundamentalDiscriminant) -> Result<Q8CountResult> {
    q8_count_with(d, Parity::OddOnly)
}

pub fn q8_count_with(d: FundamentalDiscriminant, parity: Parity) -> Result<Q8CountResult> {
    check_parity(d.is_odd(), parity)?;
    let admissible: Vec<DiscFactorization3> =
        enumerate_3factorizations(d).into_iter().filter(is_q8_factorization).collect();
    let mut ordered = Ratio::from_integer(0u64);
    for f in &admissible {
        ordered += f.multiplicity(parity) * f.ordered_variants().len() as u64;
    }
    let count = ordered / d.sign().delta();
    if d.is_odd() && !count.is_integer() {
        bail!(Validation, "Q8 count {count} for {d} is not an integer");
    }
    Ok(Q8CountResult { discriminant: d, count, admissible_factorizations: admissible, omega_total: d.omega() })
}

/// The same count written as `(1/δ) Σ 2^{ω(d)-3}/2^{ω(d)} · ∏(...)` over
/// ordered factorizations, with no admissibility test.
pub fn eq2_count(d: FundamentalDiscriminant) -> Result<Ratio<u64>> {
    check_parity(d.is_odd(), Parity::OddOnly)?;
    let mut sum = 0u64;
    for f in enumerate_3factorizations(d) {
        for parts in f.ordered_variants() {
            sum += eq1_product(&parts);
        }
    }
    // 2^{ω-3} / 2^ω = 1/8
    Ok(Ratio::new(sum, 8 * d.sign().delta()))
}

/// `(d1/p) = 1` for every `p | d2` and `(d2/p) = 1` for every `p | d1`.
pub fn d4_condition(d1: i64, d2: i64) -> bool {
    primes_of(d2).into_iter().all(|p| kron(d1, p as i64) == 1)
        && primes_of(d1).into_iter().all(|p| kron(d2, p as i64) == 1)
}

/// Sum over all orderings `(d1, d2, d3)` satisfying [`d4_condition`] of
/// `∏ 2^{ω(d_i) - 1}`, divided by [`D4_SYMMETRY`].
pub fn d4_count(d: FundamentalDiscriminant) -> Result<u64> {
    let c = d4_count_with(d, Parity::OddOnly)?;
    if !c.is_integer() {
        bail!(Validation, "D4 count {c} for {d} is not an integer");
    }
    Ok(c.to_integer())
}

pub fn d4_count_with(d: FundamentalDiscriminant, parity: Parity) -> Result<Ratio<u64>> {
    check_parity(d.is_odd(), parity)?;
    let mut ordered = Ratio::from_integer(0u64);
    for f in enumerate_3factorizations(d) {
        let m = f.multiplicity(parity);
        for [d1, d2, _] in f.all_orderings() {
            if d4_condition(d1, d2) {
                ordered += m;
            }
        }
    }
    Ok(ordered / D4_SYMMETRY)
}
