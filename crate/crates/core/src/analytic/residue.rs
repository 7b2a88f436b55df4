use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{exp, log, sqrt};

use super::lvalue::{l_value_at_1, l_value_smoothed, LValue};
use crate::arith::{divisors, prime_factors, primes_up_to};
use crate::disc::{
    check_restricted_parts, is_fundamental, kron, restricted_sum, FundamentalDiscriminant, Sign, D4_SYMMETRY,
};
use crate::error::bail;
use crate::Result;

/// Largest `N` accepted by [`gh_divergence_probe`].
pub const GH_BOUND: u64 = 1_000_000;

const L_PRECISION: f64 = 1e-10;

/// Which expression a [`ResiduePrediction`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidueForm {
    /// The closed form with the bracket `√∏_{q|n}(1+2/q)^{-1} + (-1)^{…}`
    /// and the square-rooted product over all primes.
    Printed,
    /// The residue recomputed from the Euler product of the series itself.
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResiduePrediction {
    pub d1: i64,
    pub d2: i64,
    pub sign: Sign,
    pub form: ResidueForm,
    pub value: f64,
    pub prime_cutoff: u64,
    /// Estimated `log(full / truncated)` of the prime product.
    pub truncation_estimate: f64,
    pub l_value: LValue,
}

fn tail_estimate(cutoff: u64) -> f64 {
    let x = cutoff as f64;
    -2.0 / (x * log(x))
}

fn prepare(d1: i64, d2: i64, sign: Sign, cutoff: u64) -> Result<(u64, i64, LValue)> {
    check_restricted_parts(d1, d2, sign)?;
    if cutoff < 100 {
        bail!(Precondition, "prime cutoff must be at least 100, got {cutoff}");
    }
    let d = d1 * d2;
    let l = l_value_at_1(FundamentalDiscriminant::new(d)?, L_PRECISION)?;
    Ok((d.unsigned_abs(), d, l))
}

/// The closed-form residue of `Σ_d a_{±d,d1,d2} d^{-s}` at `s = 1`:
///
/// `(d1d2)^{-1}/(8δ) · L(1, (·/d1d2)) · (√∏_{q|d1d2}(1+2/q)^{-1} + (-1)^{(d1-1)/2·(d2-1)/2})
///  · √∏_p (1+2/p)(1-1/p)²(1+2χ(p)/p)(1-χ(p)/p)² ∏_{χ(q)=-1}(1-4/q²)^{-1}`
///
/// with the positive root throughout. At an inert prime the factor
/// `(1-2/p)/(1-4/p²)` is evaluated as `1/(1+2/p)`, which stays finite at `p = 2`.
pub fn residue_q8(d1: i64, d2: i64, sign: Sign, cutoff: u64) -> Result<ResiduePrediction> {
    let (n, d, l) = prepare(d1, d2, sign, cutoff)?;
    let ramified: f64 = prime_factors(n).iter().map(|&q| 1.0 / (1.0 + 2.0 / q as f64)).product();
    let (e1, e2) = ((d1.unsigned_abs() - 1) / 2, (d2.unsigned_abs() - 1) / 2);
    let parity = if (e1 * e2) % 2 == 0 { 1.0 } else { -1.0 };
    let bracket = sqrt(ramified) + parity;
    let mut product = 1.0;
    for p in primes_up_to(cutoff as usize) {
        let x = 1.0 / p as f64;
        let base = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
        product *= match kron(d, p as i64) {
            1 => base * base,
            0 => base,
            _ => (1.0 - x * x) * (1.0 - x * x),
        };
    }
    let value = l.value / (8.0 * sign.delta() as f64 * n as f64) * bracket * sqrt(product);
    Ok(ResiduePrediction {
        d1,
        d2,
        sign,
        form: ResidueForm::Printed,
        value,
        prime_cutoff: cutoff,
        truncation_estimate: tail_estimate(cutoff),
        l_value: l,
    })
}

/// The residue computed directly from the Euler product of the series.
///
/// Writing `D = d1 d2` and `χ = χ_D`, the `m`-sum runs over odd squarefree
/// `m ≡ 1 mod 4` whose primes all split in `Q(√D)`. The two terms with a
/// pole are `(a, b) = (1, 1)` and `(d1, d2)`, both equal to
/// `∏_{q odd split} (1 + 2/q^s) = ζ(s) L(s, χ) H(s)` with
///
/// `H(1) = (1-1/2)(1-χ(2)/2) ∏_{q | D}(1-1/q) ∏_{split}(1+2/q)(1-1/q)² ∏_{inert}(1-1/q²)`,
///
/// so the residue is `L(1, χ) H(1)/(8δ d1 d2) · (1 + (d2/|d1|)(d1/|d2|))/2`.
pub fn residue_q8_derived(d1: i64, d2: i64, sign: Sign, cutoff: u64) -> Result<ResiduePrediction> {
    let (n, d, l) = prepare(d1, d2, sign, cutoff)?;
    let mut h = 0.5 * (1.0 - kron(d, 2) as f64 / 2.0);
    for p in primes_up_to(cutoff as usize).into_iter().skip(1) {
        let x = 1.0 / p as f64;
        h *= match kron(d, p as i64) {
            1 => (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x),
            0 => 1.0 - x,
            _ => 1.0 - x * x,
        };
    }
    let cross = kron(d2, d1.unsigned_abs() as i64) * kron(d1, d2.unsigned_abs() as i64);
    let value = l.value * h / (8.0 * sign.delta() as f64 * n as f64) * (1 + cross) as f64 / 2.0;
    Ok(ResiduePrediction {
        d1,
        d2,
        sign,
        form: ResidueForm::Derived,
        value,
        prime_cutoff: cutoff,
        truncation_estimate: tail_estimate(cutoff),
        l_value: l,
    })
}

/// Empirical `Σ_{|d| ≤ X} a_{±d,d1,d2} / X` against both residue forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauberianCheck {
    pub d1: i64,
    pub d2: i64,
    pub sign: Sign,
    pub x: u64,
    pub empirical: f64,
    /// [`residue_q8`].
    pub predicted: f64,
    pub ratio: f64,
    /// [`residue_q8_derived`].
    pub derived: f64,
    pub derived_ratio: f64,
}

pub fn tauberian_check(d1: i64, d2: i64, sign: Sign, x: u64, cutoff: u64) -> Result<TauberianCheck> {
    if x < 100_000 {
        bail!(Precondition, "X must be at least 1e5, got {x}");
    }
    let sum = restricted_sum(d1, d2, sign, x)?;
    let empirical = *sum.numer() as f64 / *sum.denom() as f64 / x as f64;
    let predicted = residue_q8(d1, d2, sign, cutoff)?.value;
    let derived = residue_q8_derived(d1, d2, sign, cutoff)?.value;
    Ok(TauberianCheck {
        d1,
        d2,
        sign,
        x,
        empirical,
        predicted,
        ratio: empirical / predicted,
        derived,
        derived_ratio: empirical / derived,
    })
}

/// The constant `c` with `Res ≥ c · L(1, (·/d1d2)) / (d1 d2)`:
///
/// `c = 1/(8δ) · 1/2 · √∏_p (1+2/p)(1-1/p)²(1-1/p²-2/p³)`,
///
/// the factor `1/2` bounding the bracket from below. The product is
/// decreasing in the cutoff, so the tail estimate is applied to keep `c`
/// below its limit.
pub fn lower_bound_constant(sign: Sign, cutoff: u64) -> f64 {
    let mut product = 1.0;
    for p in primes_up_to(cutoff as usize) {
        let x = 1.0 / p as f64;
        product *= (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x) * (1.0 - x * x - 2.0 * x * x * x);
    }
    let x = cutoff as f64;
    product *= exp(-4.0 / (x * log(x)));
    sqrt(product) / (16.0 * sign.delta() as f64)
}

/// `S = Σ_{a | d1} Σ_{b | d2} (±d1/b)(d2/a)` over positive divisors of `|d1|`, `|d2|`.
pub fn d4_symbol_sum(d1: i64, d2: i64) -> i64 {
    let mut s = 0i64;
    for a in divisors(d1.unsigned_abs()) {
        for b in divisors(d2.unsigned_abs()) {
            s += (kron(d1, b as i64) * kron(d2, a as i64)) as i64;
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct D4Residue {
    pub symbol_sum: i64,
    pub value: f64,
}

/// `(d1d2)^{-1}/(8δ) · S · 6/π²`, the last factor being the residue of
/// `Σ_{m squarefree} m^{-s} = ζ(s)/ζ(2s)`. Here `δ` is [`D4_SYMMETRY`].
pub fn residue_d4(d1: i64, d2: i64, sign: Sign) -> Result<D4Residue> {
    check_restricted_parts(d1, d2, sign)?;
    let n = (d1 * d2).unsigned_abs() as f64;
    let s = d4_symbol_sum(d1, d2);
    let value = s as f64 / (8.0 * D4_SYMMETRY as f64 * n) * 6.0 / (PI * PI);
    Ok(D4Residue { symbol_sum: s, value })
}

/// `Σ L(1, χ_d)/d` over positive fundamental `d` with `lo <= d < hi`.
pub fn gh_range(lo: u64, hi: u64) -> f64 {
    let mut sum = 0.0;
    for d in lo.max(5)..hi {
        if is_fundamental(d as i64) {
            let chi = FundamentalDiscriminant::new(d as i64).expect("checked fundamental");
            sum += l_value_smoothed(chi, L_PRECISION).value / d as f64;
        }
    }
    sum
}

/// `Σ_{d < N} L(1, χ_d)/d` over positive fundamental discriminants `d`.
pub fn gh_divergence_probe(n: u64) -> Result<f64> {
    if n > GH_BOUND {
        bail!(Precondition, "N = {n} exceeds {GH_BOUND}");
    }
    Ok(gh_range(0, n))
}

/// Running values of [`gh_divergence_probe`] at increasing `N`.
pub fn gh_partial_sums(checkpoints: &[u64]) -> Result<Vec<(u64, f64)>> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        bail!(Precondition, "checkpoints must be strictly increasing");
    }
    if checkpoints.last().is_some_and(|&n| n > GH_BOUND) {
        bail!(Precondition, "checkpoints exceed {GH_BOUND}");
    }
    let mut out = Vec::with_capacity(checkpoints.len());
    let (mut acc, mut lo) = (0.0, 0);
    for &n in checkpoints {
        acc += gh_range(lo, n);
        lo = n;
        out.push((n, acc));
    }
    Ok(out)
}
