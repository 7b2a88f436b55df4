//! Real characters, `L(1, χ)`, truncated Euler products, and the residues
//! at `s = 1` of the Dirichlet series built from restricted Q8 counts.

mod lvalue;
mod residue;

use alloc::vec::Vec;

use libm::{log, pow};

use crate::arith::primes_up_to;
use crate::disc::{is_fundamental, kron, Sign};
use crate::error::bail;
use crate::Result;

pub use lvalue::{
    class_number, exp_integral_e1, l_value_at_1, l_value_class_number, l_value_smoothed, regulator, LMethod, LValue,
    CLASS_NUMBER_BOUND, L_VALUE_BOUND, MAX_CHARACTER_TERMS,
};
pub use residue::{
    d4_symbol_sum, gh_divergence_probe, gh_partial_sums, gh_range, lower_bound_constant, residue_d4, residue_q8,
    residue_q8_derived, tauberian_check, D4Residue, ResidueForm, ResiduePrediction, TauberianCheck, GH_BOUND,
};

/// `n ↦ (D/n)` for a fundamental discriminant `D`, or the trivial character for `D = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RealCharacter {
    discriminant: i64,
}

impl RealCharacter {
    pub fn trivial() -> Self {
        RealCharacter { discriminant: 1 }
    }

    pub fn new(d: i64) -> Result<Self> {
        if d != 1 && !is_fundamental(d) {
            bail!(Validation, "{d} is neither 1 nor a fundamental discriminant");
        }
        Ok(RealCharacter { discriminant: d })
    }

    /// The character `q ↦ (q/n)` (Jacobi symbol) for odd squarefree `n`,
    /// which is `χ_{±n}` with the sign making `±n ≡ 1 mod 4`.
    pub fn jacobi(n: u64) -> Result<Self> {
        if n.is_multiple_of(2) {
            bail!(Validation, "modulus {n} must be odd");
        }
        Self::new(if n % 4 == 1 { n as i64 } else { -(n as i64) })
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn modulus(&self) -> u64 {
        self.discriminant.unsigned_abs()
    }

    pub fn is_trivial(&self) -> bool {
        self.discriminant == 1
    }

    pub fn value(&self, n: i64) -> i32 {
        if self.is_trivial() {
            1
        } else {
            kron(self.discriminant, n)
        }
    }

    /// The character of `D1·D2` for coprime discriminants.
    pub fn product(&self, other: &RealCharacter) -> Result<RealCharacter> {
        if crate::arith::gcd(self.modulus(), other.modulus()) != 1 {
            bail!(Validation, "characters {} and {} have overlapping moduli", self.discriminant, other.discriminant);
        }
        RealCharacter::new(self.discriminant * other.discriminant)
    }
}

/// A truncated Euler product with an estimate of the omitted tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerProduct {
    pub value: f64,
    pub prime_cutoff: u64,
    /// Estimated `log(full / truncated)`.
    pub log_tail_estimate: f64,
}

fn check_euler_args(a: i64, chi: &RealCharacter, s: f64, cutoff: u64) -> Result<()> {
    if a == 0 {
        bail!(Precondition, "coefficient a must be nonzero");
    }
    if cutoff < 100 {
        bail!(Precondition, "prime cutoff must be at least 100, got {cutoff}");
    }
    if s.is_nan() || s <= 0.5 || (chi.is_trivial() && s <= 1.0) {
        bail!(Domain, "product diverges at s = {s} for this character");
    }
    Ok(())
}

/// `Σ_{p > x} p^{-σ}` approximated by `x^{1-σ}/((σ-1) log x)`.
fn prime_power_tail(x: f64, sigma: f64) -> f64 {
    pow(x, 1.0 - sigma) / ((sigma - 1.0) * log(x))
}

/// `∏_{p ≤ cutoff} (1 + a χ(p) p^{-s})`.
///
/// For the trivial character the tail is dominated by its linear term
/// `a Σ p^{-s}`; otherwise that term cancels on average and the estimate
/// uses the quadratic term `-(a²/2) Σ p^{-2s}`.
pub fn truncated_euler_product(a: i64, chi: &RealCharacter, s: f64, cutoff: u64) -> Result<EulerProduct> {
    check_euler_args(a, chi, s, cutoff)?;
    let mut value = 1.0;
    for p in primes_up_to(cutoff as usize) {
        value *= 1.0 + a as f64 * chi.value(p as i64) as f64 * pow(p as f64, -s);
    }
    let x = cutoff as f64;
    let af = a as f64;
    let log_tail_estimate = if chi.is_trivial() {
        af * prime_power_tail(x, s) - af * af / 2.0 * prime_power_tail(x, 2.0 * s)
    } else {
        -af * af / 2.0 * prime_power_tail(x, 2.0 * s)
    };
    Ok(EulerProduct { value, prime_cutoff: cutoff, log_tail_estimate })
}

/// `M_n^±(s, χ) = ∏_{(q/n) = ±1} (1 + 2 χ(q) q^{-s})` over primes `q ≤ cutoff`.
pub fn m_function(n: u64, sign: Sign, chi: &RealCharacter, s: f64, cutoff: u64) -> Result<f64> {
    let residue = RealCharacter::jacobi(n)?;
    check_euler_args(2, chi, s, cutoff)?;
    let want = match sign {
        Sign::Positive => 1,
        Sign::Negative => -1,
    };
    let mut value = 1.0;
    for q in primes_up_to(cutoff as usize) {
        if residue.value(q as i64) == want {
            value *= 1.0 + 2.0 * chi.value(q as i64) as f64 * pow(q as f64, -s);
        }
    }
    Ok(value)
}

/// `Σ_{m ≤ limit, m squarefree} 2^{ω(m)} χ(m) m^{-s}`, summed directly.
pub fn squarefree_dirichlet_sum(chi: &RealCharacter, s: f64, limit: u64) -> f64 {
    let table = crate::arith::SpfTable::new(limit as usize);
    let mut primes: Vec<u32> = Vec::new();
    let mut sum = 0.0;
    for m in 1..=limit {
        if table.squarefree_primes(m, &mut primes) {
            let c = chi.value(m as i64);
            if c != 0 {
                sum += c as f64 * (1u64 << primes.len()) as f64 * pow(m as f64, -s);
            }
        }
    }
    sum
}
