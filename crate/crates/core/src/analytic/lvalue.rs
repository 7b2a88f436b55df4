use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{erfc, exp, fabs, floor, log, sqrt};

use crate::arith::{divisors, isqrt};
use crate::disc::{kron, FundamentalDiscriminant, Sign};
use crate::error::bail;
use crate::Result;

/// Largest `|D|` accepted by [`l_value_at_1`].
pub const L_VALUE_BOUND: u64 = 10_000_000;
/// Character-sum length after which [`l_value_at_1`] gives up.
pub const MAX_CHARACTER_TERMS: u64 = 1 << 31;
/// Largest `|D|` accepted by the class-number formula.
pub const CLASS_NUMBER_BOUND: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LMethod {
    CharacterSum,
    ClassNumberFormula,
    SmoothedSeries,
}

/// A value of `L(1, χ_D)` with a bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LValue {
    pub value: f64,
    pub error_bound: f64,
    pub method: LMethod,
}

impl LValue {
    pub fn agrees_with(&self, other: &LValue) -> bool {
        fabs(self.value - other.value) <= self.error_bound + other.error_bound
    }
}

/// `L(1, χ_D)` as `Σ_{n ≤ N} χ(n)/n` with `N` a multiple of `|D|`.
///
/// With `S(x) = Σ_{n ≤ x} χ(n)` periodic of mean `S̄`, two rounds of
/// partial summation give the tail as `S̄/(N+1)` plus an error at most
/// `C/((N+1)(N+2))`, where `C` bounds the partial sums of `S - S̄`. `N` is
/// doubled until that bound is below `precision`.
pub fn l_value_at_1(d: FundamentalDiscriminant, precision: f64) -> Result<LValue> {
    let k = d.abs();
    if k > L_VALUE_BOUND {
        bail!(Precondition, "|D| = {k} exceeds {L_VALUE_BOUND}");
    }
    if precision.is_nan() || precision <= 0.0 {
        bail!(Precondition, "precision must be positive, got {precision}");
    }
    let dv = d.value();
    let table: Vec<i8> = (0..k).map(|r| kron(dv, r as i64) as i8).collect();
    let mut s = 0i64;
    let mut s_total = 0f64;
    for &c in &table[1..] {
        s += c as i64;
        s_total += s as f64;
    }
    // S(k) = 0 and the r = 0 term contributes nothing
    let s_mean = s_total / k as f64;
    let (mut s, mut u, mut c_max) = (0i64, 0f64, 0f64);
    for r in 1..=k as usize {
        s += table[r % k as usize] as i64;
        u += s as f64 - s_mean;
        c_max = c_max.max(fabs(u));
    }
    c_max += 1e-9 * k as f64;

    // compensated summation keeps rounding near `ε · Σ|terms| ≈ ε log N`
    let (mut sum, mut comp) = (0f64, 0f64);
    let mut n_done = 0u64;
    let mut target = k;
    loop {
        while n_done < target {
            for r in 1..=k {
                let c = table[(r % k) as usize];
                if c != 0 {
                    let y = c as f64 / (n_done + r) as f64 - comp;
                    let t = sum + y;
                    comp = (t - sum) - y;
                    sum = t;
                }
            }
            n_done += k;
        }
        let n = n_done as f64;
        let rounding = 4.0 * f64::EPSILON * (log(n) + 2.0);
        let bound = c_max / ((n + 1.0) * (n + 2.0)) + rounding;
        let value = sum + s_mean / (n + 1.0);
        if bound <= precision {
            return Ok(LValue { value, error_bound: bound, method: LMethod::CharacterSum });
        }
        if 2 * target > MAX_CHARACTER_TERMS {
            return Err(crate::Error::Precision { requested: precision, best: value, bound });
        }
        target *= 2;
    }
}

/// Class number of `Q(√D)` in the wide sense.
pub fn class_number(d: FundamentalDiscriminant) -> Result<u64> {
    check_class_number_bound(d)?;
    Ok(match d.sign() {
        Sign::Negative => imaginary_class_number(d.value()),
        Sign::Positive => {
            let (_, period) = regulator_and_period(d.value());
            let narrow = narrow_class_number(d.value());
            if period % 2 == 1 {
                narrow
            } else {
                narrow / 2
            }
        }
    })
}

/// `log ε` for the fundamental unit `ε > 1` of a real quadratic field.
pub fn regulator(d: FundamentalDiscriminant) -> Result<f64> {
    if d.sign() == Sign::Negative {
        bail!(Domain, "imaginary field {d} has no regulator");
    }
    check_class_number_bound(d)?;
    Ok(regulator_and_period(d.value()).0)
}

fn check_class_number_bound(d: FundamentalDiscriminant) -> Result<()> {
    if d.abs() > CLASS_NUMBER_BOUND {
        bail!(Precondition, "|D| = {} exceeds {CLASS_NUMBER_BOUND}", d.abs());
    }
    Ok(())
}

/// Reduced forms `(a, b, c)`: `|b| <= a <= c`, `b >= 0` on the boundary.
fn imaginary_class_number(d: i64) -> u64 {
    let n = d.unsigned_abs() as i64;
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

/// Number of cycles of reduced indefinite forms, one per narrow class.
fn narrow_class_number(d: i64) -> u64 {
    let s = isqrt(d as u64) as i64;
    let reduced = |a: i64, b: i64| {
        let two_a = 2 * a.abs();
        let upper = two_a - b < 0 || (two_a - b) * (two_a - b) < d;
        upper && d < (two_a + b) * (two_a + b)
    };
    let mut forms = BTreeSet::new();
    for b in (1..=s).filter(|b| (b - d).rem_euclid(2) == 0) {
        let t = (d - b * b) / 4;
        for a in divisors(t as u64) {
            for a in [a as i64, -(a as i64)] {
                if reduced(a, b) {
                    forms.insert((a, b, -t / a));
                }
            }
        }
    }
    let mut cycles = 0;
    while let Some(&start) = forms.iter().next() {
        cycles += 1;
        let mut f = start;
        loop {
            forms.remove(&f);
            let (_, b, c) = f;
            let m = 2 * c.abs();
            let b2 = s - (s + b).rem_euclid(m);
            f = (c, b2, (b2 * b2 - d) / (4 * c));
            if f == start || !forms.contains(&f) {
                break;
            }
        }
    }
    cycles
}

/// `(log ε, period)` from the continued fraction of `(1 + √D)/2` or `√(D/4)`.
/// The norm of `ε` is `(-1)^period`.
fn regulator_and_period(d: i64) -> (f64, usize) {
    let (n, mut p, mut q) = if d % 4 == 1 { (d, 1i64, 2i64) } else { (d / 4, 0, 1) };
    let root = sqrt(n as f64);
    let mut seen: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut logs: Vec<f64> = Vec::new();
    loop {
        let alpha = (p as f64 + root) / q as f64;
        if let Some(&start) = seen.get(&(p, q)) {
            let period = logs.len() - start;
            return (logs[start..].iter().sum(), period);
        }
        seen.insert((p, q), logs.len());
        logs.push(log(alpha));
        let a = floor(alpha) as i64;
        p = a * q - p;
        q = (n - p * p) / q;
    }
}

/// `L(1, χ_D)` from the analytic class number formula.
pub fn l_value_class_number(d: FundamentalDiscriminant) -> Result<LValue> {
    let h = class_number(d)? as f64;
    let root = sqrt(d.abs() as f64);
    let value = match d.sign() {
        Sign::Negative => {
            let w = match d.value() {
                -3 => 6.0,
                -4 => 4.0,
                _ => 2.0,
            };
            2.0 * PI * h / (w * root)
        }
        Sign::Positive => 2.0 * h * regulator(d)? / root,
    };
    Ok(LValue { value, error_bound: 1e-12 * value.max(1.0), method: LMethod::ClassNumberFormula })
}

/// Exponential integral `E1(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    if x <= 1.0 {
        let mut sum = -log(x) - EULER_GAMMA;
        let mut fact = 1.0;
        for i in 1..200 {
            fact *= -x / i as f64;
            let term = -fact / i as f64;
            sum += term;
            if fabs(term) < fabs(sum) * f64::EPSILON {
                break;
            }
        }
        sum
    } else {
        // modified Lentz on the continued fraction
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut dd = 1.0 / b;
        let mut h = dd;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            dd = 1.0 / (an * dd + b);
            c = b + an / c;
            let del = c * dd;
            h *= del;
            if fabs(del - 1.0) < f64::EPSILON {
                break;
            }
        }
        h * exp(-x)
    }
}

/// `L(1, χ_D)` from the theta-function series, which needs about
/// `2.5·√|D|` terms:
///
/// * `D > 0`: `Σ χ(n) [erfc(n√(π/k))/n + E1(πn²/k)/√k]`
/// * `D < 0`: `Σ χ(n) [e^{-πn²/k}/n + (π/√k)·erfc(n√(π/k))]`
pub fn l_value_smoothed(d: FundamentalDiscriminant, precision: f64) -> LValue {
    let k = d.abs() as f64;
    let rk = sqrt(k);
    let scale = sqrt(PI / k);
    let even = d.sign() == Sign::Positive;
    let dv = d.value();
    let weight = |n: f64| if even { 1.0 / n + rk / (PI * n * n) } else { 1.0 / n + PI / rk };
    let mut sum = 0.0;
    let mut n = 1u64;
    loop {
        let nf = n as f64;
        let c = kron(dv, n as i64);
        if c != 0 {
            let x = PI * nf * nf / k;
            let t = if even {
                erfc(nf * scale) / nf + exp_integral_e1(x) / rk
            } else {
                exp(-x) / nf + PI / rk * erfc(nf * scale)
            };
            sum += c as f64 * t;
        }
        let m = nf + 1.0;
        let tail = weight(m) * exp(-PI * m * m / k) / (1.0 - exp(-PI * (2.0 * m + 1.0) / k));
        let bound = tail + nf * f64::EPSILON;
        if bound <= precision || n > 1_000_000_000 {
            return LValue { value: sum, error_bound: bound, method: LMethod::SmoothedSeries };
        }
        n += 1;
    }
}
