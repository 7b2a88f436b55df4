//! Arithmetic in `F_q = F_p[x]/(f)`.
//!
//! Field elements are encoded as integers in `0..q` whose base-`p` digits are
//! the coefficients of `1, x, ..., x^{n-1}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{is_prime, prime_factors};
use crate::error::bail;
use crate::Result;

/// Largest field size accepted by [`find_irreducible`].
pub const FIELD_BOUND: u64 = 1_000_000;

/// Encoded element of `F_q`.
pub type Fq = u32;

/// Polynomials over `F_p`, coefficients from the constant term up.
pub(crate) mod poly {
    use alloc::vec::Vec;

    use crate::arith::pow_mod;

    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        pow_mod(a as u64, p as u64 - 2, p as u64) as u32
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut out: Vec<u32> = (0..a.len().max(b.len()))
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the nonzero `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = (*r.last().unwrap() as u64 * lead_inv % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let t = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = alloc::vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn pow_mod_poly(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = rem(&[1], m, p);
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn eval(a: &[u32], x: u32, p: u32) -> u32 {
        a.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64) as u32
    }
}

/// Irreducibility over `F_p` for a monic `f` given from the constant term up:
/// no roots, and `gcd(f, x^{p^k} - x) = 1` for `k ≤ n/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if (0..p).any(|x| poly::eval(f, x, p) == 0) {
        return false;
    }
    let x = [0, 1];
    let mut h = x.to_vec();
    for _ in 1..=n / 2 {
        h = poly::pow_mod_poly(&h, p as u64, f, p);
        let g = poly::gcd(f, &poly::sub(&h, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// `F_q` as `F_p[x]/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFieldSpec {
    p: u32,
    n: u32,
    modulus: Vec<u32>,
}

impl FiniteFieldSpec {
    /// `modulus` is monic of degree `n`, constant term first.
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            bail!(Validation, "{p} is not prime");
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            bail!(Validation, "modulus must be monic of positive degree with coefficients below {p}");
        }
        if !is_irreducible(&modulus, p) {
            bail!(Validation, "modulus {modulus:?} is reducible over F_{p}");
        }
        let n = (modulus.len() - 1) as u32;
        if (p as u64).checked_pow(n).is_none_or(|q| q > FIELD_BOUND) {
            bail!(Precondition, "field size {p}^{n} exceeds {FIELD_BOUND}");
        }
        Ok(FiniteFieldSpec { p, n, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.n)
    }

    /// Coefficients of the modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn digits(&self, a: Fq) -> Vec<u32> {
        let mut a = a;
        (0..self.n)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Fq {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let x = self.digits(a);
        let y = self.digits(b);
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.from_digits(&s)
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let prod = poly::mul_mod(&self.digits(a), &self.digits(b), &self.modulus, self.p);
        self.from_digits(&prod)
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        let r = poly::pow_mod_poly(&self.digits(a), e, &self.modulus, self.p);
        self.from_digits(&r)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Fq) -> u64 {
        debug_assert!(a != 0);
        let mut ord = self.q() - 1;
        for r in prime_factors(ord) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        ord
    }

    /// Least encoded generator of `F_q^×`.
    pub fn primitive_element(&self) -> Fq {
        let m = self.q() - 1;
        let primes = prime_factors(m);
        (1..self.q() as Fq)
            .find(|&g| primes.iter().all(|&r| self.pow(g, m / r) != 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

/// The lexicographically first monic irreducible polynomial of degree `n`
/// over `F_p`, comparing coefficients from `x^{n-1}` down to the constant.
pub fn find_irreducible(p: u32, n: u32) -> Result<FiniteFieldSpec> {
    if !is_prime(p as u64) {
        bail!(Validation, "{p} is not prime");
    }
    if n == 0 {
        bail!(Precondition, "extension degree must be positive");
    }
    let q = match (p as u64).checked_pow(n) {
        Some(q) if q <= FIELD_BOUND => q,
        _ => bail!(Precondition, "field size {p}^{n} exceeds {FIELD_BOUND}"),
    };
    let mut f = vec![0u32; n as usize + 1];
    f[n as usize] = 1;
    for t in 0..q {
        // digit of weight p^{n-1} is the x^{n-1} coefficient
        let mut r = t;
        for c in f.iter_mut().take(n as usize) {
            *c = (r % p as u64) as u32;
            r /= p as u64;
        }
        if is_irreducible(&f, p) {
            return Ok(FiniteFieldSpec { p, n, modulus: f });
        }
    }
    bail!(Validation, "no irreducible polynomial of degree {n} over F_{p}")
}

/// An element of exact multiplicative order `d`: a primitive element raised
/// to `(q - 1)/d`.
pub fn element_of_order(field: &FiniteFieldSpec, d: u64) -> Result<Fq> {
    let m = field.q() - 1;
    if d == 0 || !m.is_multiple_of(d) {
        bail!(Domain, "{d} does not divide q - 1 = {m}");
    }
    let g = field.primitive_element();
    Ok(field.pow(g, m / d))
}
