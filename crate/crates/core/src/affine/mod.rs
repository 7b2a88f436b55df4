//! The affine groups `G(q, d) = {x ↦ ax + b : a, b ∈ F_q, a^d = 1}`.
//!
//! `G(q, d)` is realized as the block matrices `[[X_d^k, b], [0, 1]]` over
//! `F_p`, where `X_d` is multiplication by a fixed `x_d` of order `d` written
//! in the basis `1, x, ..., x^{n-1}` of `F_q`. It is a Frobenius group with
//! kernel the translations `K ≅ C_p^n` and complement `H = ⟨X_d⟩ ≅ C_d`.

mod field;
mod matrix;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

pub use field::{element_of_order, find_irreducible, is_irreducible, FiniteFieldSpec, Fq, FIELD_BOUND};
pub use matrix::FpMatrix;

use crate::arith::{is_prime, multiplicative_order, pow_mod, prime_power};
use crate::error::bail;
use crate::group::{
    automorphism_group, gi_extension_count, group_from_generators, Automorphism, CayleyGroup, Elem, CAYLEY_CAP,
};
use crate::{Error, Result};

/// Largest `|GL_n(F_p)|` scanned by [`normalizer_order`].
pub const GL_SCAN_BOUND: u64 = 100_000;

/// `(q, d)` with a concrete field and a chosen `x_d` of exact order `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineGroupSpec {
    field: FiniteFieldSpec,
    d: u64,
    x_d: Fq,
}

impl AffineGroupSpec {
    /// Uses the first irreducible modulus and the canonical element of order `d`.
    pub fn new(p: u32, n: u32, d: u64) -> Result<Self> {
        let field = find_irreducible(p, n)?;
        Self::with_field(field, d)
    }

    pub fn with_field(field: FiniteFieldSpec, d: u64) -> Result<Self> {
        let x_d = element_of_order(&field, d)?;
        Ok(AffineGroupSpec { field, d, x_d })
    }

    pub fn field(&self) -> &FiniteFieldSpec {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn x_d(&self) -> Fq {
        self.x_d
    }

    pub fn label(&self) -> alloc::string::String {
        format!("G({},{})", self.q(), self.d)
    }

    /// Multiplication by `a` on `F_q` as an `n × n` matrix over `F_p`.
    pub fn multiplication_matrix(&self, a: Fq) -> FpMatrix {
        let n = self.n() as usize;
        let p = self.p();
        let mut m = FpMatrix::identity(p, n);
        for j in 0..n {
            let col = self.field.digits(self.field.mul(a, p.pow(j as u32)));
            for (i, &c) in col.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    /// `X_d`.
    pub fn x_matrix(&self) -> FpMatrix {
        self.multiplication_matrix(self.x_d)
    }

    /// `[[X_d^k, b], [0, 1]]`.
    pub fn matrix_realization(&self, k: u64, b: &[u32]) -> FpMatrix {
        let n = self.n() as usize;
        let block = self.x_matrix().pow(k % self.d);
        let mut m = FpMatrix::identity(self.p(), n + 1);
        for (i, &bi) in b.iter().enumerate().take(n) {
            for j in 0..n {
                m.set(i, j, block.get(i, j));
            }
            m.set(i, n, bi);
        }
        m
    }

    /// `diag(X_d, 1)` followed by the unit translations.
    pub fn generators(&self) -> Vec<FpMatrix> {
        let n = self.n() as usize;
        let mut gens = vec![self.matrix_realization(1, &vec![0; n])];
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            gens.push(self.matrix_realization(0, &e));
        }
        gens
    }
}

/// Kernel and complement of the Frobenius structure, as sorted index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusDecomposition {
    pub kernel: Vec<Elem>,
    pub complement: Vec<Elem>,
}

impl FrobeniusDecomposition {
    /// Kernel normal, trivial intersection, orders multiply to `|G|`.
    pub fn is_valid_for(&self, g: &CayleyGroup) -> bool {
        let normal = g.is_subgroup(&self.kernel)
            && g.is_subgroup(&self.complement)
            && g.generators()
                .iter()
                .all(|&s| self.kernel.iter().all(|&k| self.kernel.binary_search(&g.conj(s, k)).is_ok()));
        let meet = self.kernel.iter().filter(|k| self.complement.binary_search(k).is_ok()).count();
        normal && meet == 1 && self.kernel.len() * self.complement.len() == g.order()
    }
}

/// `G(q, d)` as a Cayley table, with the block data of each element.
#[derive(Clone, Debug)]
pub struct AffineGroup {
    pub spec: AffineGroupSpec,
    pub group: CayleyGroup,
    pub decomposition: FrobeniusDecomposition,
    exponents: Vec<u32>,
    translations: Vec<Vec<u32>>,
}

impl AffineGroup {
    /// `k` in the block form of element `g`.
    pub fn exponent(&self, g: Elem) -> u32 {
        self.exponents[g as usize]
    }

    /// `b` in the block form of element `g`, as coordinates over `F_p`.
    pub fn translation(&self, g: Elem) -> &[u32] {
        &self.translations[g as usize]
    }

    /// Every non-identity element fixes at most one point of `F_q` under
    /// `v ↦ X_d^k v + b`.
    pub fn is_frobenius_action(&self) -> bool {
        let n = self.spec.n() as usize;
        let p = self.spec.p();
        let q = self.spec.q();
        let x = self.spec.x_matrix();
        let powers: Vec<FpMatrix> = (0..self.spec.d()).map(|k| x.pow(k)).collect();
        self.group.elements().skip(1).all(|g| {
            let m = &powers[self.exponent(g) as usize];
            let b = self.translation(g);
            let mut fixed = 0;
            for v in 0..q {
                let coords: Vec<u32> = (0..n).map(|i| ((v / (p as u64).pow(i as u32)) % p as u64) as u32).collect();
                let image = m.apply(&coords);
                if image.iter().zip(b).zip(&coords).all(|((y, bi), c)| (y + bi) % p == *c) {
                    fixed += 1;
                }
            }
            fixed <= 1
        })
    }
}

/// Closes the matrix generators of `G(q, d)` and reads off the block data.
pub fn build_affine_group(spec: &AffineGroupSpec) -> Result<AffineGroup> {
    let order = spec.q() * spec.d();
    if order > CAYLEY_CAP as u64 {
        return Err(Error::OrderCap { what: "affine group", needed: order, cap: CAYLEY_CAP as u64 });
    }
    let n = spec.n() as usize;
    let x = spec.x_matrix();
    let blocks: BTreeMap<FpMatrix, u32> = (0..spec.d()).map(|k| (x.pow(k), k as u32)).collect();
    let closure = group_from_generators(&spec.generators(), spec.label())?;
    let mut exponents = Vec::with_capacity(closure.elements.len());
    let mut translations = Vec::with_capacity(closure.elements.len());
    for m in &closure.elements {
        let mut block = FpMatrix::identity(spec.p(), n);
        for i in 0..n {
            for j in 0..n {
                block.set(i, j, m.get(i, j));
            }
        }
        let Some(&k) = blocks.get(&block) else {
            bail!(Validation, "closure produced a block outside ⟨X_d⟩");
        };
        exponents.push(k);
        translations.push((0..n).map(|i| m.get(i, n)).collect::<Vec<u32>>());
    }
    if closure.group.order() as u64 != order {
        bail!(Validation, "{} has order {}, expected {order}", spec.label(), closure.group.order());
    }
    let kernel = closure.group.elements().filter(|&g| exponents[g as usize] == 0).collect();
    let complement = closure.group.elements().filter(|&g| translations[g as usize].iter().all(|&c| c == 0)).collect();
    Ok(AffineGroup {
        spec: spec.clone(),
        group: closure.group,
        decomposition: FrobeniusDecomposition { kernel, complement },
        exponents,
        translations,
    })
}

fn check_divisibility(p: u32, n: u32, d: u64) -> Result<u64> {
    if !is_prime(p as u64) || n == 0 {
        bail!(Precondition, "need a prime p and n ≥ 1, got p = {p}, n = {n}");
    }
    let q = match (p as u64).checked_pow(n) {
        Some(q) => q,
        None => bail!(Precondition, "{p}^{n} overflows"),
    };
    if d == 0 || (q - 1) % d != 0 {
        bail!(Precondition, "{d} does not divide {p}^{n} - 1");
    }
    Ok(q)
}

/// Whether `p^l ≡ -1 (mod d)` for some `0 ≤ l < ord_d(p)`; true for `d ≤ 2`.
pub fn has_gi_by_theorem(p: u32, n: u32, d: u64) -> Result<bool> {
    check_divisibility(p, n, d)?;
    if d <= 2 {
        return Ok(true);
    }
    let ord = multiplicative_order(p as u64, d);
    Ok((0..ord).any(|l| pow_mod(p as u64, l, d) == d - 1))
}

/// Predicted number of GI-extensions of `G(p^n, d)`: 1 or 0.
pub fn gi_count_by_theorem(p: u32, n: u32, d: u64) -> Result<u32> {
    Ok(has_gi_by_theorem(p, n, d)? as u32)
}

/// `K` is invariant under `Aut(G)` and `|H|` divides `|K| - 1`.
///
/// Invariance is checked on generators of `Aut(G)`, which suffices.
pub fn frobenius_checks(g: &CayleyGroup, dec: &FrobeniusDecomposition) -> Result<bool> {
    let k = dec.kernel.len();
    if k == 0 || !(k - 1).is_multiple_of(dec.complement.len()) {
        return Ok(false);
    }
    let aut = automorphism_group(g)?;
    Ok(aut.generators().iter().all(|a| dec.kernel.iter().all(|&x| dec.kernel.binary_search(&a[x as usize]).is_ok())))
}

/// `|N_{GL_n(F_p)}(⟨X_d⟩)|` by a direct scan of `n × n` matrices.
pub fn normalizer_order(spec: &AffineGroupSpec) -> Result<u64> {
    let p = spec.p() as u64;
    let n = spec.n();
    let gl = (0..n).map(|i| p.pow(n) - p.pow(i)).product::<u64>();
    if gl > GL_SCAN_BOUND {
        return Err(Error::OrderCap { what: "GL_n(F_p) scan", needed: gl, cap: GL_SCAN_BOUND });
    }
    let dim = n as usize;
    let x = spec.x_matrix();
    let powers: Vec<FpMatrix> = (1..spec.d()).map(|k| x.pow(k)).collect();
    let total = p.pow(n * n);
    let mut count = 0;
    let mut entries = vec![0u32; dim * dim];
    for t in 0..total {
        let mut r = t;
        for e in entries.iter_mut() {
            *e = (r % p) as u32;
            r /= p;
        }
        let m = FpMatrix::from_rows(spec.p(), dim, entries.clone());
        if m.rank() != dim {
            continue;
        }
        // T X T^{-1} ∈ ⟨X⟩ ⇔ T X = X^k T for some k
        let tx = m.mul(&x);
        if spec.d() == 1 || powers.iter().any(|xk| xk.mul(&m) == tx) {
            count += 1;
        }
    }
    Ok(count)
}

/// `|Aut(G(q, d))| = q · |N_{GL_n(F_p)}(⟨X_d⟩)|`, for `d ≥ 2`.
pub fn aut_structure_check(spec: &AffineGroupSpec) -> Result<bool> {
    if spec.d() < 2 {
        bail!(Precondition, "the complement must be nontrivial (d ≥ 2)");
    }
    let norm = normalizer_order(spec)?;
    let ag = build_affine_group(spec)?;
    let aut = automorphism_group(&ag.group)?;
    Ok(aut.order() == spec.q() as u128 * norm as u128)
}

/// `σ` acts on `G/K ≅ C_d` by inversion: exponent `k` goes to `-k`.
pub fn complement_inverted(ag: &AffineGroup, sigma: &Automorphism) -> bool {
    let d = ag.spec.d() as u32;
    ag.group.elements().all(|g| (ag.exponent(sigma.apply(g)) + ag.exponent(g)).is_multiple_of(d))
}

/// Every `(p, n, d)` with `d | p^n - 1` and `p^n · d ≤ max_qd`, by `q` then `d`.
pub fn affine_parameters(max_qd: u64) -> Vec<(u32, u32, u64)> {
    let mut out = Vec::new();
    for q in 2..=max_qd {
        let Some((p, n)) = prime_power(q) else { continue };
        for d in crate::arith::divisors(q - 1) {
            if q * d <= max_qd {
                out.push((p as u32, n, d));
            }
        }
    }
    out
}

/// One row of the theorem-versus-search comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineScanRow {
    pub p: u32,
    pub n: u32,
    pub q: u64,
    pub d: u64,
    pub predicted: u32,
    pub brute_force: u32,
}

impl AffineScanRow {
    pub fn agree(&self) -> bool {
        self.predicted == self.brute_force
    }
}

/// Builds `G(p^n, d)` and counts its GI-extensions by search.
pub fn scan_affine(p: u32, n: u32, d: u64) -> Result<AffineScanRow> {
    let predicted = gi_count_by_theorem(p, n, d)?;
    let spec = AffineGroupSpec::new(p, n, d)?;
    let ag = build_affine_group(&spec)?;
    let report = gi_extension_count(&ag.group)?;
    for sigma in &report.gi_automorphism_reps {
        if !complement_inverted(&ag, sigma) {
            bail!(Validation, "GI-automorphism of {} does not invert the complement", spec.label());
        }
    }
    Ok(AffineScanRow { p, n, q: spec.q(), d, predicted, brute_force: report.gi_extension_count as u32 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{standard_group, Fingerprint, StandardGroup};

    fn affine(p: u32, n: u32, d: u64) -> AffineGroup {
        build_affine_group(&AffineGroupSpec::new(p, n, d).unwrap()).unwrap()
    }

    #[test]
    fn small_affine_groups() {
        let s3 = affine(3, 1, 2);
        assert_eq!(s3.group.order(), 6);
        assert!(!s3.group.is_abelian());
        let a4 = affine(2, 2, 3);
        assert_eq!(a4.group.order(), 12);
        let perm_a4 = standard_group(&StandardGroup::Alternating(4)).unwrap();
        assert_eq!(Fingerprint::of(&a4.group), Fingerprint::of(&perm_a4));
        let trans = affine(5, 2, 1);
        assert!(trans.group.is_abelian());
        assert!(trans.group.elements().skip(1).all(|g| trans.group.element_order(g) == 5));
    }

    #[test]
    fn decomposition_and_action() {
        for (p, n, d) in [(3, 1, 2), (2, 2, 3), (3, 2, 4), (5, 1, 4), (2, 3, 7)] {
            let ag = affine(p, n, d);
            assert!(ag.decomposition.is_valid_for(&ag.group));
            assert!(ag.is_frobenius_action());
            assert!(frobenius_checks(&ag.group, &ag.decomposition).unwrap());
        }
    }

    #[test]
    fn theorem_predicate() {
        assert!(has_gi_by_theorem(2, 2, 3).unwrap());
        assert!(!has_gi_by_theorem(7, 1, 3).unwrap());
        assert!(!has_gi_by_theorem(2, 3, 7).unwrap());
        assert_eq!(gi_count_by_theorem(5, 1, 1).unwrap(), 1);
        assert!(has_gi_by_theorem(7, 1, 5).is_err());
    }

    #[test]
    fn normalizers() {
        assert_eq!(normalizer_order(&AffineGroupSpec::new(3, 1, 2).unwrap()).unwrap(), 2);
        assert_eq!(normalizer_order(&AffineGroupSpec::new(2, 2, 3).unwrap()).unwrap(), 6);
        assert_eq!(normalizer_order(&AffineGroupSpec::new(5, 1, 4).unwrap()).unwrap(), 4);
        for (p, n, d) in [(3, 1, 2), (2, 2, 3), (5, 1, 4), (3, 2, 4)] {
            assert!(aut_structure_check(&AffineGroupSpec::new(p, n, d).unwrap()).unwrap());
        }
    }

    #[test]
    fn parameters_enumeration() {
        let params = affine_parameters(12);
        assert_eq!(
            params,
            vec![
                (2, 1, 1),
                (3, 1, 1),
                (3, 1, 2),
                (2, 2, 1),
                (2, 2, 3),
                (5, 1, 1),
                (5, 1, 2),
                (7, 1, 1),
                (2, 3, 1),
                (3, 2, 1),
                (11, 1, 1)
            ]
        );
    }
}
