use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::cayley::CayleyGroup;
use super::closure::{group_from_generators, Permutation};
use crate::error::bail;
use crate::Result;

/// Named families with canonical generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardGroup {
    /// `C_n`.
    Cyclic(u32),
    /// `C_{n1} × C_{n2} × ...`.
    AbelianProduct(Vec<u32>),
    /// Dihedral group of the given order `2n` (symmetries of an n-gon).
    Dihedral(u32),
    /// Dicyclic group of the given order `4m`; order 8 is `Q8`.
    Quaternion(u32),
    Symmetric(u32),
    Alternating(u32),
}

impl StandardGroup {
    /// Parses a preset tag: `c12`, `ab2x2x4`, `d4` (dihedral of the square,
    /// order 8), `q8`, `s4`, `a5`.
    pub fn parse(tag: &str) -> Result<Self> {
        let tag = tag.trim().to_ascii_lowercase();
        let num = |s: &str| -> Result<u32> {
            match s.parse::<u32>() {
                Ok(v) if v > 0 => Ok(v),
                _ => bail!(Precondition, "bad group preset parameter {s:?}"),
            }
        };
        if let Some(rest) = tag.strip_prefix("ab") {
            let factors = rest.split('x').map(num).collect::<Result<Vec<u32>>>()?;
            return Ok(StandardGroup::AbelianProduct(factors));
        }
        let (head, rest) = tag.split_at(tag.find(|c: char| c.is_ascii_digit()).unwrap_or(tag.len()));
        match head {
            "c" => Ok(StandardGroup::Cyclic(num(rest)?)),
            "d" => Ok(StandardGroup::Dihedral(2 * num(rest)?)),
            "q" => Ok(StandardGroup::Quaternion(num(rest)?)),
            "s" => Ok(StandardGroup::Symmetric(num(rest)?)),
            "a" => Ok(StandardGroup::Alternating(num(rest)?)),
            _ => bail!(Precondition, "unknown group preset {tag:?}"),
        }
    }

    pub fn label(&self) -> String {
        match self {
            StandardGroup::Cyclic(n) => format!("C{n}"),
            StandardGroup::AbelianProduct(f) => {
                let parts: Vec<String> = f.iter().map(|n| format!("C{n}")).collect();
                parts.join("×")
            }
            StandardGroup::Dihedral(order) => format!("D{}", order / 2),
            StandardGroup::Quaternion(order) => format!("Q{order}"),
            StandardGroup::Symmetric(n) => format!("S{n}"),
            StandardGroup::Alternating(n) => format!("A{n}"),
        }
    }

    pub fn generator_permutations(&self) -> Result<Vec<Permutation>> {
        Ok(match self {
            StandardGroup::Cyclic(n) => vec![cycle(*n as usize, 0, *n as usize)],
            StandardGroup::AbelianProduct(factors) => {
                if factors.is_empty() {
                    bail!(Precondition, "abelian product needs at least one factor");
                }
                let degree: usize = factors.iter().map(|&n| n as usize).sum();
                let mut offset = 0;
                factors
                    .iter()
                    .map(|&n| {
                        let c = cycle(degree, offset, n as usize);
                        offset += n as usize;
                        c
                    })
                    .collect()
            }
            StandardGroup::Dihedral(order) => {
                if order % 2 != 0 {
                    bail!(Precondition, "dihedral order must be even, got {order}");
                }
                let n = (order / 2) as usize;
                match n {
                    1 => vec![cycle(2, 0, 2)],
                    2 => vec![cycle(4, 0, 2), cycle(4, 2, 2)],
                    _ => {
                        let mut refl = Permutation::identity(n);
                        for i in 0..n {
                            refl.0[i] = ((n - i) % n) as u32;
                        }
                        vec![cycle(n, 0, n), refl]
                    }
                }
            }
            StandardGroup::Quaternion(order) => {
                if order % 4 != 0 || *order < 8 {
                    bail!(Precondition, "dicyclic order must be a multiple of 4 and at least 8, got {order}");
                }
                dicyclic_generators(order / 4)
            }
            StandardGroup::Symmetric(n) => {
                let n = *n as usize;
                if n < 2 {
                    vec![Permutation::identity(1)]
                } else {
                    vec![Permutation::from_cycles(n, &[&[0, 1]]), cycle(n, 0, n)]
                }
            }
            StandardGroup::Alternating(n) => {
                let n = *n as usize;
                if n < 3 {
                    vec![Permutation::identity(1)]
                } else {
                    (2..n as u32).map(|k| Permutation::from_cycles(n, &[&[0, 1, k]])).collect()
                }
            }
        })
    }
}

fn cycle(degree: usize, offset: usize, len: usize) -> Permutation {
    let mut p = Permutation::identity(degree.max(1));
    for i in 0..len {
        p.0[offset + i] = (offset + (i + 1) % len) as u32;
    }
    p
}

/// `⟨a, b | a^{2m} = 1, b² = a^m, b a b⁻¹ = a⁻¹⟩` acting on itself; element
/// `a^i b^j` is point `i + 2m·j`.
fn dicyclic_generators(m: u32) -> Vec<Permutation> {
    let two_m = 2 * m;
    let point = |i: u32, j: u32| i % two_m + two_m * j;
    // right multiplication x ↦ x·a and x ↦ x·b
    let mut by_a = Vec::new();
    let mut by_b = Vec::new();
    for j in 0..2 {
        for i in 0..two_m {
            // a^i b^j · a = a^{i + (j ? -1 : 1)} b^j
            let ia = if j == 0 { i + 1 } else { i + two_m - 1 };
            by_a.push(point(ia, j));
            // a^i b^j · b = a^i b^{j+1}, with b² = a^m
            by_b.push(if j == 0 { point(i, 1) } else { point(i + m, 0) });
        }
    }
    vec![Permutation(by_a), Permutation(by_b)]
}

/// Builds the named group as a Cayley table with its canonical generators.
pub fn standard_group(which: &StandardGroup) -> Result<CayleyGroup> {
    let gens = which.generator_permutations()?;
    Ok(group_from_generators(&gens, which.label())?.group)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn involution_count(g: &CayleyGroup) -> usize {
        g.involutions().len()
    }

    #[test]
    fn preset_orders() {
        assert_eq!(standard_group(&StandardGroup::Cyclic(7)).unwrap().order(), 7);
        let q8 = standard_group(&StandardGroup::Quaternion(8)).unwrap();
        assert_eq!(q8.order(), 8);
        assert_eq!(involution_count(&q8), 1);
        assert_eq!(q8.center().len(), 2);
        let d4 = standard_group(&StandardGroup::Dihedral(8)).unwrap();
        assert_eq!(d4.order(), 8);
        assert_eq!(involution_count(&d4), 5);
        assert_eq!(standard_group(&StandardGroup::Symmetric(5)).unwrap().order(), 120);
        assert_eq!(standard_group(&StandardGroup::Alternating(5)).unwrap().order(), 60);
        assert_eq!(standard_group(&StandardGroup::Alternating(6)).unwrap().order(), 360);
        assert_eq!(standard_group(&StandardGroup::AbelianProduct(vec![2, 2, 4])).unwrap().order(), 16);
        assert_eq!(standard_group(&StandardGroup::Quaternion(12)).unwrap().order(), 12);
        assert_eq!(standard_group(&StandardGroup::Dihedral(4)).unwrap().order(), 4);
    }

    #[test]
    fn parse_presets() {
        assert_eq!(StandardGroup::parse("q8").unwrap(), StandardGroup::Quaternion(8));
        assert_eq!(StandardGroup::parse("D4").unwrap(), StandardGroup::Dihedral(8));
        assert_eq!(StandardGroup::parse("ab2x4").unwrap(), StandardGroup::AbelianProduct(vec![2, 4]));
        assert_eq!(StandardGroup::parse("c12").unwrap(), StandardGroup::Cyclic(12));
        assert!(StandardGroup::parse("z3").is_err());
        assert!(StandardGroup::parse("c0").is_err());
    }

    #[test]
    fn quaternion_is_nonabelian_with_unique_involution() {
        for order in [8, 12, 16, 20] {
            let q = standard_group(&StandardGroup::Quaternion(order)).unwrap();
            q.validate().unwrap();
            assert!(!q.is_abelian());
            assert_eq!(involution_count(&q), 1, "Q{order}");
        }
    }
}
