use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::bail;
use crate::Result;

/// Element index into a [`CayleyGroup`].
pub type Elem = u32;

/// Default cap on the number of elements of a Cayley table.
pub const CAYLEY_CAP: usize = 2000;

const FULL_ASSOCIATIVITY_LIMIT: usize = 256;
const SAMPLED_TRIPLES: usize = 100_000;

/// A finite group given by its full multiplication table.
///
/// Element `0` is the identity. `table[a * order + b]` is the index of `a·b`.
#[derive(Clone, PartialEq, Eq)]
pub struct CayleyGroup {
    order: usize,
    table: Vec<Elem>,
    inverses: Vec<Elem>,
    generators: Vec<Elem>,
    label: String,
}

impl core::fmt::Debug for CayleyGroup {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CayleyGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

impl CayleyGroup {
    /// Builds a group from a raw table, checking every invariant.
    pub fn from_table(table: Vec<Elem>, generators: Vec<Elem>, label: impl Into<String>) -> Result<Self> {
        let order = isqrt_exact(table.len())?;
        if order == 0 {
            bail!(Validation, "empty table");
        }
        let g = Self::from_table_unchecked(order, table, generators, label.into())?;
        g.validate()?;
        Ok(g)
    }

    /// Builds a group from a table known to come from a faithful closure; only
    /// the inverse array is derived, no associativity scan is done.
    pub(crate) fn from_table_unchecked(
        order: usize,
        table: Vec<Elem>,
        generators: Vec<Elem>,
        label: String,
    ) -> Result<Self> {
        if table.len() != order * order {
            bail!(Validation, "table has {} entries, expected {}", table.len(), order * order);
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= order) {
            bail!(Validation, "table entry {bad} outside 0..{order}");
        }
        let mut inverses = vec![Elem::MAX; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            match row.iter().position(|&x| x == 0) {
                Some(b) => inverses[a] = b as Elem,
                None => bail!(Validation, "element {a} has no inverse"),
            }
        }
        Ok(CayleyGroup { order, table, inverses, generators, label })
    }

    /// Checks closure, identity, inverses, associativity and generation.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a as Elem) != a as Elem || self.mul(a as Elem, 0) != a as Elem {
                bail!(Validation, "element 0 does not act as identity on {a}");
            }
            let inv = self.inverses[a];
            if self.mul(a as Elem, inv) != 0 || self.mul(inv, a as Elem) != 0 {
                bail!(Validation, "inverse of {a} is not two-sided");
            }
            let mut seen = vec![false; n];
            for b in 0..n {
                let x = self.mul(a as Elem, b as Elem) as usize;
                if seen[x] {
                    bail!(Validation, "row {a} is not a permutation");
                }
                seen[x] = true;
            }
        }
        let assoc = |a: Elem, b: Elem, c: Elem| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n as Elem {
                for b in 0..n as Elem {
                    for c in 0..n as Elem {
                        if !assoc(a, b, c) {
                            bail!(Validation, "({a}·{b})·{c} != {a}·({b}·{c})");
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ca11);
            for _ in 0..SAMPLED_TRIPLES {
                let a = (rng.next_u32() as usize % n) as Elem;
                let b = (rng.next_u32() as usize % n) as Elem;
                let c = (rng.next_u32() as usize % n) as Elem;
                if !assoc(a, b, c) {
                    bail!(Validation, "({a}·{b})·{c} != {a}·({b}·{c})");
                }
            }
        }
        if self.generators.iter().any(|&g| g as usize >= n) {
            bail!(Validation, "generator index out of range");
        }
        if self.closure(&self.generators).len() != n {
            bail!(Validation, "generators do not generate the group");
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    pub fn inverses(&self) -> &[Elem] {
        &self.inverses
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    /// `g h g⁻¹`.
    #[inline]
    pub fn conj(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn element_order(&self, g: Elem) -> u32 {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<u32> {
        self.elements().map(|g| self.element_order(g)).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().filter(|&b| b > a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<Elem> {
        self.elements().filter(|&z| self.generators.iter().all(|&g| self.mul(z, g) == self.mul(g, z))).collect()
    }

    pub fn centralizer_order(&self, g: Elem) -> usize {
        self.elements().filter(|&x| self.mul(x, g) == self.mul(g, x)).count()
    }

    /// Involutions (elements of order exactly 2).
    pub fn involutions(&self) -> Vec<Elem> {
        self.elements().filter(|&g| g != 0 && self.mul(g, g) == 0).collect()
    }

    /// Subgroup generated by `gens`, as a sorted index list.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut queue = VecDeque::from([0 as Elem]);
        let mut out = vec![0 as Elem];
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !member[y as usize] {
                    member[y as usize] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn generates(&self, gens: &[Elem]) -> bool {
        self.closure(gens).len() == self.order
    }

    /// Whether the sorted index set is closed under multiplication.
    pub fn is_subgroup(&self, subset: &[Elem]) -> bool {
        let mut member = vec![false; self.order];
        for &x in subset {
            member[x as usize] = true;
        }
        member[0] && subset.iter().all(|&a| subset.iter().all(|&b| member[self.mul(a, b) as usize]))
    }

    /// Commutator subgroup `[H, H]` of the subgroup with the given elements.
    pub fn derived_subgroup_of(&self, subgroup: &[Elem]) -> Vec<Elem> {
        let mut comms = Vec::new();
        let mut seen = vec![false; self.order];
        for &a in subgroup {
            for &b in subgroup {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    comms.push(c);
                }
            }
        }
        self.closure(&comms)
    }

    pub fn derived_subgroup(&self) -> Vec<Elem> {
        let all: Vec<Elem> = self.elements().collect();
        self.derived_subgroup_of(&all)
    }

    /// Length of the derived series, `None` if it stalls above the trivial group.
    pub fn derived_length(&self) -> Option<u32> {
        let mut h: Vec<Elem> = self.elements().collect();
        let mut len = 0;
        while h.len() > 1 {
            let next = self.derived_subgroup_of(&h);
            if next.len() == h.len() {
                return None;
            }
            h = next;
            len += 1;
        }
        Some(len)
    }

    /// A short generating sequence picked greedily: at each step the element
    /// enlarging the current subgroup the most (smallest index on ties).
    /// Automorphisms are determined by the images of this sequence.
    pub fn small_generating_set(&self) -> Vec<Elem> {
        let mut gens: Vec<Elem> = Vec::new();
        let mut current = vec![0 as Elem];
        while current.len() < self.order {
            let mut member = vec![false; self.order];
            for &x in &current {
                member[x as usize] = true;
            }
            let mut best: Option<(usize, Elem, Vec<Elem>)> = None;
            for g in self.elements().filter(|&g| !member[g as usize]) {
                let mut trial = gens.clone();
                trial.push(g);
                let c = self.closure(&trial);
                let full = c.len() == self.order;
                if best.as_ref().is_none_or(|(n, _, _)| c.len() > *n) {
                    best = Some((c.len(), g, c));
                }
                if full {
                    break;
                }
            }
            let (_, g, c) = best.expect("proper subgroup has an element outside it");
            gens.push(g);
            current = c;
        }
        gens
    }
}

fn isqrt_exact(len: usize) -> Result<usize> {
    let n = crate::arith::isqrt(len as u64) as usize;
    if n * n != len {
        bail!(Validation, "table length {len} is not a square");
    }
    Ok(n)
}
