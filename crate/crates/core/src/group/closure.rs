use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::cayley::{CayleyGroup, Elem, CAYLEY_CAP};
use crate::error::bail;
use crate::{Error, Result};

/// Concrete group elements that can be closed into a [`CayleyGroup`].
pub trait GroupElement: Clone + Ord {
    /// `self · other`.
    fn compose(&self, other: &Self) -> Self;
    /// The identity of the ambient group `self` lives in.
    fn identity_like(&self) -> Self;
    fn is_invertible(&self) -> bool;
}

/// A permutation of `0..n`, composed left to right: `(a·b)(i) = b(a(i))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(pub Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Self {
        let mut p = Self::identity(n);
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                p.0[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(&self) -> i8 {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl GroupElement for Permutation {
    fn compose(&self, other: &Self) -> Self {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.0.len())
    }

    fn is_invertible(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0.iter().all(|&x| {
            let fresh = (x as usize) < seen.len() && !seen[x as usize];
            if fresh {
                seen[x as usize] = true;
            }
            fresh
        })
    }
}

/// The result of closing concrete generators: the table plus the concrete
/// element behind each index.
#[derive(Clone, Debug)]
pub struct Closure<E> {
    pub group: CayleyGroup,
    pub elements: Vec<E>,
}

/// Closes `generators` under composition, capped at `cap` elements
/// (default [`CAYLEY_CAP`] via [`group_from_generators`]).
///
/// Element 0 is the identity; the generator indices are recorded.
pub fn group_from_generators_capped<E: GroupElement>(
    generators: &[E],
    label: impl Into<String>,
    cap: usize,
) -> Result<Closure<E>> {
    let Some(first) = generators.first() else {
        bail!(Validation, "at least one generator map is required");
    };
    if let Some(i) = generators.iter().position(|g| !g.is_invertible()) {
        bail!(Validation, "generator {i} is not invertible");
    }
    let identity = first.identity_like();
    let mut index: BTreeMap<E, Elem> = BTreeMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity, 0);
    // right multiplication by each generator, filled during the BFS
    let mut right: Vec<Vec<Elem>> = vec![Vec::new(); generators.len()];
    let mut cursor = 0;
    while cursor < elements.len() {
        for (j, s) in generators.iter().enumerate() {
            let y = elements[cursor].compose(s);
            let next = elements.len() as Elem;
            let idx = *index.entry(y.clone()).or_insert(next);
            if idx == next {
                if elements.len() >= cap {
                    return Err(Error::OrderCap { what: "group closure", needed: cap as u64 + 1, cap: cap as u64 });
                }
                elements.push(y);
            }
            right[j].push(idx);
        }
        cursor += 1;
    }
    let n = elements.len();
    let gen_idx: Vec<Elem> = generators.iter().map(|g| index[g]).collect();

    // word tree: each element b = parent(b) · generator
    let mut parent = vec![(Elem::MAX, 0usize); n];
    let mut order = vec![0 as Elem];
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for (j, r) in right.iter().enumerate() {
            let y = r[x as usize];
            if !reached[y as usize] {
                reached[y as usize] = true;
                parent[y as usize] = (x, j);
                order.push(y);
            }
        }
    }
    let mut table = vec![0 as Elem; n * n];
    for a in 0..n {
        table[a * n] = a as Elem;
        for &b in &order[1..] {
            let (p, j) = parent[b as usize];
            table[a * n + b as usize] = right[j][table[a * n + p as usize] as usize];
        }
    }
    let group = CayleyGroup::from_table_unchecked(n, table, gen_idx, label.into())?;
    Ok(Closure { group, elements })
}

/// [`group_from_generators_capped`] with the default cap of 2000 elements.
pub fn group_from_generators<E: GroupElement>(generators: &[E], label: impl Into<String>) -> Result<Closure<E>> {
    group_from_generators_capped(generators, label, CAYLEY_CAP)
}

/// Right-regular embedding: element `g` becomes the permutation `x ↦ x·g`.
pub fn regular_permutations(g: &CayleyGroup) -> Vec<Permutation> {
    g.elements().map(|s| Permutation(g.elements().map(|x| g.mul(x, s)).collect())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_three_cycles_give_a4() {
        let a = Permutation::from_cycles(4, &[&[0, 1, 2]]);
        let b = Permutation::from_cycles(4, &[&[1, 2, 3]]);
        let c = group_from_generators(&[a, b], "A4").unwrap();
        assert_eq!(c.group.order(), 12);
        assert!(c.elements.iter().all(|p| p.sign() == 1));
        c.group.validate().unwrap();
        assert_eq!(c.elements[0], Permutation::identity(4));
    }

    #[test]
    fn single_transposition() {
        let t = Permutation::from_cycles(5, &[&[1, 3]]);
        let c = group_from_generators(&[t], "C2").unwrap();
        assert_eq!(c.group.order(), 2);
        assert_eq!(c.group.generators(), &[1]);
    }

    #[test]
    fn cap_and_invertibility_errors() {
        let cyc = Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]);
        let tr = Permutation::from_cycles(7, &[&[0, 1]]);
        let err = group_from_generators_capped(&[cyc, tr], "S7", 1000).unwrap_err();
        assert!(matches!(err, Error::OrderCap { .. }));
        let bad = Permutation(vec![0, 0, 2]);
        assert!(matches!(group_from_generators(&[bad], "x"), Err(Error::Validation(_))));
    }
}
