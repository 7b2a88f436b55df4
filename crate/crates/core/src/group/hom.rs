//! Incremental homomorphism construction, the engine behind every
//! generator-image search (automorphisms, GI-automorphisms, isomorphisms).

use alloc::vec;
use alloc::vec::Vec;

use super::cayley::{CayleyGroup, Elem};

pub(crate) const UNSET: Elem = Elem::MAX;

/// A homomorphism defined on the subgroup generated by the pushed
/// generators, kept injective. Each `push` extends the domain by a BFS over
/// the Cayley graph and checks every edge; `pop` undoes the last push.
pub(crate) struct PartialHom<'a> {
    dom: &'a CayleyGroup,
    cod: &'a CayleyGroup,
    map: Vec<Elem>,
    used: Vec<bool>,
    gens: Vec<(Elem, Elem)>,
    members: Vec<Elem>,
    frames: Vec<(usize, usize)>,
}

impl<'a> PartialHom<'a> {
    pub fn new(dom: &'a CayleyGroup, cod: &'a CayleyGroup) -> Self {
        let mut map = vec![UNSET; dom.order()];
        let mut used = vec![false; cod.order()];
        map[0] = 0;
        used[0] = true;
        PartialHom { dom, cod, map, used, gens: Vec::new(), members: vec![0], frames: Vec::new() }
    }

    #[inline]
    pub fn get(&self, x: Elem) -> Elem {
        self.map[x as usize]
    }

    pub fn is_total(&self) -> bool {
        self.members.len() == self.dom.order()
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    #[cfg(test)]
    pub fn domain_size(&self) -> usize {
        self.members.len()
    }

    /// Domain elements added by the most recent push.
    pub fn last_added(&self) -> &[Elem] {
        match self.frames.last() {
            Some(&(mark, _)) => &self.members[mark..],
            None => &self.members[..0],
        }
    }

    /// Extends by `s ↦ image`. Returns `false` (leaving the state unchanged)
    /// if no injective homomorphism on the enlarged subgroup agrees.
    pub fn push(&mut self, s: Elem, image: Elem) -> bool {
        let mark = self.members.len();
        self.frames.push((mark, self.gens.len()));
        if self.map[s as usize] != UNSET {
            if self.map[s as usize] == image {
                return true;
            }
            self.frames.pop();
            return false;
        }
        self.gens.push((s, image));
        let last = self.gens.len() - 1;
        let mut i = 0;
        while i < self.members.len() {
            let x = self.members[i];
            let fx = self.map[x as usize];
            let from = if i < mark { last } else { 0 };
            for j in from..self.gens.len() {
                let (t, ft) = self.gens[j];
                let y = self.dom.mul(x, t);
                let expected = self.cod.mul(fx, ft);
                let fy = self.map[y as usize];
                if fy == UNSET {
                    if self.used[expected as usize] {
                        self.pop();
                        return false;
                    }
                    self.map[y as usize] = expected;
                    self.used[expected as usize] = true;
                    self.members.push(y);
                } else if fy != expected {
                    self.pop();
                    return false;
                }
            }
            i += 1;
        }
        true
    }

    pub fn pop(&mut self) {
        let (mark, ngens) = self.frames.pop().expect("pop without push");
        for &x in &self.members[mark..] {
            let fx = self.map[x as usize];
            self.used[fx as usize] = false;
            self.map[x as usize] = UNSET;
        }
        self.members.truncate(mark);
        self.gens.truncate(ngens);
    }
}

/// Elements of `cod` that can be the image of `g` under an isomorphism
/// `dom → cod`: same order and same centralizer size.
pub(crate) fn image_candidates(dom: &CayleyGroup, cod: &CayleyGroup, g: Elem) -> Vec<Elem> {
    let ord = dom.element_order(g);
    let cent = dom.centralizer_order(g);
    cod.elements().filter(|&y| cod.element_order(y) == ord && cod.centralizer_order(y) == cent).collect()
}

/// Depth-first search over images of `base[level..]`; calls `visit` on every
/// total injective homomorphism. `visit` returns `false` to stop the search.
/// Returns `false` if stopped.
pub(crate) fn search_images(
    ph: &mut PartialHom<'_>,
    base: &[Elem],
    candidates: &[Vec<Elem>],
    level: usize,
    visit: &mut dyn FnMut(&[Elem]) -> bool,
) -> bool {
    if level == base.len() {
        debug_assert!(ph.is_total());
        return visit(ph.map());
    }
    for &y in &candidates[level] {
        if ph.push(base[level], y) {
            let keep_going = search_images(ph, base, candidates, level + 1, visit);
            ph.pop();
            if !keep_going {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::standard::{standard_group, StandardGroup};

    #[test]
    fn push_pop_restores_state() {
        let g = standard_group(&StandardGroup::Dihedral(8)).unwrap();
        let base = g.small_generating_set();
        let mut ph = PartialHom::new(&g, &g);
        assert!(ph.push(base[0], base[0]));
        let size = ph.domain_size();
        assert!(ph.push(base[1], base[1]));
        assert!(ph.is_total());
        ph.pop();
        assert_eq!(ph.domain_size(), size);
        ph.pop();
        assert_eq!(ph.domain_size(), 1);
    }

    #[test]
    fn rejects_order_mismatch() {
        let g = standard_group(&StandardGroup::Cyclic(4)).unwrap();
        let mut ph = PartialHom::new(&g, &g);
        // generator of order 4 cannot map to an involution injectively
        let inv = g.involutions()[0];
        assert!(!ph.push(g.generators()[0], inv));
        assert_eq!(ph.domain_size(), 1);
    }
}
