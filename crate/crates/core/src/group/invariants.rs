use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::cayley::{CayleyGroup, Elem};
use super::hom::{image_candidates, search_images, PartialHom};

/// Groups up to this order get a full isomorphism search; larger ones are
/// compared by [`Fingerprint`] alone.
pub const FULL_ISOMORPHISM_LIMIT: usize = 48;

/// Isomorphism invariants cheap enough to compute for every group we build.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub order: usize,
    /// `(element order, count)`, ascending.
    pub order_profile: Vec<(u32, u32)>,
    pub center_order: usize,
    pub derived_order: usize,
    /// Order profile of `G/[G,G]`, which pins down the abelianization.
    pub abelianization_profile: Vec<(u32, u32)>,
    pub derived_length: Option<u32>,
    pub involutions: usize,
    pub conjugacy_classes: usize,
}

impl Fingerprint {
    pub fn of(g: &CayleyGroup) -> Self {
        let orders = g.element_orders();
        let derived = g.derived_subgroup();
        let mut in_derived = vec![false; g.order()];
        for &x in &derived {
            in_derived[x as usize] = true;
        }
        // every coset of G' contributes |G'| elements with the same quotient order
        let mut quotient: BTreeMap<u32, u32> = BTreeMap::new();
        for x in g.elements() {
            let mut y = x;
            let mut k = 1;
            while !in_derived[y as usize] {
                y = g.mul(y, x);
                k += 1;
            }
            *quotient.entry(k).or_default() += 1;
        }
        let abelianization_profile = quotient.into_iter().map(|(k, c)| (k, c / derived.len() as u32)).collect();
        Fingerprint {
            order: g.order(),
            order_profile: profile(&orders),
            center_order: g.center().len(),
            derived_order: derived.len(),
            abelianization_profile,
            derived_length: g.derived_length(),
            involutions: orders.iter().filter(|&&o| o == 2).count(),
            conjugacy_classes: conjugacy_class_count(g),
        }
    }

    pub fn abelianization_order(&self) -> usize {
        self.order / self.derived_order
    }
}

fn profile(orders: &[u32]) -> Vec<(u32, u32)> {
    let mut m: BTreeMap<u32, u32> = BTreeMap::new();
    for &o in orders {
        *m.entry(o).or_default() += 1;
    }
    m.into_iter().collect()
}

fn conjugacy_class_count(g: &CayleyGroup) -> usize {
    let mut seen = vec![false; g.order()];
    let mut classes = 0;
    for x in g.elements() {
        if seen[x as usize] {
            continue;
        }
        classes += 1;
        for y in g.elements() {
            seen[g.conj(y, x) as usize] = true;
        }
    }
    classes
}

/// An explicit isomorphism `a → b` as an image array, if one exists.
pub fn find_isomorphism(a: &CayleyGroup, b: &CayleyGroup) -> Option<Vec<Elem>> {
    if a.order() != b.order() {
        return None;
    }
    let base = a.small_generating_set();
    let candidates: Vec<Vec<Elem>> = base.iter().map(|&x| image_candidates(a, b, x)).collect();
    let mut ph = PartialHom::new(a, b);
    let mut found = None;
    search_images(&mut ph, &base, &candidates, 0, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

/// Full search up to [`FULL_ISOMORPHISM_LIMIT`], fingerprint equality above.
pub fn is_isomorphic(a: &CayleyGroup, b: &CayleyGroup) -> bool {
    if Fingerprint::of(a) != Fingerprint::of(b) {
        return false;
    }
    a.order() > FULL_ISOMORPHISM_LIMIT || find_isomorphism(a, b).is_some()
}

/// Number of isomorphism classes in a list of groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoCount {
    pub classes: usize,
    /// `false` when some comparison fell back to fingerprints only.
    pub exact: bool,
}

pub fn count_isomorphism_classes(groups: &[CayleyGroup]) -> IsoCount {
    let mut reps: Vec<(Fingerprint, &CayleyGroup)> = Vec::new();
    let mut exact = true;
    for g in groups {
        let fp = Fingerprint::of(g);
        if g.order() > FULL_ISOMORPHISM_LIMIT {
            exact = false;
        }
        let known = reps
            .iter()
            .any(|(f, h)| *f == fp && (g.order() > FULL_ISOMORPHISM_LIMIT || find_isomorphism(g, h).is_some()));
        if !known {
            reps.push((fp, g));
        }
    }
    IsoCount { classes: reps.len(), exact }
}
