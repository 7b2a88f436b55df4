use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::automorphism::{automorphism_group_with, compose, invert, AutConfig, Automorphism, UnionFind};
use super::cayley::{CayleyGroup, Elem};
use super::hom::PartialHom;
use super::invariants::{count_isomorphism_classes, IsoCount};
use crate::error::bail;
use crate::Result;

/// Outcome of a GI-extension count.
#[derive(Clone, Debug)]
pub struct GIReport {
    pub has_gi: bool,
    /// One GI-automorphism per qualifying Out-class: the one with the
    /// lexicographically least image array.
    pub gi_automorphism_reps: Vec<Automorphism>,
    pub gi_extension_count: usize,
    pub generated_by_involutions: bool,
    /// Number of GI-automorphisms found.
    pub gi_automorphisms: usize,
    /// Number of inner cosets containing a GI-automorphism.
    pub gi_cosets: usize,
    /// Isomorphism classes among the semidirect products of the representatives.
    pub isomorphism_classes: IsoCount,
}

/// `σ² = 1` and the elements inverted by `σ` generate `G`.
pub fn is_gi_automorphism(g: &CayleyGroup, sigma: &Automorphism) -> bool {
    sigma.is_involution() && g.generates(sigma.inverted_set())
}

/// Whether the involutions of `G` generate it.
pub fn is_generated_by_involutions(g: &CayleyGroup) -> bool {
    g.order() == 1 || g.generates(&g.involutions())
}

/// `G ⋊ C2` with `C2` acting through `σ`.
///
/// Element `(g, ε)` has index `g + ε·|G|`, so the first `|G|` indices are the
/// embedded copy of `G`; `(0, 1)` is the complement generator `t` with
/// `t g t = σ(g)`.
pub fn build_semidirect_c2(g: &CayleyGroup, sigma: &Automorphism) -> Result<CayleyGroup> {
    if !sigma.is_involution() {
        bail!(Precondition, "the C2 action needs an automorphism with σ∘σ = 1");
    }
    if sigma.image().len() != g.order() {
        bail!(Precondition, "automorphism does not belong to this group");
    }
    let n = g.order();
    let order = 2 * n;
    let mut table = vec![0 as Elem; order * order];
    for e1 in 0..2 {
        for a in 0..n as Elem {
            let row = (a as usize + e1 * n) * order;
            for e2 in 0..2 {
                for b in 0..n as Elem {
                    let twisted = if e1 == 1 { sigma.apply(b) } else { b };
                    let prod = g.mul(a, twisted) as usize + ((e1 + e2) % 2) * n;
                    table[row + b as usize + e2 * n] = prod as Elem;
                }
            }
        }
    }
    let mut gens: Vec<Elem> = g.generators().to_vec();
    gens.push(n as Elem);
    CayleyGroup::from_table_unchecked(order, table, gens, format!("{}⋊C2", g.label()))
}

/// Decides directly whether `G'` is a GI-extension of the index-2 subgroup
/// `embedding`: the involutions of `G'` outside it must generate `G'`.
pub fn is_gi_extension_direct(big: &CayleyGroup, embedding: &[Elem]) -> Result<bool> {
    let mut inside = vec![false; big.order()];
    for &x in embedding {
        if x as usize >= big.order() {
            bail!(Precondition, "embedding index {x} out of range");
        }
        inside[x as usize] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    if 2 * size != big.order() {
        bail!(Precondition, "subgroup of order {size} has no index 2 in a group of order {}", big.order());
    }
    let mut sorted = embedding.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if !big.is_subgroup(&sorted) {
        bail!(Precondition, "embedding is not a subgroup");
    }
    let outside: Vec<Elem> = big.involutions().into_iter().filter(|&x| !inside[x as usize]).collect();
    Ok(big.generates(&outside))
}

/// Every GI-automorphism of `G`, each exactly once, as image arrays in
/// discovery order.
///
/// A GI-automorphism `σ` is determined by a generating sequence drawn from its
/// inverted set `I`, with `σ(t) = t⁻¹` on each term; such a sequence makes
/// `σ` an involution automatically. The search only follows the canonical
/// sequence where each term is the least element of `I` outside the subgroup
/// generated so far, which makes every `σ` appear once.
pub fn gi_automorphisms(g: &CayleyGroup) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let mut ph = PartialHom::new(g, g);
    if g.order() == 1 {
        out.push(vec![0]);
        return out;
    }
    gi_search(g, &mut ph, 0, &mut out);
    out
}

fn gi_search(g: &CayleyGroup, ph: &mut PartialHom<'_>, floor: Elem, out: &mut Vec<Vec<Elem>>) {
    for y in floor..g.order() as Elem {
        if ph.get(y) != super::hom::UNSET {
            continue;
        }
        if !ph.push(y, g.inv(y)) {
            continue;
        }
        // an element below y entering the domain as inverted would have been
        // the canonical choice instead
        let canonical = ph.last_added().iter().all(|&x| x >= y || ph.get(x) != g.inv(x));
        if canonical {
            if ph.is_total() {
                out.push(ph.map().to_vec());
            } else {
                gi_search(g, ph, y + 1, out);
            }
        }
        ph.pop();
    }
}

/// Lexicographically least tuple `(c_x∘σ)(base)` over all inner `c_x`: a key
/// identifying the coset `Inn(G)·σ`.
fn coset_key(g: &CayleyGroup, base: &[Elem], images: &[Elem]) -> Vec<Elem> {
    let mut best: Option<Vec<Elem>> = None;
    let mut buf = vec![0; base.len()];
    for x in g.elements() {
        for (slot, &b) in buf.iter_mut().zip(base) {
            *slot = g.conj(x, images[b as usize]);
        }
        if best.as_ref().is_none_or(|cur| buf < *cur) {
            best = Some(buf.clone());
        }
    }
    best.expect("group is nonempty")
}

/// Counts GI-extensions of `G` as Out-conjugacy classes of GI cosets.
pub fn gi_extension_count(g: &CayleyGroup) -> Result<GIReport> {
    gi_extension_count_with(g, &AutConfig::default())
}

pub fn gi_extension_count_with(g: &CayleyGroup, config: &AutConfig) -> Result<GIReport> {
    config.check_order(g)?;
    let base = g.small_generating_set();
    let found = gi_automorphisms(g);
    let gi_automorphisms = found.len();

    // coset key -> least GI image array in that coset
    let mut cosets: BTreeMap<Vec<Elem>, Vec<Elem>> = BTreeMap::new();
    for images in found {
        let key = coset_key(g, &base, &images);
        match cosets.get_mut(&key) {
            Some(rep) if *rep <= images => {}
            Some(rep) => *rep = images,
            None => {
                cosets.insert(key, images);
            }
        }
    }
    let keys: Vec<Vec<Elem>> = cosets.keys().cloned().collect();
    let mut uf = UnionFind::new(keys.len());
    if keys.len() > 1 {
        let aut = automorphism_group_with(g, config)?;
        let index: BTreeMap<&Vec<Elem>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
        for beta in aut.generators() {
            let beta_inv = invert(beta);
            for (i, k) in keys.iter().enumerate() {
                let conj = compose(beta, &compose(&cosets[k], &beta_inv));
                let j = match index.get(&coset_key(g, &base, &conj)) {
                    Some(&j) => j,
                    None => bail!(Validation, "conjugate of a GI-automorphism is missing from the search"),
                };
                uf.union(i, j);
            }
        }
    }
    let classes = uf.classes();
    let mut reps: Vec<Automorphism> = classes
        .iter()
        .map(|class| {
            let least = class.iter().map(|&i| &cosets[&keys[i]]).min().expect("classes are nonempty");
            Automorphism::from_image_unchecked(g, least.clone())
        })
        .collect();
    reps.sort();
    let extensions: Vec<CayleyGroup> = reps.iter().map(|s| build_semidirect_c2(g, s)).collect::<Result<_>>()?;
    let isomorphism_classes = count_isomorphism_classes(&extensions);
    Ok(GIReport {
        has_gi: !reps.is_empty(),
        gi_extension_count: reps.len(),
        gi_automorphism_reps: reps,
        generated_by_involutions: is_generated_by_involutions(g),
        gi_automorphisms,
        gi_cosets: keys.len(),
        isomorphism_classes,
    })
}
