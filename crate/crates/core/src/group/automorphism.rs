use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::cayley::{CayleyGroup, Elem};
use super::hom::{image_candidates, search_images, PartialHom};
use crate::error::bail;
use crate::{Error, Result};

/// Default limit on `|G|` for automorphism searches.
pub const AUT_CAP: usize = 200;

/// Limit on `|Aut(G)|` when every automorphism is materialized.
pub const AUT_ENUMERATION_CAP: u128 = 100_000;

/// Search limits; the defaults match [`AUT_CAP`] and [`AUT_ENUMERATION_CAP`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutConfig {
    pub max_group_order: usize,
    pub max_enumerated: u128,
}

impl Default for AutConfig {
    fn default() -> Self {
        AutConfig { max_group_order: AUT_CAP, max_enumerated: AUT_ENUMERATION_CAP }
    }
}

impl AutConfig {
    pub(crate) fn check_order(&self, g: &CayleyGroup) -> Result<()> {
        if g.order() > self.max_group_order {
            return Err(Error::OrderCap {
                what: "automorphism search",
                needed: g.order() as u64,
                cap: self.max_group_order as u64,
            });
        }
        Ok(())
    }
}

/// An automorphism stored as its full image array.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism {
    image: Vec<Elem>,
    is_involution: bool,
    inverted_set: Vec<Elem>,
}

impl Automorphism {
    /// Checks that `image` is a bijection preserving every table entry.
    pub fn new(g: &CayleyGroup, image: Vec<Elem>) -> Result<Self> {
        let n = g.order();
        if image.len() != n {
            bail!(Validation, "image has length {}, group has order {n}", image.len());
        }
        let mut seen = vec![false; n];
        for &y in &image {
            if y as usize >= n || seen[y as usize] {
                bail!(Validation, "image is not a bijection");
            }
            seen[y as usize] = true;
        }
        for a in g.elements() {
            for b in g.elements() {
                if image[g.mul(a, b) as usize] != g.mul(image[a as usize], image[b as usize]) {
                    bail!(Validation, "image does not preserve {a}·{b}");
                }
            }
        }
        Ok(Self::from_image_unchecked(g, image))
    }

    pub(crate) fn from_image_unchecked(g: &CayleyGroup, image: Vec<Elem>) -> Self {
        let is_involution = image.iter().enumerate().all(|(x, &y)| image[y as usize] == x as Elem);
        let inverted_set = g.elements().filter(|&x| image[x as usize] == g.inv(x)).collect();
        Automorphism { image, is_involution, inverted_set }
    }

    pub fn identity(g: &CayleyGroup) -> Self {
        Self::from_image_unchecked(g, g.elements().collect())
    }

    /// Conjugation `y ↦ x y x⁻¹`.
    pub fn inner(g: &CayleyGroup, x: Elem) -> Self {
        Self::from_image_unchecked(g, g.elements().map(|y| g.conj(x, y)).collect())
    }

    /// Inversion `x ↦ x⁻¹`; an automorphism only for abelian groups.
    pub fn inversion(g: &CayleyGroup) -> Result<Self> {
        Self::new(g, g.inverses().to_vec())
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.image[x as usize]
    }

    pub fn image(&self) -> &[Elem] {
        &self.image
    }

    pub fn is_involution(&self) -> bool {
        self.is_involution
    }

    pub fn inverted_set(&self) -> &[Elem] {
        &self.inverted_set
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x as Elem == y)
    }
}

/// `(α∘β)(x) = α(β(x))` on image arrays.
pub(crate) fn compose(alpha: &[Elem], beta: &[Elem]) -> Vec<Elem> {
    beta.iter().map(|&y| alpha[y as usize]).collect()
}

pub(crate) fn invert(alpha: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; alpha.len()];
    for (x, &y) in alpha.iter().enumerate() {
        out[y as usize] = x as Elem;
    }
    out
}

/// `Aut(G)` as a stabilizer chain on a generating tuple of `G`.
///
/// `base` generates `G`, so an automorphism is fixed by the images of the
/// base. Level `i` of the chain is the pointwise stabilizer of `base[..i]`;
/// `orbit_sizes[i]` is the orbit length of `base[i]` under it, and the
/// product of the orbit lengths is `|Aut(G)|`.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    base: Vec<Elem>,
    generators: Vec<Vec<Elem>>,
    orbit_sizes: Vec<u64>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> u128 {
        self.orbit_sizes.iter().map(|&s| s as u128).product()
    }

    pub fn base(&self) -> &[Elem] {
        &self.base
    }

    pub fn orbit_sizes(&self) -> &[u64] {
        &self.orbit_sizes
    }

    /// Generators as image arrays.
    pub fn generators(&self) -> &[Vec<Elem>] {
        &self.generators
    }
}

/// Computes generators and the order of `Aut(G)`.
pub fn automorphism_group(g: &CayleyGroup) -> Result<AutomorphismGroup> {
    automorphism_group_with(g, &AutConfig::default())
}

pub fn automorphism_group_with(g: &CayleyGroup, config: &AutConfig) -> Result<AutomorphismGroup> {
    config.check_order(g)?;
    let base = g.small_generating_set();
    let candidates: Vec<Vec<Elem>> = base.iter().map(|&b| image_candidates(g, g, b)).collect();
    let n = g.order();
    let mut generators: Vec<Vec<Elem>> = Vec::new();
    let mut orbit_sizes = vec![0u64; base.len()];

    for level in (0..base.len()).rev() {
        let mut ph = PartialHom::new(g, g);
        for &b in &base[..level] {
            let ok = ph.push(b, b);
            debug_assert!(ok);
        }
        let mut in_orbit = vec![false; n];
        let mut failed = vec![false; n];
        let mut orbit = orbit_of(base[level], &generators, n);
        for &y in &orbit {
            in_orbit[y as usize] = true;
        }
        for &y in &candidates[level] {
            if in_orbit[y as usize] || failed[y as usize] {
                continue;
            }
            let mut found: Option<Vec<Elem>> = None;
            if ph.push(base[level], y) {
                search_images(&mut ph, &base, &candidates, level + 1, &mut |m| {
                    found = Some(m.to_vec());
                    false
                });
                ph.pop();
            }
            match found {
                Some(alpha) => {
                    generators.push(alpha);
                    orbit = orbit_of(base[level], &generators, n);
                    for &z in &orbit {
                        in_orbit[z as usize] = true;
                    }
                }
                None => {
                    // every generator so far fixes base[..level], so y's whole orbit fails
                    for z in orbit_of(y, &generators, n) {
                        failed[z as usize] = true;
                    }
                }
            }
        }
        orbit_sizes[level] = orbit.len() as u64;
    }
    Ok(AutomorphismGroup { base, generators, orbit_sizes })
}

fn orbit_of(x: Elem, gens: &[Vec<Elem>], n: usize) -> Vec<Elem> {
    let mut seen = vec![false; n];
    seen[x as usize] = true;
    let mut out = vec![x];
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        for a in gens {
            let z = a[y as usize];
            if !seen[z as usize] {
                seen[z as usize] = true;
                out.push(z);
                queue.push_back(z);
            }
        }
    }
    out
}

/// Every automorphism, split into inner cosets and Out-conjugacy classes.
#[derive(Clone, Debug)]
pub struct OutClassPartition {
    /// All automorphisms, sorted by image array.
    pub automorphisms: Vec<Automorphism>,
    /// Indices of the inner automorphisms.
    pub inner: Vec<usize>,
    /// Cosets of `Inn(G)`, each a sorted list of indices; ordered by first member.
    pub cosets: Vec<Vec<usize>>,
    /// Conjugacy classes of `Out(G)`, as sorted lists of coset indices.
    pub out_classes: Vec<Vec<usize>>,
}

impl OutClassPartition {
    pub fn aut_order(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn inner_order(&self) -> usize {
        self.inner.len()
    }

    pub fn out_order(&self) -> usize {
        self.cosets.len()
    }

    /// Index of the coset containing automorphism `i`.
    pub fn coset_of(&self, i: usize) -> usize {
        self.cosets.iter().position(|c| c.binary_search(&i).is_ok()).expect("every automorphism lies in a coset")
    }
}

/// Exhaustive automorphism enumeration with the default limits.
pub fn automorphisms(g: &CayleyGroup) -> Result<OutClassPartition> {
    automorphisms_with(g, &AutConfig::default())
}

pub fn automorphisms_with(g: &CayleyGroup, config: &AutConfig) -> Result<OutClassPartition> {
    let chain = automorphism_group_with(g, config)?;
    let total = chain.order();
    if total > config.max_enumerated {
        return Err(Error::OrderCap {
            what: "automorphism enumeration",
            needed: total.min(u64::MAX as u128) as u64,
            cap: config.max_enumerated.min(u64::MAX as u128) as u64,
        });
    }
    let base = chain.base().to_vec();
    let candidates: Vec<Vec<Elem>> = base.iter().map(|&b| image_candidates(g, g, b)).collect();
    let mut images: Vec<Vec<Elem>> = Vec::new();
    let mut ph = PartialHom::new(g, g);
    search_images(&mut ph, &base, &candidates, 0, &mut |m| {
        images.push(m.to_vec());
        true
    });
    images.sort_unstable();
    if images.len() as u128 != total {
        bail!(Validation, "enumerated {} automorphisms, stabilizer chain gives {total}", images.len());
    }
    let index: BTreeMap<Vec<Elem>, usize> = images.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let lookup = |a: &Vec<Elem>| -> Result<usize> {
        match index.get(a) {
            Some(&i) => Ok(i),
            None => bail!(Validation, "composite of automorphisms missing from enumeration"),
        }
    };

    let inner_maps: Vec<Vec<Elem>> = {
        let mut v: Vec<Vec<Elem>> = g.elements().map(|x| Automorphism::inner(g, x).image).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut inner: Vec<usize> = inner_maps.iter().map(&lookup).collect::<Result<_>>()?;
    inner.sort_unstable();

    let mut coset_id = vec![usize::MAX; images.len()];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for i in 0..images.len() {
        if coset_id[i] != usize::MAX {
            continue;
        }
        let mut members = Vec::with_capacity(inner_maps.len());
        for c in &inner_maps {
            let j = lookup(&compose(c, &images[i]))?;
            coset_id[j] = cosets.len();
            members.push(j);
        }
        members.sort_unstable();
        members.dedup();
        cosets.push(members);
    }

    let mut uf = UnionFind::new(cosets.len());
    for beta in chain.generators() {
        let beta_inv = invert(beta);
        for (c, members) in cosets.iter().enumerate() {
            let conj = compose(beta, &compose(&images[members[0]], &beta_inv));
            uf.union(c, coset_id[lookup(&conj)?]);
        }
    }
    let out_classes = uf.classes();
    let automorphisms = images.into_iter().map(|a| Automorphism::from_image_unchecked(g, a)).collect();
    Ok(OutClassPartition { automorphisms, inner, cosets, out_classes })
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Classes as sorted member lists, ordered by smallest member.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.parent.len() {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        by_root.into_values().collect()
    }
}
