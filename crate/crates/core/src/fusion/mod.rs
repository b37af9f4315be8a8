//! Fusion systems over a finite p-group with fully materialized hom sets.
//!
//! Every fusion system lives over a subgroup of a shared [`Universe`]: a
//! p-group together with its sorted subgroup list.  A morphism is an
//! injective element map between universe subgroups, and a fusion system
//! stores, for each subgroup `P` of its base, every morphism `P → base`.
//! `Hom_F(P, Q)` is then the set of stored maps whose image lies in `Q`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::group::{self, FiniteGroup, GroupError, GroupHom, Permutation, SubgroupHandle};
use crate::homalg::linalg::is_prime;
use crate::verdict::ScenarioVerdict;

mod classify;
mod enumerate;
mod saturation;
mod triple;

pub use classify::{
    automorphism_group, automorphism_permutation_group, classify, has_strongly_embedded, outer_automorphism_group, AutomorphismGroup,
    SubgroupReport,
};
pub use enumerate::{enumerate_saturated, DEFAULT_AUT_CAP};
pub use triple::Triple;
pub use saturation::{extension_control, is_saturated, SaturationVerdict, SaturationWitness};

pub type SubId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FusionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("a group of order {0} is not a p-group")]
    NotPGroup(usize),
    #[error("fusion systems live over different universes")]
    UniverseMismatch,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("cap exceeded for {what}: {size} > {cap}")]
    Cap { what: String, size: usize, cap: usize },
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

/// Total number of stored morphisms a fusion system may hold.
pub const DEFAULT_MORPHISM_CAP: usize = 2_000_000;

/// Prime `p` with `n` a positive power of `p`.
pub fn prime_of_p_group(n: usize) -> Result<u32, FusionError> {
    if n < 2 {
        return Err(FusionError::NotPGroup(n));
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).unwrap() as u32;
    if group::is_power_of(n, p) {
        Ok(p)
    } else {
        Err(FusionError::NotPGroup(n))
    }
}

/// A p-group together with its subgroup list.
pub struct Universe {
    group: Arc<FiniteGroup>,
    p: u32,
    subgroups: Vec<SubgroupHandle>,
    lookup: HashMap<Vec<u32>, SubId>,
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Universe(p={}, order={}, {} subgroups)", self.p, self.group.order(), self.subgroups.len())
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && *self.group == *other.group
    }
}

impl Universe {
    pub fn new(group: Arc<FiniteGroup>, p: u32) -> Result<Arc<Universe>, FusionError> {
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p).into());
        }
        if !group::is_power_of(group.order(), p) {
            return Err(FusionError::NotPGroup(group.order()));
        }
        let subgroups = group::enumerate_subgroups(&group);
        let lookup = subgroups.iter().enumerate().map(|(i, h)| (h.members().to_vec(), i)).collect();
        Ok(Arc::new(Universe { group, p, subgroups, lookup }))
    }

    /// Re-index a p-subgroup of some larger group as a standalone universe.
    pub fn from_subgroup(s: &SubgroupHandle, p: u32) -> Result<Arc<Universe>, FusionError> {
        let amb = s.ambient();
        let gens: Vec<Permutation> = s.generators().iter().map(|&g| amb.element(g as usize).clone()).collect();
        let g = group::group_from_generators(amb.degree(), &gens)?;
        Universe::new(g, p)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn subgroups(&self) -> &[SubgroupHandle] {
        &self.subgroups
    }

    pub fn subgroup(&self, id: SubId) -> &SubgroupHandle {
        &self.subgroups[id]
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn order(&self, id: SubId) -> usize {
        self.subgroups[id].order()
    }

    pub fn trivial(&self) -> SubId {
        0
    }

    pub fn whole(&self) -> SubId {
        self.subgroups.len() - 1
    }

    pub fn id_of_members(&self, members: &[u32]) -> Option<SubId> {
        self.lookup.get(members).copied()
    }

    /// Locate a subgroup given in this universe's element indexing.
    pub fn id_of(&self, h: &SubgroupHandle) -> Option<SubId> {
        self.id_of_members(h.members())
    }

    /// Locate a subgroup given as permutations.
    pub fn id_of_permutations(&self, perms: &[Permutation]) -> Result<SubId, FusionError> {
        let idx: Result<Vec<usize>, _> = perms
            .iter()
            .map(|g| self.group.index_of(g).ok_or_else(|| FusionError::NotSubgroup(format!("{g} is outside the universe"))))
            .collect();
        Ok(self.generated(&idx?))
    }

    pub fn generated(&self, elements: &[usize]) -> SubId {
        let h = group::subgroup_generated(&self.group, elements);
        self.lookup[h.members()]
    }

    pub fn leq(&self, a: SubId, b: SubId) -> bool {
        self.subgroups[a].is_subgroup_of(&self.subgroups[b])
    }

    pub fn lt(&self, a: SubId, b: SubId) -> bool {
        a != b && self.leq(a, b)
    }

    /// Subgroups of `b`, in universe order.
    pub fn subgroups_of(&self, b: SubId) -> Vec<SubId> {
        (0..self.len()).filter(|&a| self.leq(a, b)).collect()
    }

    pub fn join(&self, a: SubId, b: SubId) -> SubId {
        let h = group::closure_with(&self.subgroups[a], &self.subgroups[b].members().iter().map(|&x| x as usize).collect::<Vec<_>>());
        self.lookup[h.members()]
    }

    pub fn intersection(&self, a: SubId, b: SubId) -> SubId {
        let m: Vec<u32> = self.subgroups[a].members().iter().copied().filter(|&x| self.subgroups[b].contains(x as usize)).collect();
        self.lookup[&m]
    }

    pub fn normalizer(&self, base: SubId, p: SubId) -> SubId {
        let h = group::normalizer(&self.subgroups[base], &self.subgroups[p]);
        self.lookup[h.members()]
    }

    pub fn centralizer(&self, base: SubId, p: SubId) -> SubId {
        let h = group::centralizer(&self.subgroups[base], &self.subgroups[p]);
        self.lookup[h.members()]
    }

    pub fn conjugate_subgroup(&self, g: usize, p: SubId) -> SubId {
        let h = self.subgroups[p].conjugate(g);
        self.lookup[h.members()]
    }

    pub fn is_normal(&self, p: SubId, base: SubId) -> bool {
        self.subgroups[p].is_normal_in(&self.subgroups[base])
    }

    fn image_id(&self, images: &[u32]) -> SubId {
        let mut m = images.to_vec();
        m.sort_unstable();
        *self.lookup.get(&m).expect("image of an injective homomorphism is a subgroup")
    }

    /// Build a morphism from its element images on `domain`.
    pub fn morphism(&self, domain: SubId, images: Vec<u32>) -> Morphism {
        let image = self.image_id(&images);
        Morphism { domain, image, images: images.into() }
    }

    pub fn identity(&self, p: SubId) -> Morphism {
        Morphism { domain: p, image: p, images: self.subgroups[p].members().into() }
    }

    /// `x ↦ g x g⁻¹` on `p`.
    pub fn conjugation(&self, g: usize, p: SubId) -> Morphism {
        let images = self.subgroups[p].members().iter().map(|&x| self.group.conj(g, x as usize) as u32).collect();
        self.morphism(p, images)
    }

    #[inline]
    pub fn apply(&self, m: &Morphism, x: usize) -> usize {
        let i = self.subgroups[m.domain].position(x).expect("element outside the domain");
        m.images[i] as usize
    }

    /// `psi ∘ phi`; requires the image of `phi` inside the domain of `psi`.
    pub fn compose(&self, psi: &Morphism, phi: &Morphism) -> Morphism {
        let pd = &self.subgroups[psi.domain];
        let images: Vec<u32> = phi.images.iter().map(|&y| psi.images[pd.position(y as usize).expect("composable maps")]).collect();
        self.morphism(phi.domain, images)
    }

    pub fn try_compose(&self, psi: &Morphism, phi: &Morphism) -> Option<Morphism> {
        self.leq(phi.image, psi.domain).then(|| self.compose(psi, phi))
    }

    pub fn restrict(&self, phi: &Morphism, r: SubId) -> Morphism {
        let images = self.subgroups[r].members().iter().map(|&x| self.apply(phi, x as usize) as u32).collect();
        self.morphism(r, images)
    }

    /// Inverse of `phi` viewed as an isomorphism onto its image.
    pub fn inverse(&self, phi: &Morphism) -> Morphism {
        let cod = &self.subgroups[phi.image];
        let dom = &self.subgroups[phi.domain];
        let mut images = vec![0u32; cod.order()];
        for (i, &y) in phi.images.iter().enumerate() {
            images[cod.position(y as usize).unwrap()] = dom.members()[i];
        }
        Morphism { domain: phi.image, image: phi.domain, images: images.into() }
    }

    /// Whether `phi` is a homomorphism on its domain.
    pub fn is_homomorphism(&self, phi: &Morphism) -> bool {
        let d = &self.subgroups[phi.domain];
        let m = d.members();
        (0..m.len()).all(|i| {
            m.iter().enumerate().all(|(j, &y)| {
                let xy = self.group.mul(m[i] as usize, y as usize);
                self.apply(phi, xy) == self.group.mul(phi.images[i] as usize, phi.images[j] as usize)
            })
        })
    }

    pub fn to_group_hom(&self, m: &Morphism, codomain: SubId) -> GroupHom {
        GroupHom {
            domain: self.subgroups[m.domain].clone(),
            codomain: self.subgroups[codomain].clone(),
            images: m.images.to_vec(),
        }
    }

    pub fn from_group_hom(&self, h: &GroupHom) -> Result<Morphism, FusionError> {
        let domain = self.id_of(&h.domain).ok_or_else(|| FusionError::NotSubgroup("domain is outside the universe".into()))?;
        if !h.is_injective() {
            return Err(FusionError::Inconsistent("fusion morphisms are injective".into()));
        }
        Ok(self.morphism(domain, h.images.clone()))
    }

    pub fn describe(&self, id: SubId) -> String {
        format!("{:?}", self.subgroups[id])
    }
}

/// An injective homomorphism between universe subgroups.
///
/// Ordering and equality only look at the domain and the element map.
#[derive(Clone)]
pub struct Morphism {
    pub domain: SubId,
    pub image: SubId,
    pub images: Arc<[u32]>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.images == other.images
    }
}
impl Eq for Morphism {}

impl std::hash::Hash for Morphism {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.domain.hash(state);
        self.images.hash(state);
    }
}

impl PartialOrd for Morphism {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Morphism {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.domain, &*self.images).cmp(&(other.domain, &*other.images))
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism(#{} -> #{}, {:?})", self.domain, self.image, &*self.images)
    }
}

impl Morphism {
    pub fn is_automorphism(&self) -> bool {
        self.domain == self.image
    }

    pub fn is_identity(&self, u: &Universe) -> bool {
        self.is_automorphism() && *self.images == *u.subgroup(self.domain).members()
    }
}

/// A fusion system over `base`, a subgroup of its universe.
pub struct FusionSystem {
    universe: Arc<Universe>,
    base: SubId,
    homs: Vec<Vec<Morphism>>,
    index: Vec<HashSet<Arc<[u32]>>>,
    class_of: Vec<usize>,
    classes: Vec<Vec<SubId>>,
    normalizers: OnceLock<Vec<SubId>>,
    centralizers: OnceLock<Vec<SubId>>,
}

impl fmt::Debug for FusionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FusionSystem(base #{} of order {}, {} morphisms)", self.base, self.universe.order(self.base), self.morphism_count())
    }
}

impl Clone for FusionSystem {
    fn clone(&self) -> Self {
        FusionSystem {
            universe: self.universe.clone(),
            base: self.base,
            homs: self.homs.clone(),
            index: self.index.clone(),
            class_of: self.class_of.clone(),
            classes: self.classes.clone(),
            normalizers: OnceLock::new(),
            centralizers: OnceLock::new(),
        }
    }
}

impl PartialEq for FusionSystem {
    fn eq(&self, other: &Self) -> bool {
        *self.universe == *other.universe && self.base == other.base && self.homs == other.homs
    }
}

impl FusionSystem {
    /// Assemble from per-subgroup lists of maps into `base`.
    pub fn from_homsets(universe: Arc<Universe>, base: SubId, homs: Vec<Vec<Morphism>>) -> Result<Self, FusionError> {
        let n = universe.len();
        if homs.len() != n {
            return Err(FusionError::Inconsistent("one hom list per universe subgroup expected".into()));
        }
        let mut homs = homs;
        let mut index = Vec::with_capacity(n);
        for (p, list) in homs.iter_mut().enumerate() {
            let inside = universe.leq(p, base);
            if !inside && !list.is_empty() {
                return Err(FusionError::Inconsistent(format!("maps from #{p}, which is not below the base")));
            }
            for m in list.iter() {
                if m.domain != p || !universe.leq(m.image, base) {
                    return Err(FusionError::Inconsistent(format!("map {m:?} does not go from #{p} into the base")));
                }
            }
            list.sort();
            list.dedup();
            if inside && !list.iter().any(|m| m.is_identity(&universe)) {
                return Err(FusionError::Inconsistent(format!("identity of #{p} missing")));
            }
            index.push(list.iter().map(|m| m.images.clone()).collect());
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for p in 0..n {
            if !universe.leq(p, base) || class_of[p] != usize::MAX {
                continue;
            }
            let mut class: Vec<SubId> = homs[p].iter().map(|m| m.image).collect();
            class.sort_unstable();
            class.dedup();
            for &q in &class {
                if class_of[q] != usize::MAX {
                    return Err(FusionError::Inconsistent("conjugacy classes overlap".into()));
                }
                class_of[q] = classes.len();
            }
            classes.push(class);
        }
        Ok(FusionSystem {
            universe,
            base,
            homs,
            index,
            class_of,
            classes,
            normalizers: OnceLock::new(),
            centralizers: OnceLock::new(),
        })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn base(&self) -> SubId {
        self.base
    }

    pub fn p(&self) -> u32 {
        self.universe.p()
    }

    pub fn base_order(&self) -> usize {
        self.universe.order(self.base)
    }

    /// Subgroups of the base, smallest first.
    pub fn subgroups(&self) -> Vec<SubId> {
        self.universe.subgroups_of(self.base)
    }

    pub fn contains_subgroup(&self, p: SubId) -> bool {
        self.universe.leq(p, self.base)
    }

    /// All morphisms `P → base`, sorted by element map.
    pub fn homs_to_base(&self, p: SubId) -> &[Morphism] {
        &self.homs[p]
    }

    /// `Hom_F(P, Q)`.
    pub fn hom(&self, p: SubId, q: SubId) -> Vec<Morphism> {
        self.homs[p].iter().filter(|m| self.universe.leq(m.image, q)).cloned().collect()
    }

    /// `Aut_F(P)`.
    pub fn aut(&self, p: SubId) -> Vec<Morphism> {
        self.homs[p].iter().filter(|m| m.image == p).cloned().collect()
    }

    pub fn contains(&self, m: &Morphism) -> bool {
        m.domain < self.index.len() && self.index[m.domain].contains(&m.images)
    }

    pub fn morphism_count(&self) -> usize {
        self.homs.iter().map(Vec::len).sum()
    }

    /// The F-conjugacy class of `p`, sorted.
    pub fn conjugacy_class(&self, p: SubId) -> &[SubId] {
        &self.classes[self.class_of[p]]
    }

    pub fn conjugacy_classes(&self) -> &[Vec<SubId>] {
        &self.classes
    }

    pub fn are_conjugate(&self, a: SubId, b: SubId) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Whether `q` is F-conjugate to a subgroup of `p`.
    pub fn subconjugate(&self, q: SubId, p: SubId) -> bool {
        self.homs[q].iter().any(|m| self.universe.leq(m.image, p))
    }

    /// `N_base(P)` for every subgroup of the base (undefined elsewhere).
    pub fn normalizer(&self, p: SubId) -> SubId {
        self.normalizers.get_or_init(|| {
            (0..self.universe.len())
                .map(|q| if self.contains_subgroup(q) { self.universe.normalizer(self.base, q) } else { usize::MAX })
                .collect()
        })[p]
    }

    pub fn centralizer(&self, p: SubId) -> SubId {
        self.centralizers.get_or_init(|| {
            (0..self.universe.len())
                .map(|q| if self.contains_subgroup(q) { self.universe.centralizer(self.base, q) } else { usize::MAX })
                .collect()
        })[p]
    }

    /// Maps `c_s|_P` for `s` in the base that land back on `P`.
    pub fn aut_base(&self, p: SubId) -> Vec<Morphism> {
        let mut out: Vec<Morphism> = self
            .universe
            .subgroup(self.normalizer(p))
            .members()
            .iter()
            .map(|&s| self.universe.conjugation(s as usize, p))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_fully_normalized(&self, p: SubId) -> bool {
        let n = self.universe.order(self.normalizer(p));
        self.conjugacy_class(p).iter().all(|&q| self.universe.order(self.normalizer(q)) <= n)
    }

    /// The first fully normalized member of the class of `p`.
    pub fn fully_normalized_conjugate(&self, p: SubId) -> SubId {
        *self.conjugacy_class(p).iter().find(|&&q| self.is_fully_normalized(q)).unwrap()
    }

    pub fn is_centric(&self, p: SubId) -> bool {
        self.conjugacy_class(p).iter().all(|&q| self.universe.leq(self.centralizer(q), q))
    }

    /// Some F-isomorphism `a → b`, if the two are conjugate.
    pub fn isomorphism(&self, a: SubId, b: SubId) -> Option<&Morphism> {
        self.homs[a].iter().find(|m| m.image == b)
    }

    /// A generating set: class representatives' automorphisms plus one
    /// transporter to every other class member.
    pub fn generating_morphisms(&self) -> Vec<Morphism> {
        let mut out = Vec::new();
        for class in &self.classes {
            let r = class[0];
            for m in &self.homs[r] {
                if m.image == r || !out.iter().any(|x: &Morphism| x.domain == r && x.image == m.image) {
                    out.push(m.clone());
                }
            }
        }
        out
    }

    /// Replace the universe by an equal one (for systems built separately).
    pub fn rebase_universe(&self, universe: &Arc<Universe>) -> Result<FusionSystem, FusionError> {
        if **universe != *self.universe {
            return Err(FusionError::UniverseMismatch);
        }
        let mut f = self.clone();
        f.universe = universe.clone();
        Ok(f)
    }

    /// Check containment of inner fusion and closure under composition,
    /// restriction and inversion; returns a description of the first failure.
    pub fn check_axioms(&self) -> Result<(), String> {
        let u = &self.universe;
        for p in self.subgroups() {
            for &s in u.subgroup(self.base).members() {
                let c = u.conjugation(s as usize, p);
                if !self.contains(&c) {
                    return Err(format!("conjugation by an element of the base missing on #{p}"));
                }
            }
            for phi in &self.homs[p] {
                for psi in &self.homs[phi.image] {
                    if !self.contains(&u.compose(psi, phi)) {
                        return Err(format!("composite of {psi:?} and {phi:?} missing"));
                    }
                }
                if !self.contains(&u.inverse(phi)) {
                    return Err(format!("inverse of {phi:?} missing"));
                }
                for r in u.subgroups_of(p) {
                    if !self.contains(&u.restrict(phi, r)) {
                        return Err(format!("restriction of {phi:?} to #{r} missing"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_cap(count: usize, cap: usize) -> Result<(), FusionError> {
    if count > cap {
        Err(FusionError::Cap { what: "morphisms in a fusion system".into(), size: count, cap })
    } else {
        Ok(())
    }
}

/// The fusion system of `g` on its p-subgroup `s`.
pub fn realize(g: &Arc<FiniteGroup>, s: &SubgroupHandle) -> Result<FusionSystem, FusionError> {
    let p = prime_of_p_group(s.order())?;
    let universe = Universe::from_subgroup(s, p)?;
    realize_in(g, s, &universe)
}

/// Realize over a subgroup `s ≤ g` inside an existing universe that
/// contains the permutations of `s`.
pub fn realize_in(g: &Arc<FiniteGroup>, s: &SubgroupHandle, universe: &Arc<Universe>) -> Result<FusionSystem, FusionError> {
    if !Arc::ptr_eq(s.ambient(), g) && **s.ambient() != **g {
        return Err(FusionError::NotSubgroup("the p-subgroup is not a subgroup of the group".into()));
    }
    if !group::is_power_of(s.order(), universe.p()) {
        return Err(FusionError::NotPGroup(s.order()));
    }
    let ug = universe.group();
    let perms = s.permutations();
    let base = universe.id_of_permutations(&perms)?;
    if universe.order(base) != s.order() {
        return Err(FusionError::NotSubgroup("the p-subgroup does not sit inside the universe".into()));
    }
    let mut g2u = vec![u32::MAX; g.order()];
    for &x in s.members() {
        g2u[x as usize] = ug.index_of(g.element(x as usize)).unwrap() as u32;
    }
    let u2g: HashMap<u32, usize> = s.members().iter().map(|&x| (g2u[x as usize], x as usize)).collect();
    let mut homs = vec![Vec::new(); universe.len()];
    let mut total = 0;
    for p in universe.subgroups_of(base) {
        let sub = universe.subgroup(p);
        let in_g: Vec<usize> = sub.members().iter().map(|x| u2g[x]).collect();
        let gens_g: Vec<usize> = sub.generators().iter().map(|x| u2g[x]).collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        for x in 0..g.order() {
            if gens_g.iter().any(|&h| !s.contains(g.conj(x, h))) {
                continue;
            }
            let images: Vec<u32> = in_g.iter().map(|&h| g2u[g.conj(x, h)]).collect();
            if images.contains(&u32::MAX) {
                continue;
            }
            seen.insert(images);
        }
        total += seen.len();
        check_cap(total, DEFAULT_MORPHISM_CAP)?;
        homs[p] = seen.into_iter().map(|im| universe.morphism(p, im)).collect();
    }
    FusionSystem::from_homsets(universe.clone(), base, homs)
}

/// The fusion system of `base` acting on itself by conjugation.
pub fn inner_fusion(universe: &Arc<Universe>, base: SubId) -> Result<FusionSystem, FusionError> {
    generate(universe, base, &[])
}

/// The smallest fusion system over `base` containing the inner one and the
/// given seeds.
pub fn generate(universe: &Arc<Universe>, base: SubId, seeds: &[Morphism]) -> Result<FusionSystem, FusionError> {
    generate_capped(universe, base, seeds, DEFAULT_MORPHISM_CAP)
}

pub fn generate_capped(
    universe: &Arc<Universe>,
    base: SubId,
    seeds: &[Morphism],
    cap: usize,
) -> Result<FusionSystem, FusionError> {
    let u = universe;
    for m in seeds {
        if !u.leq(m.domain, base) || !u.leq(m.image, base) {
            return Err(FusionError::NotSubgroup(format!("seed {m:?} does not live over the base")));
        }
        if !u.is_homomorphism(m) {
            return Err(FusionError::Inconsistent(format!("seed {m:?} is not a homomorphism")));
        }
    }
    // isomorphisms onto images; restrictions of these generate everything
    let mut originals: Vec<Morphism> = seeds.to_vec();
    for &s in u.subgroup(base).generators() {
        originals.push(u.conjugation(s as usize, base));
    }
    originals.sort();
    originals.dedup();

    let subs = u.subgroups_of(base);
    let mut by_order: Vec<Vec<SubId>> = Vec::new();
    {
        let mut orders: Vec<usize> = subs.iter().map(|&p| u.order(p)).collect();
        orders.sort_unstable();
        orders.dedup();
        for o in orders {
            by_order.push(subs.iter().copied().filter(|&p| u.order(p) == o).collect());
        }
    }
    let mut homs: Vec<Vec<Morphism>> = vec![Vec::new(); u.len()];
    let mut total = 0usize;
    for level in by_order.iter().rev() {
        let mut gens: Vec<Morphism> = Vec::new();
        for x in &originals {
            for &r in level {
                if u.leq(r, x.domain) {
                    gens.push(u.restrict(x, r));
                }
            }
        }
        gens.sort();
        gens.dedup();
        let groupoid = Groupoid::build(u, level, &gens);
        for comp in &groupoid.components {
            let size = comp.members.len() * comp.automorphisms.len();
            total += size * comp.members.len();
            check_cap(total, cap)?;
            for (qi, &q) in comp.members.iter().enumerate() {
                let back = u.inverse(&comp.transporters[qi]);
                let mut list = Vec::with_capacity(size);
                for a in &comp.automorphisms {
                    let a_back = u.compose(a, &back);
                    for t in &comp.transporters {
                        list.push(u.compose(t, &a_back));
                    }
                }
                homs[q] = list;
            }
        }
    }
    FusionSystem::from_homsets(universe.clone(), base, homs)
}

struct Component {
    members: Vec<SubId>,
    /// `transporters[i]`: representative → `members[i]`
    transporters: Vec<Morphism>,
    automorphisms: Vec<Morphism>,
}

struct Groupoid {
    components: Vec<Component>,
}

impl Groupoid {
    fn build(u: &Universe, objects: &[SubId], gens: &[Morphism]) -> Groupoid {
        let mut adjacency: HashMap<SubId, Vec<Morphism>> = objects.iter().map(|&o| (o, Vec::new())).collect();
        for g in gens {
            adjacency.get_mut(&g.domain).unwrap().push(g.clone());
            if g.image != g.domain {
                adjacency.get_mut(&g.image).unwrap().push(u.inverse(g));
            }
        }
        let mut placed: HashMap<SubId, (usize, usize)> = HashMap::new();
        let mut components = Vec::new();
        for &root in objects {
            if placed.contains_key(&root) {
                continue;
            }
            let ci = components.len();
            let mut comp = Component { members: vec![root], transporters: vec![u.identity(root)], automorphisms: Vec::new() };
            placed.insert(root, (ci, 0));
            let mut queue = VecDeque::from([root]);
            while let Some(a) = queue.pop_front() {
                let ta = comp.transporters[placed[&a].1].clone();
                for g in &adjacency[&a] {
                    if let std::collections::hash_map::Entry::Vacant(e) = placed.entry(g.image) {
                        e.insert((ci, comp.members.len()));
                        comp.members.push(g.image);
                        comp.transporters.push(u.compose(g, &ta));
                        queue.push_back(g.image);
                    }
                }
            }
            // Schreier generators of the representative's automorphism group
            let mut schreier: Vec<Morphism> = Vec::new();
            for &a in &comp.members {
                let ta = &comp.transporters[placed[&a].1];
                for g in &adjacency[&a] {
                    let tb = &comp.transporters[placed[&g.image].1];
                    let s = u.compose(&u.inverse(tb), &u.compose(g, ta));
                    if !s.is_identity(u) {
                        schreier.push(s);
                    }
                }
            }
            schreier.sort();
            schreier.dedup();
            comp.automorphisms = close_group(u, root, &schreier);
            // sort members for deterministic output
            let mut order: Vec<usize> = (0..comp.members.len()).collect();
            order.sort_by_key(|&i| comp.members[i]);
            comp.members = order.iter().map(|&i| comp.members[i]).collect();
            comp.transporters = order.iter().map(|&i| comp.transporters[i].clone()).collect();
            for (k, &m) in comp.members.iter().enumerate() {
                placed.insert(m, (ci, k));
            }
            components.push(comp);
        }
        Groupoid { components }
    }
}

/// All products of the given automorphisms of `p`.
pub(crate) fn close_group(u: &Universe, p: SubId, gens: &[Morphism]) -> Vec<Morphism> {
    let id = u.identity(p);
    let mut seen: HashSet<Morphism> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = u.compose(g, &x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Morphism> = seen.into_iter().collect();
    out.sort();
    out
}

/// `⟨F1, F2⟩` over the base of `f1`; `f2` may live over a subgroup.
pub fn join(f1: &FusionSystem, f2: &FusionSystem) -> Result<FusionSystem, FusionError> {
    if *f1.universe != *f2.universe {
        return Err(FusionError::UniverseMismatch);
    }
    let u = &f1.universe;
    if !u.leq(f2.base, f1.base) {
        return Err(FusionError::NotSubgroup("the second system must live over a subgroup of the first base".into()));
    }
    let mut seeds = f1.generating_morphisms();
    seeds.extend(f2.generating_morphisms());
    generate(u, f1.base, &seeds)
}

/// `⟨F1, extra⟩` over the base of `f1`.
pub fn join_with(f: &FusionSystem, extra: &[Morphism]) -> Result<FusionSystem, FusionError> {
    let mut seeds = f.generating_morphisms();
    seeds.extend_from_slice(extra);
    generate(&f.universe, f.base, &seeds)
}

/// `N_F(P)` over `N_S(P)`: maps that extend to `AP → BP` fixing `P`.
pub fn normalizer_subsystem(f: &FusionSystem, p: SubId) -> Result<FusionSystem, FusionError> {
    let u = &f.universe;
    if !f.contains_subgroup(p) {
        return Err(FusionError::NotSubgroup("not a subgroup of the base".into()));
    }
    let nbase = f.normalizer(p);
    let mut homs = vec![Vec::new(); u.len()];
    for a in u.subgroups_of(nbase) {
        let ap = u.join(a, p);
        let mut set: HashSet<Morphism> = HashSet::new();
        for phi in f.homs_to_base(ap) {
            if !u.leq(phi.image, nbase) {
                continue;
            }
            if u.restrict(phi, p).image != p {
                continue;
            }
            set.insert(u.restrict(phi, a));
        }
        homs[a] = set.into_iter().collect();
    }
    FusionSystem::from_homsets(u.clone(), nbase, homs)
}

/// Homset-wise inclusion `H ⊆ F`.
pub fn fusion_subsystem_leq(h: &FusionSystem, f: &FusionSystem) -> bool {
    *h.universe == *f.universe
        && h.universe.leq(h.base, f.base)
        && h.subgroups().into_iter().all(|p| h.homs[p].iter().all(|m| f.contains(m)))
}

pub fn fusion_subsystem_eq(h: &FusionSystem, f: &FusionSystem) -> bool {
    *h.universe == *f.universe && h.base == f.base && h.homs == f.homs
}

/// Homset-wise intersection, over the intersection of the bases.
pub fn intersection(a: &FusionSystem, b: &FusionSystem) -> Result<Vec<Vec<Morphism>>, FusionError> {
    if *a.universe != *b.universe {
        return Err(FusionError::UniverseMismatch);
    }
    let u = &a.universe;
    let base = u.intersection(a.base, b.base);
    Ok((0..u.len())
        .map(|p| {
            if u.leq(p, base) {
                a.homs[p].iter().filter(|m| u.leq(m.image, base) && b.contains(m)).cloned().collect()
            } else {
                Vec::new()
            }
        })
        .collect())
}

/// For `H ⊆ F` over `S' ≤ S` and `P` fully F-normalized, compare `N_H(P)`
/// with `N_F(P) ∩ H` on every F-centric subgroup of `N_{S'}(P)`.
pub fn normalizer_intersection_check(f: &FusionSystem, h: &FusionSystem, p: SubId) -> Result<ScenarioVerdict, FusionError> {
    let mut v = ScenarioVerdict::new();
    let u = f.universe();
    v.require("same universe", **u == *h.universe, None);
    if !v.hypotheses_hold() {
        return Ok(v);
    }
    v.require("H is a subsystem of F", fusion_subsystem_leq(h, f), None);
    v.require("P lies in the base of H", h.contains_subgroup(p), Some(u.describe(p)));
    if !v.hypotheses_hold() {
        return Ok(v);
    }
    v.require("F saturated", is_saturated(f).saturated, None);
    v.require("H saturated", is_saturated(h).saturated, None);
    v.require("P fully F-normalized", f.is_fully_normalized(p), Some(u.describe(p)));
    v.conclude(|details| {
        let nh = normalizer_subsystem(h, p)?;
        let nf = normalizer_subsystem(f, p)?;
        if !fusion_subsystem_leq(&nh, &nf) {
            details.push("N_H(P) is not contained in N_F(P)".into());
            return Ok(false);
        }
        let mut ok = true;
        for r in nh.subgroups() {
            if !f.is_centric(r) {
                continue;
            }
            let left: Vec<Morphism> = nh.homs_to_base(r).to_vec();
            let right: Vec<Morphism> =
                nf.homs_to_base(r).iter().filter(|m| u.leq(m.image, nh.base()) && h.contains(m)).cloned().collect();
            if left != right {
                details.push(format!("homsets differ on {}", u.describe(r)));
                ok = false;
            }
        }
        Ok::<bool, FusionError>(ok)
    })?;
    Ok(v)
}

/// `Rep_F(P, H)`: maps `P → S'` in F modulo postcomposition with
/// H-isomorphisms, where `S'` is the base of `H`.
#[derive(Clone, Debug)]
pub struct RepSet {
    classes: Vec<Morphism>,
    index: HashMap<Arc<[u32]>, usize>,
}

impl RepSet {
    /// Class representatives, each the smallest element map of its class.
    pub fn classes(&self) -> &[Morphism] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, m: &Morphism) -> Option<usize> {
        self.index.get(&m.images).copied()
    }

    /// The H-isomorphism `θ` with `m = θ ∘ rep`.
    pub fn transport(&self, u: &Universe, class: usize, m: &Morphism) -> Morphism {
        u.compose(m, &u.inverse(&self.classes[class]))
    }
}

pub fn rep_set(f: &FusionSystem, p: SubId, h: &FusionSystem) -> RepSet {
    let u = f.universe();
    let mut classes = Vec::new();
    let mut index: HashMap<Arc<[u32]>, usize> = HashMap::new();
    if !f.contains_subgroup(p) {
        return RepSet { classes, index };
    }
    // maps are sorted, so the first member met is the class minimum
    for phi in f.homs_to_base(p) {
        if !u.leq(phi.image, h.base()) || index.contains_key(&phi.images) {
            continue;
        }
        let c = classes.len();
        for theta in h.homs_to_base(phi.image) {
            index.insert(u.compose(theta, phi).images, c);
        }
        classes.push(phi.clone());
    }
    RepSet { classes, index }
}
