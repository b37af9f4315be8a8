//! Orbit categories over a closed subgroup family, and contravariant
//! F_p-functors on them.
//!
//! Objects are subgroups of the base of a fusion system; `Hom(P, Q)` is the
//! set of `Inn(Q)`-orbits of `Hom_F(P, Q)` under postcomposition, each
//! represented by its lexicographically smallest element map.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::fusion::{FusionError, FusionSystem, Morphism, SubId, Universe};
use crate::homalg::linalg::LinalgError;
use crate::homalg::HomalgError;

mod constructions;
mod functor;

pub use constructions::{
    cohomology_functor, constant_functor, induce_functor, inner_maps_act_trivially, representable_functor, restrict_functor,
    CohomologyCache, InducedBlock, InducedFunctor,
};
pub use functor::{nat_space, FunctorDump, FunctorModule, NaturalTransformation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Homalg(#[from] HomalgError),
    #[error("family is not closed: {0}")]
    Family(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not functorial: {0}")]
    NotFunctorial(String),
    #[error("functors live over different categories")]
    CategoryMismatch,
}

impl From<LinalgError> for OrbitError {
    fn from(e: LinalgError) -> Self {
        OrbitError::Homalg(e.into())
    }
}

/// A set of subgroups of the base, with flags recording which closure
/// properties hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupFamily {
    members: Vec<SubId>,
    pub conjugation_closed: bool,
    pub overgroup_closed: bool,
}

impl SubgroupFamily {
    /// Record `members` and compute the closure flags relative to `f`.
    pub fn new(f: &FusionSystem, members: impl IntoIterator<Item = SubId>) -> Self {
        let mut members: Vec<SubId> = members.into_iter().filter(|&p| f.contains_subgroup(p)).collect();
        members.sort_unstable();
        members.dedup();
        let set: HashSet<SubId> = members.iter().copied().collect();
        let u = f.universe();
        let conjugation_closed = members.iter().all(|&p| f.conjugacy_class(p).iter().all(|q| set.contains(q)));
        let overgroup_closed =
            members.iter().all(|&p| f.subgroups().into_iter().filter(|&q| u.leq(p, q)).all(|q| set.contains(&q)));
        SubgroupFamily { members, conjugation_closed, overgroup_closed }
    }

    pub fn members(&self) -> &[SubId] {
        &self.members
    }

    pub fn contains(&self, p: SubId) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_certified(&self) -> bool {
        self.conjugation_closed && self.overgroup_closed
    }

    /// The members lying in the base of `h`, with flags relative to `h`.
    pub fn restricted_to(&self, h: &FusionSystem) -> SubgroupFamily {
        SubgroupFamily::new(h, self.members.iter().copied())
    }
}

/// Least family containing `seed` that is closed under F-conjugacy and
/// overgroups in the base.
pub fn close_family(f: &FusionSystem, seed: &[SubId]) -> SubgroupFamily {
    let u = f.universe();
    let subs = f.subgroups();
    let mut set: HashSet<SubId> = HashSet::new();
    for &p in seed {
        for &q in f.conjugacy_class(p) {
            for &r in &subs {
                if u.leq(q, r) {
                    set.insert(r);
                }
            }
        }
    }
    // overgroups of conjugates are conjugates of overgroups, so one more
    // conjugation pass closes the set
    let extra: Vec<SubId> = set.iter().flat_map(|&r| f.conjugacy_class(r).to_vec()).collect();
    set.extend(extra);
    SubgroupFamily::new(f, set)
}

/// `F^c`.
pub fn centric_family(f: &FusionSystem) -> SubgroupFamily {
    SubgroupFamily::new(f, f.centric_subgroups())
}

/// Morphism of an orbit category.
#[derive(Clone, Debug)]
pub struct OrbitMorphism {
    pub source: usize,
    pub target: usize,
    /// Lexicographically smallest map in the coset.
    pub rep: Morphism,
}

pub struct OrbitCategory {
    fusion: Arc<FusionSystem>,
    family: SubgroupFamily,
    objects: Vec<SubId>,
    object_of: HashMap<SubId, usize>,
    morphisms: Vec<OrbitMorphism>,
    hom: Vec<Vec<Vec<usize>>>,
    identities: Vec<usize>,
    /// `(source, target, images)` of every member of every Inn-orbit.
    lookup: HashMap<(usize, usize, Arc<[u32]>), usize>,
    composition: HashMap<(usize, usize), usize>,
    generators: OnceLock<Vec<usize>>,
}

impl std::fmt::Debug for OrbitCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OrbitCategory({} objects, {} morphisms)", self.objects.len(), self.morphisms.len())
    }
}

impl OrbitCategory {
    pub fn build(fusion: Arc<FusionSystem>, family: &SubgroupFamily) -> Result<Arc<OrbitCategory>, OrbitError> {
        if !family.is_certified() {
            return Err(OrbitError::Family(format!(
                "conjugation closed: {}, overgroup closed: {}",
                family.conjugation_closed, family.overgroup_closed
            )));
        }
        let u = fusion.universe().clone();
        let objects: Vec<SubId> = family.members().to_vec();
        if objects.iter().any(|&p| !fusion.contains_subgroup(p)) {
            return Err(OrbitError::Family("member outside the base".into()));
        }
        let object_of: HashMap<SubId, usize> = objects.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let n = objects.len();
        let mut morphisms = Vec::new();
        let mut hom = vec![vec![Vec::new(); n]; n];
        let mut lookup = HashMap::new();
        for (si, &p) in objects.iter().enumerate() {
            for (ti, &q) in objects.iter().enumerate() {
                let maps = fusion.hom(p, q);
                let mut done: HashSet<Arc<[u32]>> = HashSet::new();
                for phi in &maps {
                    if done.contains(&phi.images) {
                        continue;
                    }
                    let orbit: Vec<Morphism> = u
                        .subgroup(q)
                        .members()
                        .iter()
                        .map(|&x| u.compose(&u.conjugation(x as usize, q), phi))
                        .collect();
                    let rep = orbit.iter().min_by(|a, b| a.images.cmp(&b.images)).unwrap().clone();
                    let id = morphisms.len();
                    for m in orbit {
                        done.insert(m.images.clone());
                        lookup.insert((si, ti, m.images), id);
                    }
                    morphisms.push(OrbitMorphism { source: si, target: ti, rep });
                    hom[si][ti].push(id);
                }
            }
        }
        let identities: Vec<usize> =
            (0..n).map(|i| lookup[&(i, i, Arc::from(u.subgroup(objects[i]).members()))]).collect();
        let mut cat = OrbitCategory {
            fusion,
            family: family.clone(),
            objects,
            object_of,
            morphisms,
            hom,
            identities,
            lookup,
            composition: HashMap::new(),
            generators: OnceLock::new(),
        };
        let mut composition = HashMap::new();
        for f in 0..cat.morphisms.len() {
            let mid = cat.morphisms[f].target;
            for t in 0..n {
                for &g in &cat.hom[mid][t] {
                    let c = u.compose(&cat.morphisms[g].rep, &cat.morphisms[f].rep);
                    let s = cat.morphisms[f].source;
                    let id = *cat.lookup.get(&(s, t, c.images)).ok_or_else(|| {
                        OrbitError::Fusion(FusionError::Inconsistent("composite missing from the fusion system".into()))
                    })?;
                    composition.insert((g, f), id);
                }
            }
        }
        cat.composition = composition;
        Ok(Arc::new(cat))
    }

    pub fn fusion(&self) -> &Arc<FusionSystem> {
        &self.fusion
    }

    pub fn universe(&self) -> &Arc<Universe> {
        self.fusion.universe()
    }

    pub fn p(&self) -> u32 {
        self.fusion.p()
    }

    pub fn family(&self) -> &SubgroupFamily {
        &self.family
    }

    pub fn objects(&self) -> &[SubId] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_of(&self, p: SubId) -> Option<usize> {
        self.object_of.get(&p).copied()
    }

    pub fn morphisms(&self) -> &[OrbitMorphism] {
        &self.morphisms
    }

    pub fn morphism(&self, id: usize) -> &OrbitMorphism {
        &self.morphisms[id]
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn hom(&self, source: usize, target: usize) -> &[usize] {
        &self.hom[source][target]
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.morphisms[m].source] == m
    }

    /// `g ∘ f`, when `f` ends where `g` starts.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.composition.get(&(g, f)).copied()
    }

    /// The morphism `[m]` into `target`, for any fusion map `m` whose image
    /// lies in that object.
    pub fn morphism_of(&self, target: usize, m: &Morphism) -> Option<usize> {
        let source = *self.object_of.get(&m.domain)?;
        self.lookup.get(&(source, target, m.images.clone())).copied()
    }

    /// Morphisms with the given source, in id order.
    pub fn out_of(&self, source: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).flat_map(move |t| self.hom[source][t].iter().copied())
    }

    /// A set of non-identity morphisms generating every morphism under
    /// composition.
    pub fn generators(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let mut chosen: Vec<usize> = Vec::new();
            let mut generated: HashSet<usize> = self.identities.iter().copied().collect();
            // larger sources first so that long composites are found early
            let mut order: Vec<usize> = (0..self.morphisms.len()).collect();
            order.sort_by_key(|&m| (std::cmp::Reverse(self.morphisms[m].source), self.morphisms[m].target, m));
            for m in order {
                if generated.contains(&m) {
                    continue;
                }
                chosen.push(m);
                let mut queue: VecDeque<usize> = generated.iter().copied().collect();
                queue.push_back(m);
                generated.insert(m);
                while let Some(x) = queue.pop_front() {
                    for &g in &chosen {
                        for y in [self.compose(g, x), self.compose(x, g)].into_iter().flatten() {
                            if generated.insert(y) {
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
            chosen.sort_unstable();
            chosen
        })
    }

    /// Exhaustive associativity and identity check.
    pub fn check_laws(&self) -> Result<(), String> {
        for (m, mor) in self.morphisms.iter().enumerate() {
            if self.compose(self.identities[mor.target], m) != Some(m) || self.compose(m, self.identities[mor.source]) != Some(m) {
                return Err(format!("identity law fails at morphism {m}"));
            }
        }
        for f in 0..self.morphisms.len() {
            for g in self.out_of(self.morphisms[f].target) {
                let gf = self.compose(g, f).unwrap();
                for h in self.out_of(self.morphisms[g].target) {
                    let left = self.compose(h, gf).unwrap();
                    let right = self.compose(self.compose(h, g).unwrap(), f).unwrap();
                    if left != right {
                        return Err(format!("associativity fails at ({h}, {g}, {f})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every object is reachable from every other through
    /// morphisms in either direction.
    pub fn is_connected(&self) -> bool {
        let n = self.objects.len();
        if n == 0 {
            return true;
        }
        let mut uf = petgraph::unionfind::UnionFind::new(n);
        for m in &self.morphisms {
            uf.union(m.source, m.target);
        }
        (1..n).all(|i| uf.equiv(0, i))
    }
}

#[cfg(test)]
mod tests;
