//! Finite permutation groups with fully enumerated element lists.
//!
//! A [`FiniteGroup`] keeps its elements sorted lexicographically by image
//! sequence, so element indices are canonical and the identity is index 0.
//! Subgroups are index sets over the ambient element list.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use bitvec::vec::BitVec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homalg::linalg::is_prime;

pub const DEFAULT_SIZE_CAP: usize = 10_000;
const TABLE_LIMIT: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order exceeds the size cap of {cap}")]
    Capacity { cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("map is not an isomorphism onto its codomain")]
    NotIsomorphism,
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("unknown group preset `{0}`")]
    UnknownPreset(String),
    #[error("could not parse group description: {0}")]
    Parse(String),
}

/// A permutation of `0..n`, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || seen[i as usize] {
                return Err(GroupError::InvalidPermutation(format!("{images:?}")));
            }
            seen[i as usize] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    /// Build from disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self, GroupError> {
        let mut img: Vec<u32> = (0..n as u32).collect();
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                let b = c[(k + 1) % c.len()];
                if a as usize >= n || b as usize >= n {
                    return Err(GroupError::InvalidPermutation(format!("cycle {c:?} on {n} points")));
                }
                img[a as usize] = b;
            }
        }
        Permutation::new(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Extend to a larger degree by fixing the new points.
    pub fn widen(&self, n: usize) -> Permutation {
        let mut v = self.0.clone();
        v.extend(self.0.len() as u32..n as u32);
        Permutation(v)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for s in 0..n {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = s;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Parse cycle notation such as `(0 1)(2 3)` or `(0,2,1,3)`.
pub fn parse_cycles(n: usize, s: &str) -> Result<Permutation, GroupError> {
    let s = s.trim();
    if s == "()" || s.is_empty() {
        return Ok(Permutation::identity(n));
    }
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    for part in s.split('(').skip(1) {
        let body = part.split(')').next().unwrap_or("");
        let pts: Result<Vec<u32>, _> =
            body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::parse).collect();
        cycles.push(pts.map_err(|e| GroupError::Parse(format!("{s}: {e}")))?);
    }
    let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
    Permutation::from_cycles(n, &refs)
}

/// A finite permutation group with enumerated elements.
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Permutation>,
    generators: Vec<usize>,
    index: HashMap<Permutation, u32>,
    table: Option<Vec<u32>>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("degree", &self.degree).field("order", &self.order()).finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}
impl Eq for FiniteGroup {}

/// JSON form of a group: degree plus generating permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

impl FiniteGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    /// Generator indices in the order they were supplied, minus repeats.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    pub const fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.index[&self.elements[a].compose(&self.elements[b])] as usize,
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `g x g⁻¹`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> u32 {
        self.orders[a]
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec {
            degree: self.degree,
            generators: self.generators.iter().map(|&g| self.elements[g].images().to_vec()).collect(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(self: &Arc<Self>) -> SubgroupHandle {
        SubgroupHandle::from_members(self, (0..self.order() as u32).collect(), self.generators.iter().map(|&g| g as u32).collect())
    }

    pub fn trivial(self: &Arc<Self>) -> SubgroupHandle {
        SubgroupHandle::from_members(self, vec![0], Vec::new())
    }

    fn build(degree: usize, mut elements: Vec<Permutation>, gens: &[Permutation]) -> FiniteGroup {
        elements.sort();
        let index: HashMap<Permutation, u32> = elements.iter().enumerate().map(|(i, g)| (g.clone(), i as u32)).collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = index[&elements[a].compose(&elements[b])];
                }
            }
            t
        });
        let inverses = elements.iter().map(|g| index[&g.inverse()]).collect();
        let mut generators = Vec::new();
        for g in gens {
            let i = index[g] as usize;
            if i != 0 && !generators.contains(&i) {
                generators.push(i);
            }
        }
        let mut group = FiniteGroup { degree, elements, generators, index, table, inverses, orders: Vec::new() };
        group.orders = (0..n)
            .map(|a| {
                let mut k = 1;
                let mut x = a;
                while x != 0 {
                    x = group.mul(x, a);
                    k += 1;
                }
                k
            })
            .collect();
        group
    }
}

/// Close a set of permutations under composition.
pub fn group_from_generators(degree: usize, generators: &[Permutation]) -> Result<Arc<FiniteGroup>, GroupError> {
    group_from_generators_capped(degree, generators, DEFAULT_SIZE_CAP)
}

pub fn group_from_generators_capped(
    degree: usize,
    generators: &[Permutation],
    cap: usize,
) -> Result<Arc<FiniteGroup>, GroupError> {
    for g in generators {
        if g.degree() != degree {
            return Err(GroupError::InvalidPermutation(format!("{g} does not have degree {degree}")));
        }
    }
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(GroupError::Capacity { cap });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(Arc::new(FiniteGroup::build(degree, seen.into_iter().collect(), generators)))
}

pub fn group_from_spec(spec: &GroupSpec) -> Result<Arc<FiniteGroup>, GroupError> {
    let gens: Result<Vec<_>, _> = spec.generators.iter().map(|g| Permutation::new(g.clone())).collect();
    group_from_generators(spec.degree, &gens?)
}

struct SubgroupInner {
    ambient: Arc<FiniteGroup>,
    members: Vec<u32>,
    mask: BitVec,
    generators: Vec<u32>,
}

/// A subgroup of an ambient [`FiniteGroup`], cheap to clone.
#[derive(Clone)]
pub struct SubgroupHandle(Arc<SubgroupInner>);

impl SubgroupHandle {
    fn from_members(ambient: &Arc<FiniteGroup>, members: Vec<u32>, generators: Vec<u32>) -> Self {
        let mut mask = BitVec::repeat(false, ambient.order());
        for &m in &members {
            mask.set(m as usize, true);
        }
        SubgroupHandle(Arc::new(SubgroupInner { ambient: ambient.clone(), members, mask, generators }))
    }

    pub fn ambient(&self) -> &Arc<FiniteGroup> {
        &self.0.ambient
    }

    pub fn order(&self) -> usize {
        self.0.members.len()
    }

    /// Sorted ambient indices of the members.
    pub fn members(&self) -> &[u32] {
        &self.0.members
    }

    pub fn generators(&self) -> &[u32] {
        &self.0.generators
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.0.mask[g]
    }

    /// Position of an ambient element in the member list.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.0.members.binary_search(&(g as u32)).ok()
    }

    pub fn is_subgroup_of(&self, other: &SubgroupHandle) -> bool {
        self.order() <= other.order() && self.0.members.iter().all(|&m| other.contains(m as usize))
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_abelian(&self) -> bool {
        let g = self.ambient();
        let gens = self.generators();
        gens.iter().all(|&a| gens.iter().all(|&b| g.mul(a as usize, b as usize) == g.mul(b as usize, a as usize)))
    }

    pub fn is_p_group(&self, p: u32) -> bool {
        is_power_of(self.order(), p)
    }

    /// Regenerate `{g x g⁻¹ : x ∈ self}`.
    pub fn conjugate(&self, g: usize) -> SubgroupHandle {
        let amb = self.ambient();
        let mut members: Vec<u32> = self.members().iter().map(|&x| amb.conj(g, x as usize) as u32).collect();
        members.sort_unstable();
        let gens = self.generators().iter().map(|&x| amb.conj(g, x as usize) as u32).collect();
        SubgroupHandle::from_members(amb, members, gens)
    }

    pub fn is_normal_in(&self, other: &SubgroupHandle) -> bool {
        let amb = self.ambient();
        other.generators().iter().all(|&g| self.generators().iter().all(|&x| self.contains(amb.conj(g as usize, x as usize))))
    }

    /// Members as permutations.
    pub fn permutations(&self) -> Vec<Permutation> {
        self.members().iter().map(|&m| self.ambient().element(m as usize).clone()).collect()
    }
}

impl PartialEq for SubgroupHandle {
    fn eq(&self, other: &Self) -> bool {
        self.0.members == other.0.members
    }
}
impl Eq for SubgroupHandle {}

impl std::hash::Hash for SubgroupHandle {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.members.hash(state)
    }
}

impl PartialOrd for SubgroupHandle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Subgroups sort by order, then by member list.
impl Ord for SubgroupHandle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.order(), &self.0.members).cmp(&(other.order(), &other.0.members))
    }
}

impl fmt::Debug for SubgroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|&g| self.ambient().element(g as usize).to_string()).collect();
        write!(f, "<{}> (order {})", gens.join(", "), self.order())
    }
}

pub fn is_power_of(n: usize, p: u32) -> bool {
    let mut n = n;
    while n > 1 && n.is_multiple_of(p as usize) {
        n /= p as usize;
    }
    n == 1
}

/// The subgroup generated by `gens` together with the members of `base`.
pub fn closure_with(base: &SubgroupHandle, extra: &[usize]) -> SubgroupHandle {
    let amb = base.ambient();
    let mut gens: Vec<u32> = base.generators().to_vec();
    for &e in extra {
        if !base.contains(e) && !gens.contains(&(e as u32)) {
            gens.push(e as u32);
        }
    }
    if gens.len() == base.generators().len() {
        return base.clone();
    }
    let mut mask: BitVec = base.0.mask.clone();
    let mut members: Vec<u32> = base.members().to_vec();
    let mut k = 0;
    while k < members.len() {
        let x = members[k] as usize;
        for &g in &gens {
            let y = amb.mul(x, g as usize);
            if !mask[y] {
                mask.set(y, true);
                members.push(y as u32);
            }
        }
        k += 1;
    }
    members.sort_unstable();
    SubgroupHandle(Arc::new(SubgroupInner { ambient: amb.clone(), members, mask, generators: gens }))
}

/// The subgroup generated by the given ambient elements.
pub fn subgroup_generated(ambient: &Arc<FiniteGroup>, gens: &[usize]) -> SubgroupHandle {
    closure_with(&ambient.trivial(), gens)
}

/// Subgroup with an explicit member list; the caller guarantees closure.
pub fn subgroup_from_members(ambient: &Arc<FiniteGroup>, members: &[usize]) -> Result<SubgroupHandle, GroupError> {
    let h = subgroup_generated(ambient, members);
    if h.order() != members.iter().collect::<HashSet<_>>().len() {
        return Err(GroupError::Containment("member list is not closed under multiplication".into()));
    }
    Ok(h)
}

/// Every subgroup exactly once, sorted by order and then member list.
pub fn enumerate_subgroups(ambient: &Arc<FiniteGroup>) -> Vec<SubgroupHandle> {
    let mut found: HashMap<Vec<u32>, SubgroupHandle> = HashMap::new();
    let triv = ambient.trivial();
    found.insert(triv.members().to_vec(), triv.clone());
    let mut queue = VecDeque::from([triv]);
    while let Some(h) = queue.pop_front() {
        for g in 0..ambient.order() {
            if h.contains(g) {
                continue;
            }
            let k = closure_with(&h, &[g]);
            if !found.contains_key(k.members()) {
                found.insert(k.members().to_vec(), k.clone());
                queue.push_back(k);
            }
        }
    }
    let mut all: Vec<SubgroupHandle> = found.into_values().collect();
    all.sort();
    all
}

pub fn normalizer(ambient: &SubgroupHandle, h: &SubgroupHandle) -> SubgroupHandle {
    let amb = ambient.ambient();
    let members: Vec<usize> = ambient
        .members()
        .iter()
        .map(|&g| g as usize)
        .filter(|&g| h.generators().iter().all(|&x| h.contains(amb.conj(g, x as usize))))
        .collect();
    subgroup_generated(amb, &members)
}

pub fn centralizer(ambient: &SubgroupHandle, h: &SubgroupHandle) -> SubgroupHandle {
    let amb = ambient.ambient();
    let members: Vec<usize> = ambient
        .members()
        .iter()
        .map(|&g| g as usize)
        .filter(|&g| h.generators().iter().all(|&x| amb.mul(g, x as usize) == amb.mul(x as usize, g)))
        .collect();
    subgroup_generated(amb, &members)
}

pub fn largest_power_dividing(n: usize, p: u32) -> usize {
    let mut q = 1;
    let mut n = n;
    while n.is_multiple_of(p as usize) {
        n /= p as usize;
        q *= p as usize;
    }
    q
}

/// A Sylow p-subgroup, built greedily by scanning elements in index order.
pub fn sylow(g: &SubgroupHandle, p: u32) -> Result<SubgroupHandle, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    let target = largest_power_dividing(g.order(), p);
    let amb = g.ambient();
    let mut current = amb.trivial();
    while current.order() < target {
        let mut grew = false;
        for &x in g.members() {
            let x = x as usize;
            if current.contains(x) || !is_power_of(amb.element_order(x) as usize, p) {
                continue;
            }
            let k = closure_with(&current, &[x]);
            if is_power_of(k.order(), p) {
                current = k;
                grew = true;
                if current.order() == target {
                    break;
                }
            }
        }
        debug_assert!(grew, "a p-subgroup below Sylow order always has a p-element in its normalizer");
        if !grew {
            break;
        }
    }
    Ok(current)
}

/// A homomorphism between subgroups of one ambient group, as an element map.
///
/// `images[i]` is the image of `domain.members()[i]`.
#[derive(Clone)]
pub struct GroupHom {
    pub domain: SubgroupHandle,
    pub codomain: SubgroupHandle,
    pub images: Vec<u32>,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.codomain == other.codomain && self.images == other.images
    }
}
impl Eq for GroupHom {}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let amb = self.domain.ambient();
        let pairs: Vec<String> = self
            .domain
            .generators()
            .iter()
            .map(|&x| {
                let y = self.apply(x as usize);
                format!("{} -> {}", amb.element(x as usize), amb.element(y))
            })
            .collect();
        write!(f, "hom[{}]", pairs.join(", "))
    }
}

impl GroupHom {
    pub fn apply(&self, x: usize) -> usize {
        let i = self.domain.position(x).expect("element outside the domain");
        self.images[i] as usize
    }

    pub fn identity(p: &SubgroupHandle) -> GroupHom {
        GroupHom { domain: p.clone(), codomain: p.clone(), images: p.members().to_vec() }
    }

    pub fn image(&self) -> SubgroupHandle {
        let amb = self.domain.ambient();
        let mut m: Vec<usize> = self.images.iter().map(|&x| x as usize).collect();
        m.sort_unstable();
        m.dedup();
        subgroup_generated(amb, &m)
    }

    pub fn is_injective(&self) -> bool {
        self.images.iter().collect::<HashSet<_>>().len() == self.images.len()
    }

    /// Check multiplicativity on all pairs.
    pub fn is_homomorphism(&self) -> bool {
        let amb = self.domain.ambient();
        let m = self.domain.members();
        (0..m.len()).all(|i| {
            (0..m.len()).all(|j| {
                let xy = amb.mul(m[i] as usize, m[j] as usize);
                self.apply(xy) == amb.mul(self.images[i] as usize, self.images[j] as usize)
            })
        })
    }

    /// Extend a generator assignment to a homomorphism, if one exists.
    pub fn from_generator_images(
        domain: &SubgroupHandle,
        codomain: &SubgroupHandle,
        pairs: &[(usize, usize)],
    ) -> Result<GroupHom, GroupError> {
        let amb = domain.ambient();
        let mut img: HashMap<usize, usize> = HashMap::from([(0, 0)]);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &(g, h) in pairs {
                let y = amb.mul(x, g);
                let v = amb.mul(img[&x], h);
                match img.get(&y) {
                    Some(&w) if w != v => return Err(GroupError::NotHomomorphism(format!("{} has two images", amb.element(y)))),
                    Some(_) => {}
                    None => {
                        img.insert(y, v);
                        frontier.push(y);
                    }
                }
            }
        }
        if img.len() != domain.order() || img.keys().any(|&x| !domain.contains(x)) {
            return Err(GroupError::NotHomomorphism("generator pairs do not generate the domain".into()));
        }
        let images: Vec<u32> = domain.members().iter().map(|&x| img[&(x as usize)] as u32).collect();
        if images.iter().any(|&y| !codomain.contains(y as usize)) {
            return Err(GroupError::Containment("image leaves the codomain".into()));
        }
        let h = GroupHom { domain: domain.clone(), codomain: codomain.clone(), images };
        if !h.is_homomorphism() {
            return Err(GroupError::NotHomomorphism("relations are not preserved".into()));
        }
        Ok(h)
    }
}

/// `x ↦ g x g⁻¹` from `p` into `target`.
pub fn conjugation_hom(g: usize, p: &SubgroupHandle, target: &SubgroupHandle) -> Result<GroupHom, GroupError> {
    let amb = p.ambient();
    let images: Vec<u32> = p.members().iter().map(|&x| amb.conj(g, x as usize) as u32).collect();
    if let Some(&bad) = images.iter().find(|&&y| !target.contains(y as usize)) {
        return Err(GroupError::Containment(format!(
            "conjugation by {} sends an element to {} outside the target",
            amb.element(g),
            amb.element(bad as usize)
        )));
    }
    Ok(GroupHom { domain: p.clone(), codomain: target.clone(), images })
}

/// `psi ∘ phi`.
pub fn compose_hom(psi: &GroupHom, phi: &GroupHom) -> Result<GroupHom, GroupError> {
    if phi.images.iter().any(|&y| !psi.domain.contains(y as usize)) {
        return Err(GroupError::Containment("image of the first map leaves the domain of the second".into()));
    }
    let images = phi.images.iter().map(|&y| psi.apply(y as usize) as u32).collect();
    Ok(GroupHom { domain: phi.domain.clone(), codomain: psi.codomain.clone(), images })
}

/// Restrict to `q ≤ domain`; with `to_image` the codomain becomes the image.
pub fn restrict_hom(phi: &GroupHom, q: &SubgroupHandle, to_image: bool) -> Result<GroupHom, GroupError> {
    if !q.is_subgroup_of(&phi.domain) {
        return Err(GroupError::Containment("restriction to a non-subgroup of the domain".into()));
    }
    let images: Vec<u32> = q.members().iter().map(|&x| phi.apply(x as usize) as u32).collect();
    let mut h = GroupHom { domain: q.clone(), codomain: phi.codomain.clone(), images };
    if to_image {
        h.codomain = h.image();
    }
    Ok(h)
}

pub fn invert_iso(phi: &GroupHom) -> Result<GroupHom, GroupError> {
    if !phi.is_injective() || phi.codomain.order() != phi.domain.order() {
        return Err(GroupError::NotIsomorphism);
    }
    let mut images = vec![0u32; phi.codomain.order()];
    for (i, &y) in phi.images.iter().enumerate() {
        let k = phi.codomain.position(y as usize).ok_or(GroupError::NotIsomorphism)?;
        images[k] = phi.domain.members()[i];
    }
    Ok(GroupHom { domain: phi.codomain.clone(), codomain: phi.domain.clone(), images })
}

/// An abstract finite group given by its multiplication table; identity is 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableGroup {
    n: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
}

impl TableGroup {
    pub fn from_subgroup(h: &SubgroupHandle) -> TableGroup {
        let amb = h.ambient();
        let m = h.members();
        let n = m.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = amb.mul(m[a] as usize, m[b] as usize);
                table[a * n + b] = h.position(c).expect("subgroup is closed") as u32;
            }
        }
        let inverses = m.iter().map(|&x| h.position(amb.inv(x as usize)).unwrap() as u32).collect();
        TableGroup { n, table, inverses }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }
}

/// Direct product acting on the disjoint union of the point sets.
pub fn direct_product(factors: &[Arc<FiniteGroup>]) -> Result<Arc<FiniteGroup>, GroupError> {
    let degree: usize = factors.iter().map(|f| f.degree()).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for f in factors {
        for &g in f.generators() {
            let mut img: Vec<u32> = (0..degree as u32).collect();
            for (i, &j) in f.element(g).images().iter().enumerate() {
                img[offset + i] = offset as u32 + j;
            }
            gens.push(Permutation::new(img)?);
        }
        offset += f.degree();
    }
    group_from_generators(degree, &gens)
}

pub mod presets {
    //! Standard groups in small permutation representations.

    use super::*;

    pub fn symmetric(n: usize) -> Result<Arc<FiniteGroup>, GroupError> {
        if n <= 1 {
            return group_from_generators(n.max(1), &[]);
        }
        let cycle: Vec<u32> = (0..n as u32).collect();
        let gens = [Permutation::from_cycles(n, &[&cycle])?, Permutation::from_cycles(n, &[&[0, 1]])?];
        group_from_generators(n, &gens)
    }

    pub fn alternating(n: usize) -> Result<Arc<FiniteGroup>, GroupError> {
        if n <= 2 {
            return group_from_generators(n.max(1), &[]);
        }
        let gens: Result<Vec<_>, _> = (2..n as u32).map(|k| Permutation::from_cycles(n, &[&[0, 1, k]])).collect();
        group_from_generators(n, &gens?)
    }

    /// Dihedral group of the given order `2m`, acting on `m` points.
    pub fn dihedral(order: usize) -> Result<Arc<FiniteGroup>, GroupError> {
        if order < 4 || order % 2 == 1 {
            return Err(GroupError::UnknownPreset(format!("dihedral:{order}")));
        }
        let m = order / 2;
        if m == 2 {
            return elementary_abelian(2, 2);
        }
        let rot: Vec<u32> = (0..m as u32).map(|i| (i + 1) % m as u32).collect();
        let refl: Vec<u32> = (0..m as u32).map(|i| (m as u32 - i) % m as u32).collect();
        group_from_generators(m, &[Permutation::new(rot)?, Permutation::new(refl)?])
    }

    /// Quaternion group of order 8 in its regular representation.
    pub fn quaternion8() -> Result<Arc<FiniteGroup>, GroupError> {
        // elements 1,i,j,k,-1,-i,-j,-k numbered 0..8; left multiplication by i and j
        let i = Permutation::new(vec![1, 4, 3, 6, 5, 0, 7, 2])?;
        let j = Permutation::new(vec![2, 7, 4, 1, 6, 3, 0, 5])?;
        group_from_generators(8, &[i, j])
    }

    pub fn cyclic(n: usize) -> Result<Arc<FiniteGroup>, GroupError> {
        if n == 0 {
            return Err(GroupError::UnknownPreset("cyclic:0".into()));
        }
        let rot: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        group_from_generators(n, &[Permutation::new(rot)?])
    }

    pub fn elementary_abelian(p: u32, k: usize) -> Result<Arc<FiniteGroup>, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let c = cyclic(p as usize)?;
        direct_product(&vec![c; k])
    }

    /// Abelian group `C_{n1} × C_{n2} × …`.
    pub fn abelian(orders: &[usize]) -> Result<Arc<FiniteGroup>, GroupError> {
        let fs: Result<Vec<_>, _> = orders.iter().map(|&n| cyclic(n)).collect();
        direct_product(&fs?)
    }

    /// Extraspecial group of order p³ and exponent p, for p ∈ {3, 5}.
    ///
    /// Realized as the affine maps `(x, y) ↦ (x + a y + c, y + b)` of F_p².
    pub fn extraspecial_exponent_p(p: u32) -> Result<Arc<FiniteGroup>, GroupError> {
        if p != 3 && p != 5 {
            return Err(GroupError::UnknownPreset(format!("extraspecial:{p}")));
        }
        let n = (p * p) as usize;
        let pt = |x: u32, y: u32| x % p + p * (y % p);
        let shear: Vec<u32> = (0..n as u32).map(|v| pt(v % p + v / p, v / p)).collect();
        let shift: Vec<u32> = (0..n as u32).map(|v| pt(v % p, v / p + 1)).collect();
        group_from_generators(n, &[Permutation::new(shear)?, Permutation::new(shift)?])
    }

    /// Parse a preset name such as `symmetric:4` or `abelian:4,2`.
    pub fn parse(name: &str) -> Result<Arc<FiniteGroup>, GroupError> {
        let name = name.strip_prefix("preset:").unwrap_or(name);
        let (kind, arg) = name.split_once(':').unwrap_or((name, ""));
        let nums: Result<Vec<usize>, _> =
            arg.split(',').filter(|s| !s.is_empty()).map(|s| s.trim().parse::<usize>()).collect();
        let nums = nums.map_err(|_| GroupError::UnknownPreset(name.to_string()))?;
        let one = |i: usize| nums.get(i).copied().ok_or_else(|| GroupError::UnknownPreset(name.to_string()));
        match kind {
            "symmetric" => symmetric(one(0)?),
            "alternating" => alternating(one(0)?),
            "dihedral" => dihedral(one(0)?),
            "quaternion8" | "quaternion" => quaternion8(),
            "cyclic" => cyclic(one(0)?),
            "elementary_abelian" => elementary_abelian(one(0)? as u32, one(1)?),
            "abelian" => abelian(&nums),
            "extraspecial" => extraspecial_exponent_p(one(0)? as u32),
            _ => Err(GroupError::UnknownPreset(name.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::presets::*;
    use super::*;

    fn perm(n: usize, s: &str) -> Permutation {
        parse_cycles(n, s).unwrap()
    }

    #[test]
    fn orders_of_presets() {
        assert_eq!(symmetric(4).unwrap().order(), 24);
        assert_eq!(alternating(4).unwrap().order(), 12);
        assert_eq!(dihedral(8).unwrap().order(), 8);
        assert_eq!(quaternion8().unwrap().order(), 8);
        assert_eq!(cyclic(6).unwrap().order(), 6);
        assert_eq!(elementary_abelian(2, 3).unwrap().order(), 8);
        assert_eq!(extraspecial_exponent_p(3).unwrap().order(), 27);
        assert_eq!(extraspecial_exponent_p(5).unwrap().order(), 125);
    }

    #[test]
    fn identity_is_index_zero_and_elements_sorted() {
        let g = symmetric(4).unwrap();
        assert!(g.element(0).is_identity());
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(enumerate_subgroups(&symmetric(4).unwrap()).len(), 30);
        assert_eq!(enumerate_subgroups(&dihedral(8).unwrap()).len(), 10);
        assert_eq!(enumerate_subgroups(&cyclic(2).unwrap()).len(), 2);
        assert_eq!(enumerate_subgroups(&quaternion8().unwrap()).len(), 6);
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = quaternion8().unwrap();
        assert_eq!((0..8).filter(|&i| q.element_order(i) == 2).count(), 1);
        assert!(!q.is_abelian());
    }

    #[test]
    fn extraspecial_has_exponent_p() {
        let e = extraspecial_exponent_p(3).unwrap();
        assert!((1..e.order()).all(|i| e.element_order(i) == 3));
        assert!(!e.is_abelian());
    }

    #[test]
    fn klein_four_and_sylow_in_s4() {
        let g = symmetric(4).unwrap();
        let a = g.index_of(&perm(4, "(0 1)(2 3)")).unwrap();
        let b = g.index_of(&perm(4, "(0 2)(1 3)")).unwrap();
        let v = subgroup_generated(&g, &[a, b]);
        assert_eq!(v.order(), 4);
        assert_eq!(normalizer(&g.whole(), &v).order(), 24);
        let s = sylow(&g.whole(), 2).unwrap();
        assert_eq!(s.order(), 8);
        let c4 = g.index_of(&perm(4, "(0 2 1 3)")).unwrap();
        assert!(s.contains(c4));
        assert!(s.contains(g.index_of(&perm(4, "(0 1)")).unwrap()));
        assert!(matches!(sylow(&g.whole(), 4), Err(GroupError::NotPrime(4))));
    }

    #[test]
    fn conjugation_by_transposition_lands_in_d8() {
        let g = symmetric(4).unwrap();
        let s = sylow(&g.whole(), 2).unwrap();
        let c4 = subgroup_generated(&g, &[g.index_of(&perm(4, "(0 2 1 3)")).unwrap()]);
        let t = g.index_of(&perm(4, "(0 1)")).unwrap();
        let h = conjugation_hom(t, &c4, &s).unwrap();
        assert!(h.is_homomorphism());
        let t2 = g.index_of(&perm(4, "(1 2)")).unwrap();
        assert!(matches!(conjugation_hom(t2, &c4, &s), Err(GroupError::Containment(_))));
    }

    #[test]
    fn compose_restrict_invert() {
        let g = symmetric(4).unwrap();
        let whole = g.whole();
        let x = g.index_of(&perm(4, "(0 1 2)")).unwrap();
        let y = g.index_of(&perm(4, "(1 3)")).unwrap();
        let cx = conjugation_hom(x, &whole, &whole).unwrap();
        let cy = conjugation_hom(y, &whole, &whole).unwrap();
        let cxy = conjugation_hom(g.mul(x, y), &whole, &whole).unwrap();
        assert_eq!(compose_hom(&cx, &cy).unwrap(), cxy);
        let inv = invert_iso(&cx).unwrap();
        assert_eq!(compose_hom(&inv, &cx).unwrap(), GroupHom::identity(&whole));
        let v = subgroup_generated(&g, &[g.index_of(&perm(4, "(0 1)(2 3)")).unwrap()]);
        let r = restrict_hom(&cx, &v, true).unwrap();
        assert_eq!(r.codomain.order(), 2);
    }

    #[test]
    fn capacity_error() {
        let n = 8;
        let gens = [Permutation::from_cycles(n, &[&[0, 1, 2, 3, 4, 5, 6, 7]]).unwrap(), Permutation::from_cycles(n, &[&[0, 1]]).unwrap()];
        assert_eq!(group_from_generators(n, &gens).unwrap_err(), GroupError::Capacity { cap: DEFAULT_SIZE_CAP });
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = perm(4, "(0 2 1 3)");
        assert_eq!(p.to_string(), "(0 2 1 3)");
        assert_eq!(parse_cycles(4, &p.to_string()).unwrap(), p);
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn presets_parse() {
        assert_eq!(presets::parse("preset:symmetric:4").unwrap().order(), 24);
        assert_eq!(presets::parse("abelian:4,2").unwrap().order(), 8);
        assert!(presets::parse("bogus:1").is_err());
    }
}
