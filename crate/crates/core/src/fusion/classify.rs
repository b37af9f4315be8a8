//! Centric, radical and essential subgroups, and automorphism groups.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::group::{self, FiniteGroup, Permutation, SubgroupHandle};

use super::{FusionError, FusionSystem, Morphism, SubId, Universe};

/// A group of automorphisms of `P`, as permutations of `P`'s member list.
pub struct AutomorphismGroup {
    pub subgroup: SubId,
    pub group: Arc<FiniteGroup>,
    /// `maps[i]` is the automorphism for group element `i`.
    pub maps: Vec<Morphism>,
}

fn positions(u: &Universe, m: &Morphism) -> Vec<u32> {
    let sub = u.subgroup(m.domain);
    m.images.iter().map(|&y| sub.position(y as usize).unwrap() as u32).collect()
}

/// Wrap a set of automorphisms of `p` (closed under composition) as a
/// permutation group.
pub fn automorphism_permutation_group(u: &Universe, p: SubId, maps: &[Morphism]) -> Result<AutomorphismGroup, FusionError> {
    let n = u.order(p);
    let perms: Vec<Permutation> = maps.iter().map(|m| Permutation::new(positions(u, m))).collect::<Result<_, _>>()?;
    let g = group::group_from_generators_capped(n, &perms, 100_000)?;
    if g.order() != maps.len() {
        return Err(FusionError::Inconsistent(format!(
            "{} automorphisms generate a group of order {}",
            maps.len(),
            g.order()
        )));
    }
    let members = u.subgroup(p).members();
    let ordered: Vec<Morphism> = g
        .elements()
        .iter()
        .map(|perm| u.morphism(p, perm.images().iter().map(|&i| members[i as usize]).collect()))
        .collect();
    Ok(AutomorphismGroup { subgroup: p, group: g, maps: ordered })
}

impl AutomorphismGroup {
    /// Index of the group element acting as `m`.
    pub fn index_of(&self, u: &Universe, m: &Morphism) -> Option<usize> {
        let perm = Permutation::new(positions(u, m)).ok()?;
        self.group.index_of(&perm)
    }

    pub fn subgroup_from_maps(&self, u: &Universe, maps: &[Morphism]) -> SubgroupHandle {
        let idx: Vec<usize> = maps.iter().filter_map(|m| self.index_of(u, m)).collect();
        group::subgroup_generated(&self.group, &idx)
    }
}

/// The quotient `A / N` as a permutation group on left cosets, together
/// with the coset index of every element of `A`.
pub fn outer_automorphism_group(a: &Arc<FiniteGroup>, n: &SubgroupHandle) -> Result<(Arc<FiniteGroup>, Vec<usize>), FusionError> {
    let mut coset = vec![usize::MAX; a.order()];
    let mut count = 0;
    for x in 0..a.order() {
        if coset[x] != usize::MAX {
            continue;
        }
        for &m in n.members() {
            coset[a.mul(x, m as usize)] = count;
        }
        count += 1;
    }
    let mut reps = vec![0usize; count];
    for x in (0..a.order()).rev() {
        reps[coset[x]] = x;
    }
    let perms: Vec<Permutation> = a
        .generators()
        .iter()
        .map(|&g| Permutation::new((0..count).map(|c| coset[a.mul(g, reps[c])] as u32).collect()))
        .collect::<Result<_, _>>()?;
    let out = group::group_from_generators_capped(count.max(1), &perms, 100_000)?;
    Ok((out, coset))
}

/// Every automorphism of `p`, found by assigning generator images.
pub fn automorphism_group(u: &Universe, p: SubId) -> Vec<Morphism> {
    let sub = u.subgroup(p);
    let g = u.group();
    // greedy generating set
    let mut gens: Vec<usize> = Vec::new();
    let mut cur = g.trivial();
    for &x in sub.members() {
        if !cur.contains(x as usize) {
            gens.push(x as usize);
            cur = group::closure_with(&cur, &[x as usize]);
        }
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| sub.members().iter().map(|&y| y as usize).filter(|&y| g.element_order(y) == g.element_order(x)).collect())
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let pairs: Vec<(usize, usize)> = gens.iter().zip(&choice).zip(&candidates).map(|((&x, &c), cands)| (x, cands[c])).collect();
        if let Some(m) = extend(u, p, &pairs) {
            out.push(m);
        }
        // next choice
        let mut k = 0;
        loop {
            if k == gens.len() {
                out.sort();
                return out;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn extend(u: &Universe, p: SubId, pairs: &[(usize, usize)]) -> Option<Morphism> {
    let g = u.group();
    let sub = u.subgroup(p);
    let mut img: HashMap<usize, usize> = HashMap::from([(0, 0)]);
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for &(a, b) in pairs {
            let y = g.mul(x, a);
            let v = g.mul(img[&x], b);
            match img.get(&y) {
                Some(&w) if w != v => return None,
                Some(_) => {}
                None => {
                    img.insert(y, v);
                    stack.push(y);
                }
            }
        }
    }
    let images: Vec<u32> = sub.members().iter().map(|&x| img[&(x as usize)] as u32).collect();
    if images.iter().collect::<HashSet<_>>().len() != images.len() {
        return None;
    }
    let m = u.morphism(p, images);
    (m.image == p && u.is_homomorphism(&m)).then_some(m)
}

/// Per-subgroup classification flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupReport {
    pub subgroup: SubId,
    pub order: usize,
    pub aut_order: usize,
    pub out_order: usize,
    pub fully_normalized: bool,
    pub centric: bool,
    pub radical: bool,
    /// Strongly p-embedded subgroup in the outer automorphism group.
    pub essential_raw: bool,
    /// `essential_raw` and centric.
    pub essential: bool,
    pub centric_radical: bool,
    pub conjugacy_class: Vec<SubId>,
}

/// Automorphism data of one subgroup inside a fusion system.
pub(crate) struct LocalData {
    pub aut: AutomorphismGroup,
    pub inner: SubgroupHandle,
    pub out: Arc<FiniteGroup>,
}

pub(crate) fn local_data(f: &FusionSystem, p: SubId) -> Result<LocalData, FusionError> {
    let u = f.universe();
    let aut = automorphism_permutation_group(u, p, &f.aut(p))?;
    let inner_maps: Vec<Morphism> = u.subgroup(p).members().iter().map(|&x| u.conjugation(x as usize, p)).collect();
    let inner = aut.subgroup_from_maps(u, &inner_maps);
    let (out, _) = outer_automorphism_group(&aut.group, &inner)?;
    Ok(LocalData { aut, inner, out })
}

/// Whether `O_p(A)` equals `inner`.
fn has_inner_p_core(a: &Arc<FiniteGroup>, inner: &SubgroupHandle, p: u32) -> Result<bool, FusionError> {
    let t = group::sylow(&a.whole(), p)?;
    let core: Vec<u32> = t
        .members()
        .iter()
        .copied()
        .filter(|&x| (0..a.order()).all(|g| t.contains(a.conj(a.inv(g), x as usize))))
        .collect();
    Ok(core == inner.members())
}

/// Whether some proper subgroup containing a Sylow p-subgroup `T` meets
/// every conjugate `T^x` with `x` outside it trivially.
pub fn has_strongly_embedded(out: &Arc<FiniteGroup>, p: u32) -> Result<bool, FusionError> {
    let n = out.order();
    if !n.is_multiple_of(p as usize) {
        return Ok(false);
    }
    let t = group::sylow(&out.whole(), p)?;
    let conjugates: Vec<SubgroupHandle> = (0..n).map(|x| t.conjugate(x)).collect();
    for h in group::enumerate_subgroups(out) {
        if h.order() == n || !t.is_subgroup_of(&h) {
            continue;
        }
        let ok = (0..n)
            .filter(|&x| !h.contains(x))
            .all(|x| conjugates[x].members().iter().all(|&y| y == 0 || !h.contains(y as usize)));
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn classify(f: &FusionSystem) -> Result<Vec<SubgroupReport>, FusionError> {
    let u = f.universe();
    let mut out = Vec::new();
    for p in f.subgroups() {
        let local = local_data(f, p)?;
        let centric = f.is_centric(p);
        let radical = has_inner_p_core(&local.aut.group, &local.inner, u.p())?;
        let essential_raw = has_strongly_embedded(&local.out, u.p())?;
        out.push(SubgroupReport {
            subgroup: p,
            order: u.order(p),
            aut_order: local.aut.group.order(),
            out_order: local.out.order(),
            fully_normalized: f.is_fully_normalized(p),
            centric,
            radical,
            essential_raw,
            essential: essential_raw && centric,
            centric_radical: centric && radical,
            conjugacy_class: f.conjugacy_class(p).to_vec(),
        });
    }
    Ok(out)
}

impl FusionSystem {
    pub fn centric_subgroups(&self) -> Vec<SubId> {
        self.subgroups().into_iter().filter(|&p| self.is_centric(p)).collect()
    }

    pub fn is_radical(&self, p: SubId) -> Result<bool, FusionError> {
        let local = local_data(self, p)?;
        has_inner_p_core(&local.aut.group, &local.inner, self.p())
    }

    pub fn centric_radical_subgroups(&self) -> Result<Vec<SubId>, FusionError> {
        let mut out = Vec::new();
        for p in self.centric_subgroups() {
            if self.is_radical(p)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// `Out_F(P)` as a permutation group.
    pub fn out_group(&self, p: SubId) -> Result<Arc<FiniteGroup>, FusionError> {
        Ok(local_data(self, p)?.out)
    }
}
