//! Constant, representable, restricted, induced and cohomology functors.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::fusion::{self, FusionSystem, Morphism, RepSet, SubId, Universe};
use crate::group::TableGroup;
use crate::homalg::cohomology::{induced_cohomology_map, CohomologyCaps, GroupCohomology};
use crate::homalg::linalg::FpMatrix;

use super::{FunctorModule, OrbitCategory, OrbitError};

/// Every object sent to `F_p`, every morphism to the identity.
pub fn constant_functor(cat: &Arc<OrbitCategory>, p: u32) -> FunctorModule {
    let dims = vec![1; cat.object_count()];
    let action = (0..cat.morphism_count()).map(|_| FpMatrix::identity(p, 1)).collect();
    FunctorModule::new(cat.clone(), p, dims, action).expect("constant functor shapes")
}

/// `P ↦ F_p[Hom(P, x)]`, acting by precomposition.
pub fn representable_functor(cat: &Arc<OrbitCategory>, p: u32, x: usize) -> FunctorModule {
    let n = cat.object_count();
    let dims: Vec<usize> = (0..n).map(|s| cat.hom(s, x).len()).collect();
    let position: Vec<HashMap<usize, usize>> =
        (0..n).map(|s| cat.hom(s, x).iter().enumerate().map(|(i, &g)| (g, i)).collect()).collect();
    let action = (0..cat.morphism_count())
        .map(|m| {
            let mor = cat.morphism(m);
            let mut mat = FpMatrix::zeros(p, dims[mor.source], dims[mor.target]);
            for (c, &g) in cat.hom(mor.target, x).iter().enumerate() {
                let gm = cat.compose(g, m).expect("composable");
                mat.set(position[mor.source][&gm], c, 1);
            }
            mat
        })
        .collect();
    FunctorModule::new(cat.clone(), p, dims, action).expect("representable functor shapes")
}

/// `M` composed with the inclusion of `sub` into the category of `m`.
///
/// `sub` must be built from a subsystem whose objects and maps all appear
/// in the larger category.
pub fn restrict_functor(m: &FunctorModule, sub: &Arc<OrbitCategory>) -> Result<FunctorModule, OrbitError> {
    let cat = m.category();
    if *sub.universe().as_ref() != *cat.universe().as_ref() {
        return Err(OrbitError::CategoryMismatch);
    }
    let objects: Vec<usize> = sub
        .objects()
        .iter()
        .map(|&s| cat.object_of(s).ok_or_else(|| OrbitError::NotFunctorial(format!("object #{s} missing"))))
        .collect::<Result<_, _>>()?;
    let dims: Vec<usize> = objects.iter().map(|&o| m.dim(o)).collect();
    let mut action = Vec::with_capacity(sub.morphism_count());
    for (k, mor) in sub.morphisms().iter().enumerate() {
        let image = cat
            .morphism_of(objects[mor.target], &mor.rep)
            .ok_or_else(|| OrbitError::NotFunctorial(format!("morphism {k} has no image")))?;
        if cat.morphism(image).source != objects[mor.source] {
            return Err(OrbitError::NotFunctorial(format!("morphism {k} changes source")));
        }
        action.push(m.action(image).clone());
    }
    FunctorModule::new(sub.clone(), m.p(), dims, action)
}

/// Induction from the orbit category of a subsystem `H` up to `cat`.
pub struct InducedFunctor {
    pub module: FunctorModule,
    /// Per object `P` of `cat`: classes of `Rep_F(P, H)` and their blocks.
    pub blocks: Vec<Vec<InducedBlock>>,
}

#[derive(Clone, Debug)]
pub struct InducedBlock {
    /// Class representative `φ: P → S'`.
    pub rep: Morphism,
    /// Object `φ(P)` of the subsystem's category.
    pub sub_object: usize,
    pub offset: usize,
}

/// `Ind(M)(P) = ⊕_{[φ] ∈ Rep_F(P, H)} M(φ(P))`; a morphism `α: P' → P`
/// sends block `φ` to block `ψ = [φα]` through `M(φαψ⁻¹)`.
pub fn induce_functor(m: &FunctorModule, cat: &Arc<OrbitCategory>) -> Result<InducedFunctor, OrbitError> {
    let sub = m.category();
    let f = cat.fusion();
    let h = sub.fusion();
    if *sub.universe().as_ref() != *cat.universe().as_ref() {
        return Err(OrbitError::CategoryMismatch);
    }
    let u = cat.universe().clone();
    let p = m.p();
    let n = cat.object_count();
    let mut rep_sets: Vec<RepSet> = Vec::with_capacity(n);
    let mut blocks: Vec<Vec<InducedBlock>> = Vec::with_capacity(n);
    let mut dims = Vec::with_capacity(n);
    for &obj in cat.objects() {
        let rs = fusion::rep_set(f, obj, h);
        let mut list = Vec::new();
        let mut offset = 0;
        for rep in rs.classes() {
            if let Some(so) = sub.object_of(rep.image) {
                list.push(InducedBlock { rep: rep.clone(), sub_object: so, offset });
                offset += m.dim(so);
            }
        }
        rep_sets.push(rs);
        blocks.push(list);
        dims.push(offset);
    }
    // class index → block index, per object
    let block_of: Vec<HashMap<usize, usize>> = (0..n)
        .map(|x| {
            blocks[x]
                .iter()
                .enumerate()
                .map(|(b, blk)| (rep_sets[x].class_of(&blk.rep).unwrap(), b))
                .collect()
        })
        .collect();
    let mut action = Vec::with_capacity(cat.morphism_count());
    for alpha in cat.morphisms() {
        let (src, dst) = (alpha.source, alpha.target);
        let mut mat = FpMatrix::zeros(p, dims[src], dims[dst]);
        for blk in &blocks[dst] {
            let phi_alpha = u.compose(&blk.rep, &alpha.rep);
            let class = rep_sets[src].class_of(&phi_alpha).ok_or_else(|| {
                OrbitError::NotFunctorial("composite outside the maps into the subsystem base".into())
            })?;
            let target_block = &blocks[src][block_of[src][&class]];
            let theta = rep_sets[src].transport(&u, class, &phi_alpha);
            let theta_id = sub.morphism_of(blk.sub_object, &theta).ok_or_else(|| {
                OrbitError::NotFunctorial("transport map missing from the subsystem category".into())
            })?;
            if sub.morphism(theta_id).source != target_block.sub_object {
                return Err(OrbitError::NotFunctorial("transport map has the wrong source".into()));
            }
            mat.set_block(target_block.offset, blk.offset, m.action(theta_id));
        }
        action.push(mat);
    }
    let module = FunctorModule::new(cat.clone(), p, dims, action)?;
    Ok(InducedFunctor { module, blocks })
}

/// Cohomology of universe subgroups, computed once per degree.
pub struct CohomologyCache {
    universe: Arc<Universe>,
    caps: CohomologyCaps,
    data: Mutex<HashMap<(SubId, usize), Arc<GroupCohomology>>>,
}

impl CohomologyCache {
    pub fn new(universe: Arc<Universe>, caps: CohomologyCaps) -> Self {
        CohomologyCache { universe, caps, data: Mutex::new(HashMap::new()) }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn caps(&self) -> &CohomologyCaps {
        &self.caps
    }

    pub fn get(&self, p: SubId, degree: usize) -> Result<Arc<GroupCohomology>, OrbitError> {
        if let Some(c) = self.data.lock().unwrap().get(&(p, degree)) {
            return Ok(c.clone());
        }
        let g = TableGroup::from_subgroup(self.universe.subgroup(p));
        let c = Arc::new(GroupCohomology::compute(&g, self.universe.p(), degree, &self.caps)?);
        self.data.lock().unwrap().insert((p, degree), c.clone());
        Ok(c)
    }

    /// `φ*: H^j(target) → H^j(domain)` for a map whose image lies in `target`.
    pub fn induced_map(&self, phi: &Morphism, target: SubId, degree: usize) -> Result<FpMatrix, OrbitError> {
        let u = &self.universe;
        let q = u.subgroup(target);
        let map: Vec<usize> = phi.images.iter().map(|&y| q.position(y as usize).expect("image inside target")).collect();
        let ct = self.get(target, degree)?;
        let cs = self.get(phi.domain, degree)?;
        Ok(induced_cohomology_map(&map, &ct, &cs)?)
    }
}

/// `P ↦ H^j(P; F_p)` with the induced maps.
pub fn cohomology_functor(cat: &Arc<OrbitCategory>, degree: usize, cache: &CohomologyCache) -> Result<FunctorModule, OrbitError> {
    if *cache.universe().as_ref() != *cat.universe().as_ref() {
        return Err(OrbitError::CategoryMismatch);
    }
    let dims: Vec<usize> =
        cat.objects().iter().map(|&s| cache.get(s, degree).map(|c| c.dim())).collect::<Result<_, _>>()?;
    let action = cat
        .morphisms()
        .iter()
        .map(|m| cache.induced_map(&m.rep, cat.objects()[m.target], degree))
        .collect::<Result<Vec<_>, _>>()?;
    FunctorModule::new(cat.clone(), cat.p(), dims, action)
}

/// Whether every inner automorphism of every object acts as the identity.
pub fn inner_maps_act_trivially(cache: &CohomologyCache, objects: &[SubId], degree: usize) -> Result<bool, OrbitError> {
    let u = cache.universe().clone();
    for &q in objects {
        for &x in u.subgroup(q).members() {
            let c = u.conjugation(x as usize, q);
            if !cache.induced_map(&c, q, degree)?.is_identity() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl FusionSystem {
    /// Shorthand for the orbit category on a family.
    pub fn orbit_category(self: &Arc<Self>, family: &super::SubgroupFamily) -> Result<Arc<OrbitCategory>, OrbitError> {
        OrbitCategory::build(self.clone(), family)
    }
}
