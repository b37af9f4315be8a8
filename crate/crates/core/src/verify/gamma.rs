//! The comparison `Γ: Ind(C_{E,Ξ}) → C_{F,Λ}` for a normalizer triple, the
//! transfer splitting of `π_1*`, and the scenario built from both.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::fusion::{
    self, fusion_subsystem_eq, is_saturated, normalizer_subsystem, realize_in, FusionSystem, SubId, Triple,
};
use crate::group::{self, FiniteGroup, SubgroupHandle, TableGroup};
use crate::homalg::cohomology::{restriction_map, transfer_map, CohomologyCaps, GroupCohomology};
use crate::homalg::limits::{higher_limits, Engine, LimitCaps};
use crate::homalg::linalg::{add_mod, inv_mod, Coordinates, FpMatrix};
use crate::orbit::{
    induce_functor, restrict_functor, FunctorModule, NaturalTransformation, OrbitCategory, SubgroupFamily,
};
use crate::repgraph::build_cx_complex_over;
use crate::verdict::ScenarioVerdict;

use super::{centric_radicals_in, subsystem_limits, Result, VerifyError};

/// `Γ` together with its source, target and the triple `Ξ` of normalizers.
pub struct GammaMap {
    pub category: Arc<OrbitCategory>,
    pub q: SubId,
    pub xi: Triple,
    /// `Ind(C_{E,Ξ})` over `O^C(F)`.
    pub source: FunctorModule,
    /// `C_{F,Λ}` over `O^C(F)`.
    pub target: FunctorModule,
    pub gamma: NaturalTransformation,
    /// Per object `P`: `Hom_E(P, N_S(Q)) = Hom_F(P, N_S(Q))`.
    pub hom_condition: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaObject {
    pub subgroup: String,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub iso: bool,
    pub hom_condition: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    pub objects: Vec<GammaObject>,
    pub natural: bool,
    pub is_isomorphism: bool,
}

impl GammaMap {
    pub fn report(&self) -> Result<GammaReport> {
        let u = self.category.universe();
        let objects: Vec<GammaObject> = (0..self.category.object_count())
            .map(|x| {
                let c = self.gamma.component(x);
                let rank = c.rank();
                GammaObject {
                    subgroup: u.describe(self.category.objects()[x]),
                    source_dim: self.source.dim(x),
                    target_dim: self.target.dim(x),
                    rank,
                    iso: self.source.dim(x) == self.target.dim(x) && rank == self.target.dim(x),
                    hom_condition: self.hom_condition[x],
                }
            })
            .collect();
        let natural = self.gamma.is_natural(&self.source, &self.target)?;
        let is_isomorphism = natural && objects.iter().all(|o| o.iso);
        Ok(GammaReport { objects, natural, is_isomorphism })
    }
}

/// `Hom_E(P, N_S(Q)) = Hom_F(P, N_S(Q))`.
fn homs_agree(f: &FusionSystem, e: &FusionSystem, p: SubId) -> bool {
    let u = f.universe();
    let from_f: HashSet<&Arc<[u32]>> =
        f.homs_to_base(p).iter().filter(|m| u.leq(m.image, e.base())).map(|m| &m.images).collect();
    let from_e: HashSet<&Arc<[u32]>> =
        if e.contains_subgroup(p) { e.homs_to_base(p).iter().map(|m| &m.images).collect() } else { HashSet::new() };
    from_f == from_e
}

/// Build `Ξ = (N_{F_1}(Q), N_{F_2}(Q), N_{F_e}(Q))`, its kernel functor and
/// the map `x ⊗ φ ↦ xφ` into `C_{F,Λ}`.
pub fn gamma_map(t: &Triple, q: SubId, family: &SubgroupFamily) -> Result<GammaMap> {
    let f = &t.f;
    let u = f.universe().clone();
    if !family.contains(q) || !u.leq(q, t.small_base()) || !f.is_fully_normalized(q) {
        return Err(VerifyError::Invariant("Q must be a fully normalized member of the family inside S'".into()));
    }
    let e1 = Arc::new(normalizer_subsystem(&t.f1, q)?);
    let e2 = Arc::new(normalizer_subsystem(&t.f2, q)?);
    let ee = Arc::new(normalizer_subsystem(&t.fe, q)?);
    let xi = Triple::new(e1, e2, ee)?;
    let cat_e = OrbitCategory::build(xi.f.clone(), &family.restricted_to(&xi.f))?;
    let cy = build_cx_complex_over(&xi, &cat_e)?;
    let (k_xi, iota_y) = cy.kernel()?;
    let category = OrbitCategory::build(f.clone(), family)?;
    let cx = build_cx_complex_over(t, &category)?;
    let (k_f, iota_x) = cx.kernel()?;
    let ind = induce_functor(&k_xi, &category)?;
    let p = category.p();
    let mut components = Vec::with_capacity(category.object_count());
    let mut hom_condition = Vec::with_capacity(category.object_count());
    for (x, &obj) in category.objects().iter().enumerate() {
        let rs = fusion::rep_set(f, obj, &t.fe);
        let block_of: HashMap<usize, usize> =
            cx.cx1.blocks[x].iter().enumerate().filter_map(|(b, blk)| rs.class_of(&blk.rep).map(|c| (c, b))).collect();
        let incl = iota_x.component(x);
        let columns: Vec<Vec<u8>> = (0..incl.cols()).map(|j| incl.column(j)).collect();
        let coords = Coordinates::new(p, incl.rows(), &columns);
        let mut mat = FpMatrix::zeros(p, k_f.dim(x), ind.module.dim(x));
        for blk in &ind.blocks[x] {
            let r = blk.sub_object;
            let inner = iota_y.component(r);
            for k in 0..k_xi.dim(r) {
                let mut v = vec![0u8; cx.cx1.module.dim(x)];
                for (row, psi) in cy.cx1.blocks[r].iter().enumerate() {
                    let c = inner.get(row, k);
                    if c == 0 {
                        continue;
                    }
                    let composite = u.compose(&psi.rep, &blk.rep);
                    let class = rs.class_of(&composite).ok_or_else(|| VerifyError::Invariant("composite outside F_e".into()))?;
                    let b = *block_of.get(&class).ok_or_else(|| VerifyError::Invariant("class missing from CX_1".into()))?;
                    v[b] = add_mod(v[b], c, p);
                }
                let image = coords.of(&v).ok_or_else(|| VerifyError::Invariant("image of Γ leaves the kernel".into()))?;
                for (i, c) in image.into_iter().enumerate() {
                    mat.set(i, blk.offset + k, c);
                }
            }
        }
        components.push(mat);
        hom_condition.push(homs_agree(f, &xi.f, obj));
    }
    Ok(GammaMap {
        category,
        q,
        xi,
        source: ind.module,
        target: k_f,
        gamma: NaturalTransformation { p, components },
        hom_condition,
    })
}

/// `tr ∘ Res` on `H^j(G)` for a subgroup `H ≤ G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub group_order: usize,
    pub subgroup_order: usize,
    pub index: usize,
    pub degree: usize,
    pub cohomology_dim: usize,
    /// `tr ∘ Res = [G : H] · id`.
    pub composite_is_index: bool,
    /// The identity holds and the index is prime to p, so `Res` splits.
    pub splits: bool,
}

/// Compute restriction and transfer for `h` inside its ambient group and
/// compare their composite with multiplication by the index.
pub fn transfer_identity(h: &SubgroupHandle, p: u32, degree: usize, caps: &CohomologyCaps) -> Result<TransferReport> {
    let g = h.ambient();
    let whole = g.whole();
    let tg = TableGroup::from_subgroup(&whole);
    let positions: Vec<usize> =
        h.members().iter().map(|&x| whole.position(x as usize).expect("subgroup element")).collect();
    let coh_g = GroupCohomology::compute(&tg, p, degree, caps)?;
    let coh_h = GroupCohomology::compute(&TableGroup::from_subgroup(h), p, degree, caps)?;
    let res = restriction_map(&positions, &coh_g, &coh_h)?;
    let tr = transfer_map(&tg, &positions, &coh_g, &coh_h)?;
    let composite = tr.mul(&res)?;
    let index = g.order() / h.order();
    let n = (index % p as usize) as u8;
    let expected = FpMatrix::identity(p, coh_g.dim()).scale(n);
    let composite_is_index = composite == expected;
    let splits = composite_is_index && n != 0 && {
        tr.scale(inv_mod(n, p)).mul(&res)?.is_identity()
    };
    Ok(TransferReport {
        group_order: g.order(),
        subgroup_order: h.order(),
        index,
        degree,
        cohomology_dim: coh_g.dim(),
        composite_is_index,
        splits,
    })
}

/// A finite group realizing `F_e`, with the copy of `S'` inside it.
pub struct Realization {
    pub group: Arc<FiniteGroup>,
    pub small_base: SubgroupHandle,
}

/// Split `π_1*` for `M = H^j` through `tr ∘ Res` on `N_{G_e}(Q) ≤ G_e`.
pub fn splitting_check(t: &Triple, q: SubId, degree: usize, realization: &Realization, caps: &CohomologyCaps) -> Result<ScenarioVerdict> {
    let u = t.f.universe();
    let s_prime = t.small_base();
    let g = &realization.group;
    let p = u.p();
    let mut v = ScenarioVerdict::new();
    v.require("Q normal in S'", u.leq(q, s_prime) && u.is_normal(q, s_prime), Some(u.describe(q)));
    let to_g = |x: u32| {
        let perm = u.group().element(x as usize);
        g.index_of(&perm.widen(g.degree()))
    };
    let sp_members: Option<Vec<usize>> = u.subgroup(s_prime).members().iter().map(|&x| to_g(x)).collect();
    let mut given: Vec<usize> = realization.small_base.members().iter().map(|&x| x as usize).collect();
    given.sort_unstable();
    let matches = sp_members.map(|mut m| {
        m.sort_unstable();
        m == given
    });
    v.require("S' inside G_e", matches == Some(true), None);
    let sylow = realization.small_base.order() == group::largest_power_dividing(g.order(), p);
    v.require("S' Sylow in G_e", sylow, Some(format!("|G_e| = {}", g.order())));
    if !v.hypotheses_hold() {
        return Ok(v);
    }
    let realized = realize_in(g, &realization.small_base, u)?;
    v.require("F_e realized by G_e", fusion_subsystem_eq(&realized, &t.fe), None);
    v.conclude::<VerifyError>(|d| {
        let q_members: Vec<usize> = u.subgroup(q).members().iter().map(|&x| to_g(x).expect("inside S'")).collect();
        let q_handle = group::subgroup_from_members(g, &q_members)?;
        let n = group::normalizer(&g.whole(), &q_handle);
        let report = transfer_identity(&n, p, degree, caps)?;
        d.push(format!(
            "[G_e : N(Q)] = {}, tr∘Res = index: {}, dim H^{} = {}",
            report.index, report.composite_is_index, degree, report.cohomology_dim
        ));
        Ok(report.splits)
    })?;
    Ok(v)
}

/// Inputs of the normalizer-triple criterion.  `functor` is `H^degree`
/// over `O(F^c)`.
pub struct TheoremCInputs<'a> {
    pub triple: &'a Triple,
    pub q: SubId,
    pub family: &'a SubgroupFamily,
    pub functor: &'a FunctorModule,
    pub degree: usize,
    pub realization: Option<&'a Realization>,
    pub n_max: usize,
    pub caps: &'a LimitCaps,
    pub cohomology_caps: &'a CohomologyCaps,
}

/// Build `Γ` when `Q` qualifies, then evaluate every hypothesis.
pub fn theorem_c_scenario(inputs: &TheoremCInputs<'_>) -> Result<ScenarioVerdict> {
    let t = inputs.triple;
    let u = t.f.universe();
    let q = inputs.q;
    let qualifies = inputs.family.contains(q) && u.leq(q, t.small_base()) && t.f.is_fully_normalized(q);
    let gamma = if qualifies { Some(gamma_map(t, q, inputs.family)?) } else { None };
    evaluate_theorem_c(inputs, gamma.as_ref())
}

/// Record the hypotheses using a precomputed `Γ`, then check
/// `lim^n M = 0` for `2 ≤ n ≤ n_max` over `O(F^c)`.
pub fn evaluate_theorem_c(inputs: &TheoremCInputs<'_>, gamma: Option<&GammaMap>) -> Result<ScenarioVerdict> {
    let t = inputs.triple;
    let f = &t.f;
    let u = f.universe();
    let q = inputs.q;
    let family = inputs.family;
    let mut v = ScenarioVerdict::new();
    for (name, e) in t.members().iter().copied().chain([("F", &t.f)]) {
        v.require(&format!("{name} saturated"), is_saturated(e).saturated, None);
    }
    for (name, e) in t.members().iter().copied().chain([("F", &t.f)]) {
        let (ok, w) = centric_radicals_in(e, family)?;
        v.require(&format!("{name}^cr in the family"), ok, w);
    }
    v.require("Q in the family", family.contains(q), Some(u.describe(q)));
    v.require("Q inside S'", u.leq(q, t.small_base()), None);
    v.require("Q fully F-normalized", f.is_fully_normalized(q), None);
    match gamma {
        Some(g) if g.q == q => {
            for (name, e) in g.xi.members().iter().copied().chain([("E", &g.xi.f)]) {
                v.require(&format!("normalizer system {name} saturated"), is_saturated(e).saturated, None);
            }
            let nfq = normalizer_subsystem(f, q)?;
            v.require("N_F(Q) = E", fusion_subsystem_eq(&nfq, &g.xi.f), None);
            let report = g.report()?;
            let bad: Vec<String> = report
                .objects
                .iter()
                .filter(|o| !o.iso)
                .map(|o| format!("{}: {} → {} of rank {}", o.subgroup, o.source_dim, o.target_dim, o.rank))
                .collect();
            let witness = if report.natural { bad.join("; ") } else { format!("not natural; {}", bad.join("; ")) };
            v.require("Γ is an isomorphism", report.is_isomorphism, Some(witness));
        }
        _ => {
            v.require("Γ is an isomorphism", false, Some("Γ is undefined for this Q".into()));
        }
    }
    if v.hypotheses_hold() {
        let cat_fc = inputs.functor.category();
        let cat_c =
            if family.members() == cat_fc.family().members() { cat_fc.clone() } else { OrbitCategory::build(f.clone(), family)? };
        let m_c = if Arc::ptr_eq(&cat_c, cat_fc) { inputs.functor.clone() } else { restrict_functor(inputs.functor, &cat_c)? };
        for (name, h) in t.members() {
            let dims = subsystem_limits(&cat_c, h, &m_c, inputs.n_max, inputs.caps)?;
            v.require(
                &format!("lim^n over O^C({name}) vanishes for 1 ≤ n ≤ {}", inputs.n_max),
                dims.iter().skip(1).all(|&d| d == 0),
                Some(format!("{dims:?}")),
            );
        }
        match inputs.realization {
            Some(r) => {
                let s = splitting_check(t, q, inputs.degree, r, inputs.cohomology_caps)?;
                let w = s.first_failure().map(|h| h.name.clone()).unwrap_or_else(|| s.details.join("; "));
                v.require("π_1* splits", s.passed(), Some(w));
            }
            None => {
                v.require("π_1* splits", false, Some("no realization of F_e given".into()));
            }
        }
    }
    let m = inputs.functor;
    let n_max = inputs.n_max;
    let caps = inputs.caps;
    v.conclude::<VerifyError>(|d| {
        let dims = higher_limits(m, n_max, Engine::Auto, caps)?.dims;
        d.push(format!("lim = {dims:?}"));
        Ok(dims.iter().skip(2).all(|&x| x == 0))
    })?;
    Ok(v)
}
