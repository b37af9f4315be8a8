//! Sharpness transported along pruning, and the two-essential criterion.

use std::sync::Arc;

use crate::fusion::{
    automorphism_permutation_group, fusion_subsystem_eq, fusion_subsystem_leq, is_saturated, join_with, normalizer_subsystem,
    FusionSystem, Morphism, SubId,
};
use crate::homalg::limits::{higher_limits, Engine, LimitCaps};
use crate::orbit::{CohomologyCache, FunctorModule};
use crate::verdict::ScenarioVerdict;

use super::sharpness::sharpness_suite;
use super::{Result, VerifyError};

/// Automorphisms of `P` in `h` that extend to a strictly larger subgroup.
fn extendable_automorphisms(h: &FusionSystem, p: SubId) -> Vec<Morphism> {
    let u = h.universe();
    let mut out = Vec::new();
    for alpha in h.aut(p) {
        // an extension to R restricts to one on N_R(P), which strictly
        // contains P, so overgroups normalizing P suffice
        let extends = h.subgroups().into_iter().filter(|&r| u.lt(p, r) && u.is_normal(p, r)).any(|r| {
            h.homs_to_base(r).iter().any(|psi| u.restrict(psi, p).images == alpha.images)
        });
        if extends {
            out.push(alpha);
        }
    }
    out
}

/// `P` extraspecial of order `p³` and exponent `p`, with `H_H(P) = Aut_H(P)`.
fn extraspecial_bullet(h: &FusionSystem, p: SubId) -> Result<bool> {
    let u = h.universe();
    let prime = u.p() as usize;
    let sub = u.subgroup(p);
    let g = u.group();
    let exponent_p = sub.members().iter().all(|&x| x == 0 || g.element_order(x as usize) as usize == prime);
    if sub.order() != prime * prime * prime || sub.is_abelian() || !exponent_p {
        return Ok(false);
    }
    let aut = h.aut(p);
    let group = automorphism_permutation_group(u, p, &aut)?;
    let generated = group.subgroup_from_maps(u, &extendable_automorphisms(h, p));
    Ok(generated.order() == aut.len())
}

/// `C_S(Q) ≰ Q` for every proper subgroup `Q` of `P`.
fn centralizer_bullet(f: &FusionSystem, p: SubId) -> bool {
    let u = f.universe();
    u.subgroups_of(p).into_iter().filter(|&q| q != p).all(|q| !u.leq(u.centralizer(f.base(), q), q))
}

/// Hypotheses of transporting cohomological sharpness from `H` to
/// `F = ⟨H, Aut_F(P) : P ∈ A⟩`, then the sharpness table of `F`.
pub fn theorem_b_scenario(
    f: &Arc<FusionSystem>,
    h: &Arc<FusionSystem>,
    a: &[SubId],
    j_max: usize,
    n_max: usize,
    cache: &CohomologyCache,
    caps: &LimitCaps,
) -> Result<ScenarioVerdict> {
    let u = f.universe();
    let mut v = ScenarioVerdict::new();
    let same = **u == **h.universe() && f.base() == h.base();
    v.require("same universe and base", same, None);
    if !same {
        return Ok(v);
    }
    v.require("H is a subsystem of F", fusion_subsystem_leq(h, f), None);
    v.require("F saturated", is_saturated(f).saturated, None);
    v.require("H saturated", is_saturated(h).saturated, None);
    let not_centric: Vec<String> = a.iter().filter(|&&p| !f.is_centric(p)).map(|&p| u.describe(p)).collect();
    v.require("A consists of F-centric subgroups", not_centric.is_empty(), Some(not_centric.join(", ")));
    let extra: Vec<Morphism> = a.iter().flat_map(|&p| f.aut(p)).collect();
    v.require("F generated by H and Aut_F(P) for P in A", fusion_subsystem_eq(&join_with(h, &extra)?, f), None);
    for &p in a {
        let first = extraspecial_bullet(h, p)?;
        let second = centralizer_bullet(f, p);
        v.require(
            &format!("{}: extraspecial bullet or centralizer bullet", u.describe(p)),
            first || second,
            Some("neither bullet holds".into()),
        );
    }
    if !v.hypotheses_hold() {
        return Ok(v);
    }
    let h_table = sharpness_suite(h, j_max, n_max, cache, caps)?;
    v.require(&format!("H cohomologically sharp for j ≤ {j_max}, n ≤ {n_max}"), h_table.sharp(), Some(format!("{:?}", h_table.rows)));
    v.conclude::<VerifyError>(|d| {
        let table = sharpness_suite(f, j_max, n_max, cache, caps)?;
        if !table.stable_elements_agree() {
            d.push("degree-zero limits disagree with stable elements".into());
        }
        for row in &table.rows {
            d.push(format!("H^{}: lim = {:?}", row.degree, row.lims));
        }
        Ok(table.sharp() && table.stable_elements_agree())
    })?;
    Ok(v)
}

/// Hypotheses of the two-essential criterion, then `lim^n M = 0` for
/// `2 ≤ n ≤ n_max` over `O(F^c)`.  `m` lives over the centric orbit category.
pub fn two_essential_scenario(
    f: &Arc<FusionSystem>,
    p: SubId,
    q: SubId,
    m: &FunctorModule,
    n_max: usize,
    caps: &LimitCaps,
) -> Result<ScenarioVerdict> {
    let u = f.universe();
    let s = f.base();
    let mut v = ScenarioVerdict::new();
    v.require("F saturated", is_saturated(f).saturated, None);
    v.require("P normal in S", f.contains_subgroup(p) && u.is_normal(p, s), Some(u.describe(p)));
    let cr = f.centric_radical_subgroups()?;
    v.require("P centric-radical", cr.contains(&p), None);
    v.require("Q centric-radical", cr.contains(&q), None);
    v.require("P fully normalized", f.contains_subgroup(p) && f.is_fully_normalized(p), None);
    v.require("Q fully normalized", f.contains_subgroup(q) && f.is_fully_normalized(q), None);
    if !v.hypotheses_hold() {
        return Ok(v);
    }
    let np = normalizer_subsystem(f, p)?;
    let generated = join_with(&np, &f.aut(q))?;
    v.require("F generated by N_F(P) and Aut_F(Q)", fusion_subsystem_eq(&generated, f), None);
    let smaller: Vec<String> = cr.iter().filter(|&&r| u.lt(r, q)).map(|&r| u.describe(r)).collect();
    v.require("Q minimal among centric-radical subgroups", smaller.is_empty(), Some(smaller.join(", ")));
    v.conclude::<VerifyError>(|d| {
        let dims = higher_limits(m, n_max, Engine::Auto, caps)?.dims;
        d.push(format!("lim = {dims:?}"));
        Ok(dims.iter().skip(2).all(|&x| x == 0))
    })?;
    Ok(v)
}
