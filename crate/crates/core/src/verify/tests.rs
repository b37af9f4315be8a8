use std::sync::Arc;

use super::*;
use crate::fusion::{inner_fusion, realize, FusionSystem, SubId, Triple, Universe};
use crate::group::{self, presets, sylow, FiniteGroup, Permutation, SubgroupHandle, TableGroup};
use crate::homalg::cohomology::{CohomologyCaps, GroupCohomology};
use crate::homalg::limits::{higher_limits, Engine, LimitCaps};
use crate::orbit::{
    centric_family, close_family, cohomology_functor, constant_functor, CohomologyCache, FunctorModule, OrbitCategory,
};

struct Fixture {
    g: Arc<FiniteGroup>,
    s: SubgroupHandle,
    f: Arc<FusionSystem>,
    h: Arc<FusionSystem>,
    v: SubId,
    cache: CohomologyCache,
}

fn d8_fixture() -> Fixture {
    let g = presets::symmetric(4).unwrap();
    let s = sylow(&g.whole(), 2).unwrap();
    let f = Arc::new(realize(&g, &s).unwrap());
    let u = f.universe().clone();
    let h = Arc::new(inner_fusion(&u, f.base()).unwrap());
    let v = klein(&u);
    let cache = CohomologyCache::new(u, CohomologyCaps::default());
    Fixture { g, s, f, h, v, cache }
}

fn klein(u: &Universe) -> SubId {
    let a = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
    let b = Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap();
    u.id_of_permutations(&[a, b]).unwrap()
}

fn named(u: &Universe, cycles: &[&[&[u32]]]) -> SubId {
    let perms: Vec<Permutation> = cycles.iter().map(|c| Permutation::from_cycles(4, c).unwrap()).collect();
    u.id_of_permutations(&perms).unwrap()
}

fn cyclic_of_order_four(fx: &Fixture) -> SubId {
    let u = fx.f.universe();
    let g = u.group();
    u.subgroups_of(fx.f.base())
        .into_iter()
        .find(|&q| u.subgroup(q).order() == 4 && u.subgroup(q).members().iter().any(|&x| g.element_order(x as usize) == 4))
        .unwrap()
}

fn centric_category(f: &Arc<FusionSystem>) -> Arc<OrbitCategory> {
    OrbitCategory::build(f.clone(), &centric_family(f)).unwrap()
}

fn cohomology(cat: &Arc<OrbitCategory>, j: usize, cache: &CohomologyCache) -> FunctorModule {
    cohomology_functor(cat, j, cache).unwrap()
}

fn star(fx: &Fixture) -> Triple {
    Triple::new(fx.h.clone(), fx.f.clone(), fx.h.clone()).unwrap()
}

fn parallel(fx: &Fixture) -> Triple {
    Triple::new(fx.f.clone(), fx.f.clone(), fx.h.clone()).unwrap()
}

/// `D_8` as a group of its own, for realizing the inner system.
fn d8_realization(fx: &Fixture) -> Realization {
    let group = group::group_from_generators(4, &fx.s.permutations()).unwrap();
    let small_base = group.whole();
    Realization { group, small_base }
}

fn s4_realization(fx: &Fixture) -> Realization {
    Realization { group: fx.g.clone(), small_base: fx.s.clone() }
}

#[test]
fn induction_comparison_on_the_fixture() {
    let fx = d8_fixture();
    let cat = centric_category(&fx.f);
    let caps = LimitCaps::default();
    let k = constant_functor(&cat, 2);
    for m in [k, cohomology(&cat, 1, &fx.cache), cohomology(&cat, 2, &fx.cache)] {
        for h in [&fx.h, &fx.f] {
            let r = limits_of_subsystem(&cat, h, &m, 2, &caps).unwrap();
            assert_eq!(r.ext, r.lim);
        }
        let whole = limits_of_subsystem(&cat, &fx.f, &m, 2, &caps).unwrap();
        assert_eq!(whole.lim, higher_limits(&m, 2, Engine::Auto, &caps).unwrap().dims);
    }
    let m = cohomology(&cat, 1, &fx.cache);
    let r = limits_of_subsystem(&cat, &fx.h, &m, 1, &caps).unwrap();
    // lim^0 over the inner system is H^1(D_8)
    assert_eq!(r.lim[0], 2);
}

#[test]
fn stable_element_identifications() {
    let fx = d8_fixture();
    let cat = centric_category(&fx.f);
    let t = star(&fx);
    let k = constant_functor(&cat, 2);
    let r = limone_identification(&t, &cat, &k).unwrap();
    assert_eq!(r.ker_fstar, 1);
    assert!(r.holds());
    for j in 0..=3 {
        let m = cohomology(&cat, j, &fx.cache);
        let r = limone_identification(&t, &cat, &m).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.coker_fstar, 0);
        assert_eq!(r.ker_fstar, stable_elements_dim(&fx.f, j, &fx.cache).unwrap());
    }
}

#[test]
fn ledger_on_the_star_triple() {
    let fx = d8_fixture();
    let cat = centric_category(&fx.f);
    let t = star(&fx);
    let family = centric_family(&fx.f);
    let caps = LimitCaps::default();
    for j in 0..=3 {
        let m = cohomology(&cat, j, &fx.cache);
        let ledger = theorem_a_check(&t, &family, &m, 3, &caps).unwrap();
        assert!(ledger.green(), "{ledger:?}");
        let c = ledger.checks.as_ref().unwrap();
        assert!(c.kernel_dims.iter().all(|&d| d == 0));
        assert!(c.lim_dims.iter().skip(1).all(|&d| d == 0));
        assert_eq!(c.nat_dim, 0);
    }
    let k = constant_functor(&cat, 2);
    let ledger = theorem_a_check(&t, &family, &k, 3, &caps).unwrap();
    assert!(ledger.green());
    assert_eq!(ledger.checks.unwrap().lim_dims, vec![1, 0, 0, 0]);
    let json = serde_json::to_value(theorem_a_check(&t, &family, &cohomology(&cat, 1, &fx.cache), 3, &caps).unwrap()).unwrap();
    assert_eq!(json["checks"]["flags"]["upsilon_well_defined"], true);
}

#[test]
fn ledger_with_a_nonzero_kernel() {
    let fx = d8_fixture();
    let cat = centric_category(&fx.f);
    let t = parallel(&fx);
    let family = centric_family(&fx.f);
    for j in 0..=2 {
        let m = cohomology(&cat, j, &fx.cache);
        let ledger = theorem_a_check(&t, &family, &m, 3, &LimitCaps::default()).unwrap();
        assert!(ledger.green(), "{ledger:?}");
        let c = ledger.checks.unwrap();
        assert_eq!(c.kernel_dims[cat.object_of(fx.v).unwrap()], 2);
        // both limits vanish, so Υ is an isomorphism
        assert_eq!(c.ker_upsilon_dim, 0);
        assert_eq!(c.upsilon_rank, c.nat_dim);
        assert_eq!(c.coker_fstar_dim, c.nat_dim);
    }
}

#[test]
fn ledger_rejects_a_family_without_the_essential() {
    let fx = d8_fixture();
    let cat = centric_category(&fx.f);
    let family = close_family(&fx.f, &[fx.f.base()]);
    let m = cohomology(&cat, 1, &fx.cache);
    let ledger = theorem_a_check(&star(&fx), &family, &m, 3, &LimitCaps::default()).unwrap();
    assert!(!ledger.verdict.hypotheses_hold());
    assert!(ledger.checks.is_none());
    assert!(!ledger.green());
    assert_eq!(ledger.verdict.first_failure().unwrap().name, "F2^cr in the family");
}

#[test]
fn pruning_the_klein_four_group() {
    let fx = d8_fixture();
    let caps = LimitCaps::default();
    let v = theorem_b_scenario(&fx.f, &fx.h, &[fx.v], 3, 3, &fx.cache, &caps).unwrap();
    assert!(v.passed(), "{v:?}");
    let vacuous = theorem_b_scenario(&fx.h, &fx.h, &[], 2, 2, &fx.cache, &caps).unwrap();
    assert!(vacuous.passed(), "{vacuous:?}");
    let s = fx.f.base();
    let bad = theorem_b_scenario(&fx.f, &fx.h, &[fx.v, s], 2, 2, &fx.cache, &caps).unwrap();
    assert!(!bad.conclusion_checked);
    let bullet = bad.hypotheses.iter().find(|h| h.name.contains("bullet") && !h.holds).unwrap();
    assert!(bullet.name.starts_with(&fx.f.universe().describe(s)));
}

#[test]
fn two_essentials_collapsing_to_one() {
    let fx = d8_fixture();
    let cat = centric_category(&fx.f);
    let caps = LimitCaps::default();
    for m in [constant_functor(&cat, 2), cohomology(&cat, 2, &fx.cache)] {
        let v = two_essential_scenario(&fx.f, fx.v, fx.v, &m, 3, &caps).unwrap();
        assert!(v.passed(), "{v:?}");
    }
    let u = fx.f.universe();
    let t = named(u, &[&[&[0, 1]]]);
    let m = constant_functor(&cat, 2);
    let v = two_essential_scenario(&fx.f, t, fx.v, &m, 3, &caps).unwrap();
    let first = v.first_failure().unwrap();
    assert_eq!(first.name, "P normal in S");
    assert!(!v.conclusion_checked);
}

#[test]
fn gamma_for_the_normal_klein_four() {
    let fx = d8_fixture();
    let family = centric_family(&fx.f);
    let zero = gamma_map(&star(&fx), fx.v, &family).unwrap();
    let r = zero.report().unwrap();
    assert!(r.is_isomorphism);
    assert!(r.objects.iter().all(|o| o.source_dim == 0 && o.target_dim == 0 && o.hom_condition));
    let g = gamma_map(&parallel(&fx), fx.v, &family).unwrap();
    let r = g.report().unwrap();
    assert!(r.natural && r.is_isomorphism, "{r:?}");
    let at_v = &r.objects[g.category.object_of(fx.v).unwrap()];
    assert_eq!((at_v.source_dim, at_v.target_dim, at_v.rank), (2, 2, 2));
    assert!(r.objects.iter().all(|o| o.hom_condition));
}

#[test]
fn gamma_for_the_whole_base_is_not_invertible() {
    let fx = d8_fixture();
    let family = centric_family(&fx.f);
    let g = gamma_map(&parallel(&fx), fx.f.base(), &family).unwrap();
    assert!(fusion::fusion_subsystem_eq(&g.xi.f, &fx.h));
    let r = g.report().unwrap();
    assert!(!r.is_isomorphism);
    let at_v = &r.objects[g.category.object_of(fx.v).unwrap()];
    assert!(!at_v.iso && !at_v.hom_condition);
    assert_eq!(at_v.source_dim, 0);
}

#[test]
fn transfer_composites() {
    let caps = CohomologyCaps::default();
    let fx = d8_fixture();
    let d8 = d8_realization(&fx);
    let v_handle = {
        let u = fx.f.universe();
        let members: Vec<usize> = u
            .subgroup(fx.v)
            .members()
            .iter()
            .map(|&x| d8.group.index_of(u.group().element(x as usize)).unwrap())
            .collect();
        group::subgroup_from_members(&d8.group, &members).unwrap()
    };
    let c4 = presets::cyclic(4).unwrap();
    let c2 = group::subgroup_generated(&c4, &[c4.mul(c4.generators()[0], c4.generators()[0])]);
    for j in 0..=2 {
        let a = transfer_identity(&fx.s, 2, j, &caps).unwrap();
        assert!(a.composite_is_index && a.splits);
        assert_eq!(a.index, 3);
        let b = transfer_identity(&v_handle, 2, j, &caps).unwrap();
        assert!(b.composite_is_index && !b.splits);
        let c = transfer_identity(&c2, 2, j, &caps).unwrap();
        assert!(c.composite_is_index && !c.splits);
    }
    assert!(transfer_identity(&fx.s, 2, 3, &caps).is_err());
}

#[test]
fn splitting_through_transfer() {
    let fx = d8_fixture();
    let caps = CohomologyCaps::default();
    let u = fx.f.universe();
    let d8 = d8_realization(&fx);
    let v = splitting_check(&star(&fx), fx.v, 2, &d8, &caps).unwrap();
    assert!(v.passed(), "{v:?}");
    let whole = Triple::new(fx.f.clone(), fx.f.clone(), fx.f.clone()).unwrap();
    let s4 = s4_realization(&fx);
    let c4 = cyclic_of_order_four(&fx);
    for q in [fx.v, c4] {
        for j in 0..=2 {
            let v = splitting_check(&whole, q, j, &s4, &caps).unwrap();
            assert!(v.passed(), "{v:?}");
        }
    }
    assert!(v.details.iter().any(|d| d.contains("= 1")));
    let index_three = splitting_check(&whole, c4, 1, &s4, &caps).unwrap();
    assert!(index_three.details[0].starts_with("[G_e : N(Q)] = 3"));
    let t = named(u, &[&[&[0, 1]]]);
    let bad = splitting_check(&whole, t, 1, &s4, &caps).unwrap();
    assert_eq!(bad.first_failure().unwrap().name, "Q normal in S'");
    assert!(!bad.conclusion_checked);
    // the inner system is not realized by S_4
    let wrong = splitting_check(&star(&fx), fx.v, 1, &s4, &caps).unwrap();
    assert_eq!(wrong.first_failure().unwrap().name, "F_e realized by G_e");
}

fn theorem_c_inputs<'a>(
    t: &'a Triple,
    q: SubId,
    family: &'a SubgroupFamily,
    m: &'a FunctorModule,
    degree: usize,
    realization: Option<&'a Realization>,
    caps: &'a LimitCaps,
    coh: &'a CohomologyCaps,
) -> TheoremCInputs<'a> {
    TheoremCInputs { triple: t, q, family, functor: m, degree, realization, n_max: 3, caps, cohomology_caps: coh }
}

use crate::fusion;
use crate::orbit::SubgroupFamily;

#[test]
fn normalizer_triple_criterion() {
    let fx = d8_fixture();
    let cat = centric_category(&fx.f);
    let family = centric_family(&fx.f);
    let caps = LimitCaps::default();
    let coh = CohomologyCaps::default();
    let d8 = d8_realization(&fx);
    for t in [star(&fx), parallel(&fx)] {
        for j in 0..=3 {
            let m = cohomology(&cat, j, &fx.cache);
            let inputs = theorem_c_inputs(&t, fx.v, &family, &m, j, Some(&d8), &caps, &coh);
            let v = theorem_c_scenario(&inputs).unwrap();
            assert!(v.passed(), "{v:?}");
        }
    }
    let m = cohomology(&cat, 1, &fx.cache);
    let t = star(&fx);
    let missing = theorem_c_inputs(&t, fx.v, &family, &m, 1, None, &caps, &coh);
    let v = theorem_c_scenario(&missing).unwrap();
    assert_eq!(v.first_failure().unwrap().name, "π_1* splits");
    let trivial = theorem_c_inputs(&t, fx.f.universe().trivial(), &family, &m, 1, Some(&d8), &caps, &coh);
    let v = theorem_c_scenario(&trivial).unwrap();
    assert!(!v.hypotheses_hold() && !v.conclusion_checked);
}

#[test]
fn normalizer_triple_criterion_rejects_faults() {
    let fx = d8_fixture();
    let cat = centric_category(&fx.f);
    let family = centric_family(&fx.f);
    let caps = LimitCaps::default();
    let coh = CohomologyCaps::default();
    let d8 = d8_realization(&fx);
    let t = parallel(&fx);
    let m = cohomology(&cat, 1, &fx.cache);
    let inputs = theorem_c_inputs(&t, fx.v, &family, &m, 1, Some(&d8), &caps, &coh);

    let mut corrupted = gamma_map(&t, fx.v, &family).unwrap();
    let x = corrupted.category.object_of(fx.v).unwrap();
    let (r, c) = (corrupted.gamma.components[x].rows(), corrupted.gamma.components[x].cols());
    corrupted.gamma.components[x] = crate::homalg::linalg::FpMatrix::zeros(2, r, c);
    let v = evaluate_theorem_c(&inputs, Some(&corrupted)).unwrap();
    let fail = v.first_failure().unwrap();
    assert_eq!(fail.name, "Γ is an isomorphism");
    assert!(fail.witness.as_ref().unwrap().contains(&fx.f.universe().describe(fx.v)));
    assert!(!v.conclusion_checked);

    let mut wrong_e = gamma_map(&t, fx.v, &family).unwrap();
    wrong_e.xi = Triple::new(fx.h.clone(), fx.h.clone(), fx.h.clone()).unwrap();
    let v = evaluate_theorem_c(&inputs, Some(&wrong_e)).unwrap();
    assert_eq!(v.first_failure().unwrap().name, "N_F(Q) = E");
}

#[test]
fn sharpness_table_of_the_symmetric_group() {
    let fx = d8_fixture();
    let report = sharpness_suite(&fx.f, 3, 3, &fx.cache, &LimitCaps::default()).unwrap();
    assert!(report.passed(), "{report:?}");
    let whole = fx.g.whole();
    let tg = TableGroup::from_subgroup(&whole);
    for j in 0..=2 {
        let bar = GroupCohomology::compute(&tg, 2, j, &CohomologyCaps::default()).unwrap();
        assert_eq!(report.rows[j].lims[0], bar.dim());
    }
    let lim0: Vec<usize> = report.rows.iter().map(|r| r.lims[0]).collect();
    assert_eq!(lim0, vec![1, 1, 2, 3]);
}

#[test]
fn sharpness_table_of_the_alternating_group() {
    let g = presets::alternating(4).unwrap();
    let s = sylow(&g.whole(), 2).unwrap();
    let f = Arc::new(realize(&g, &s).unwrap());
    let cache = CohomologyCache::new(f.universe().clone(), CohomologyCaps::default());
    let report = sharpness_suite(&f, 1, 2, &cache, &LimitCaps::default()).unwrap();
    assert!(report.passed());
    assert_eq!(report.rows[0].lims, vec![1, 0, 0]);
    assert_eq!(report.rows[1].lims, vec![0, 0, 0]);
}

#[test]
fn sharpness_over_the_dihedral_group_of_order_eight() {
    let g = presets::dihedral(8).unwrap();
    let u = Universe::new(g, 2).unwrap();
    let cache = CohomologyCache::new(u.clone(), CohomologyCaps::default());
    let all = fusion::enumerate_saturated(&u, u.whole(), fusion::DEFAULT_AUT_CAP).unwrap();
    assert_eq!(all.len(), 4);
    for f in all {
        let report = sharpness_suite(&Arc::new(f), 3, 3, &cache, &LimitCaps::default()).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
