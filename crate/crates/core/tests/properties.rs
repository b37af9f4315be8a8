use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fusion_limits::fusion::{classify, is_saturated, realize, FusionSystem, Universe};
use fusion_limits::group::{self, presets};
use fusion_limits::homalg::cohomology::CohomologyCaps;
use fusion_limits::homalg::HomalgError;
use fusion_limits::homalg::limits::{cobar_complex, higher_limits, Engine, LimitCaps, Resolution};
use fusion_limits::orbit::{
    centric_family, close_family, cohomology_functor, constant_functor, induce_functor, inner_maps_act_trivially,
    representable_functor, restrict_functor, CohomologyCache, FunctorModule, OrbitCategory,
};
use fusion_limits::repgraph::{build_cx_complex, build_rep_graph};

mod common;

fn random_fixture(which: usize, seed: u64) -> (Arc<FusionSystem>, Arc<OrbitCategory>, CohomologyCache) {
    let groups = common::small_p_groups();
    let (_, g, p) = &groups[which % groups.len()];
    let u = Universe::new(g.clone(), *p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = Arc::new(common::random_system(&mut rng, &u, 2));
    let cat = OrbitCategory::build(f.clone(), &centric_family(&f)).unwrap();
    let cache = CohomologyCache::new(u, CohomologyCaps::default());
    (f, cat, cache)
}

fn sample_functors(cat: &Arc<OrbitCategory>, cache: &CohomologyCache) -> Vec<FunctorModule> {
    let p = cat.p();
    let mut out = vec![constant_functor(cat, p), representable_functor(cat, p, 0)];
    for j in 0..=2 {
        out.push(cohomology_functor(cat, j, cache).unwrap());
    }
    out
}

/// `None` when the computation would exceed a size cap.
fn within_caps<T>(r: Result<T, HomalgError>) -> Option<T> {
    match r {
        Ok(t) => Some(t),
        Err(HomalgError::DimensionCap { .. }) => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundaries_compose_to_zero(which in 0usize..64, seed in any::<u64>()) {
        let (_, cat, cache) = random_fixture(which, seed);
        let caps = LimitCaps::default();
        let k = constant_functor(&cat, cat.p());
        let res = within_caps(Resolution::build(&k, 3, &caps));
        for m in sample_functors(&cat, &cache) {
            if let Some(cx) = within_caps(cobar_complex(&m, 3, &caps)) {
                prop_assert!(cx.check_d_squared());
            }
            if let Some(res) = &res {
                prop_assert!(res.hom_complex(&cat, &m).unwrap().check_d_squared());
            }
        }
    }

    #[test]
    fn constructed_functors_are_functorial(which in 0usize..64, seed in any::<u64>()) {
        let (f, cat, cache) = random_fixture(which, seed);
        for m in sample_functors(&cat, &cache) {
            prop_assert!(m.check_functoriality().is_ok());
        }
        let inner = Arc::new(fusion_limits::fusion::inner_fusion(f.universe(), f.base()).unwrap());
        let sub = OrbitCategory::build(inner.clone(), &centric_family(&f).restricted_to(&inner)).unwrap();
        let h1 = cohomology_functor(&cat, 1, &cache).unwrap();
        let down = restrict_functor(&h1, &sub).unwrap();
        prop_assert!(down.check_functoriality().is_ok());
        let up = induce_functor(&constant_functor(&sub, cat.p()), &cat).unwrap();
        prop_assert!(up.module.check_functoriality().is_ok());
    }

    #[test]
    fn inner_automorphisms_act_trivially(which in 0usize..64, degree in 0usize..=2) {
        let groups = common::small_p_groups();
        let (_, g, p) = &groups[which % groups.len()];
        let u = Universe::new(g.clone(), *p).unwrap();
        let cache = CohomologyCache::new(u.clone(), CohomologyCaps::default());
        let objects: Vec<usize> = (0..u.len()).collect();
        prop_assert!(inner_maps_act_trivially(&cache, &objects, degree).unwrap());
    }

    #[test]
    fn classification_is_constant_on_conjugacy_classes(which in 0usize..64, seed in any::<u64>()) {
        let (f, _, _) = random_fixture(which, seed);
        let reports = classify(&f).unwrap();
        for r in &reports {
            for &q in &r.conjugacy_class {
                let other = reports.iter().find(|x| x.subgroup == q).unwrap();
                prop_assert_eq!(
                    (r.order, r.aut_order, r.out_order, r.centric, r.radical, r.essential),
                    (other.order, other.aut_order, other.out_order, other.centric, other.radical, other.essential)
                );
            }
        }
    }

    #[test]
    fn rep_graph_cycles_are_the_kernel(which in 0usize..64, seed in any::<u64>()) {
        let groups = common::small_p_groups();
        let (_, g, p) = &groups[which % groups.len()];
        let u = Universe::new(g.clone(), *p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::random_triple(&mut rng, &u);
        let family = close_family(&t.f, &[u.trivial()]);
        let cx = build_cx_complex(&t, &family).unwrap();
        let (k, _) = cx.kernel().unwrap();
        for (x, &q) in cx.category.objects().iter().enumerate() {
            let graph = build_rep_graph(&t, q).unwrap();
            prop_assert_eq!(k.dim(x), graph.edge_count() + graph.components() - graph.vertex_count());
        }
        prop_assert!(cx.cokernel_is_constant().unwrap());
    }
}

#[test]
fn sylow_realizations_are_saturated() {
    for (name, g, p) in common::realizable_fixtures() {
        let s = group::sylow(&g.whole(), p).unwrap();
        let f = realize(&g, &s).unwrap();
        assert!(is_saturated(&f).saturated, "{name} at {p}");
    }
}

#[test]
fn inversion_on_one_factor_of_c3_by_c3_is_not_saturated() {
    let g = presets::elementary_abelian(3, 2).unwrap();
    let u = Universe::new(g.clone(), 3).unwrap();
    let factor = u.generated(&[g.generators()[0]]);
    let members = u.subgroup(factor).members().to_vec();
    let images: Vec<u32> = members.iter().map(|&x| g.inv(x as usize) as u32).collect();
    let inversion = u.morphism(factor, images);
    let f = fusion_limits::fusion::generate(&u, u.whole(), &[inversion]).unwrap();
    let verdict = is_saturated(&f);
    assert!(!verdict.saturated);
    assert!(verdict.witness.is_some());
}

#[test]
fn realizable_limits_vanish_on_the_fixtures() {
    let caps = LimitCaps::default();
    for (name, g, p) in common::realizable_fixtures() {
        let s = group::sylow(&g.whole(), p).unwrap();
        let f = Arc::new(realize(&g, &s).unwrap());
        let cat = OrbitCategory::build(f.clone(), &centric_family(&f)).unwrap();
        let cache = CohomologyCache::new(f.universe().clone(), CohomologyCaps::default());
        for j in 0..=2 {
            let m = cohomology_functor(&cat, j, &cache).unwrap();
            let t = higher_limits(&m, 2, Engine::Auto, &caps).unwrap();
            assert!(t.vanishes_above_zero(), "{name} at {p}, degree {j}: {:?}", t.dims);
        }
    }
}
