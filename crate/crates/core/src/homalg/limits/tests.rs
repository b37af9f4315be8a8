use std::sync::Arc;

use super::*;
use crate::fusion::{inner_fusion, realize, FusionSystem};
use crate::group::{presets, sylow};
use crate::homalg::cohomology::CohomologyCaps;
use crate::orbit::{
    centric_family, close_family, cohomology_functor, nat_space, representable_functor, CohomologyCache,
};

fn s4_category() -> (Arc<FusionSystem>, Arc<OrbitCategory>, CohomologyCache) {
    let g = presets::symmetric(4).unwrap();
    let s = sylow(&g.whole(), 2).unwrap();
    let f = Arc::new(realize(&g, &s).unwrap());
    let cat = OrbitCategory::build(f.clone(), &centric_family(&f)).unwrap();
    let cache = CohomologyCache::new(f.universe().clone(), CohomologyCaps::default());
    (f, cat, cache)
}

#[test]
fn single_object_without_endomorphisms() {
    let c4 = presets::cyclic(4).unwrap();
    let u = crate::fusion::Universe::new(c4, 2).unwrap();
    let f = Arc::new(inner_fusion(&u, u.whole()).unwrap());
    let cat = OrbitCategory::build(f.clone(), &close_family(&f, &[f.base()])).unwrap();
    let cache = CohomologyCache::new(u.clone(), CohomologyCaps::default());
    let m = cohomology_functor(&cat, 2, &cache).unwrap();
    let c = cobar_complex(&m, 3, &LimitCaps::default()).unwrap();
    assert_eq!(c.dims, vec![1, 0, 0, 0, 0]);
    let t = higher_limits(&m, 3, Engine::Resolution, &LimitCaps::default()).unwrap();
    assert_eq!(t.dims, vec![1, 0, 0, 0]);
}

#[test]
fn a4_first_cohomology_has_no_fixed_points() {
    let a4 = presets::alternating(4).unwrap();
    let k = sylow(&a4.whole(), 2).unwrap();
    let f = Arc::new(realize(&a4, &k).unwrap());
    let cat = OrbitCategory::build(f.clone(), &close_family(&f, &[f.base()])).unwrap();
    let cache = CohomologyCache::new(f.universe().clone(), CohomologyCaps::default());
    let m = cohomology_functor(&cat, 1, &cache).unwrap();
    for engine in [Engine::Cobar, Engine::Resolution] {
        let t = higher_limits(&m, 2, engine, &LimitCaps::default()).unwrap();
        assert_eq!(t.dims, vec![0, 0, 0], "{engine:?}");
    }
    let k0 = constant_functor(&cat, 2);
    assert_eq!(higher_limits(&k0, 2, Engine::Cobar, &LimitCaps::default()).unwrap().dims, vec![1, 0, 0]);
}

#[test]
fn s4_cohomology_functors_are_acyclic() {
    let (_, cat, cache) = s4_category();
    let caps = LimitCaps::default();
    for j in 0..=3 {
        let m = cohomology_functor(&cat, j, &cache).unwrap();
        let c = cobar_complex(&m, 3, &caps).unwrap();
        assert!(c.check_d_squared());
        let cobar = c.cohomology_dims();
        let ext = higher_limits(&m, 3, Engine::Resolution, &caps).unwrap().dims;
        assert_eq!(cobar, ext, "engines disagree at j = {j}");
        assert!(cobar[1..].iter().all(|&d| d == 0), "j = {j}: {cobar:?}");
        assert_eq!(cobar[0], limit_zero_basis(&m).unwrap().len());
    }
}

#[test]
fn stable_elements_match_group_cohomology_of_s4() {
    let (_, cat, cache) = s4_category();
    let expected = [1, 1, 2];
    for (j, &e) in expected.iter().enumerate() {
        let m = cohomology_functor(&cat, j, &cache).unwrap();
        assert_eq!(limit_zero_basis(&m).unwrap().len(), e);
    }
}

#[test]
fn representables_are_projective() {
    let (_, cat, cache) = s4_category();
    let caps = LimitCaps::default();
    let m = cohomology_functor(&cat, 2, &cache).unwrap();
    for x in 0..cat.object_count() {
        let r = representable_functor(&cat, 2, x);
        let dims = ext_groups(&r, &m, 2, &caps).unwrap();
        assert_eq!(dims[0], m.dim(x));
        assert_eq!(dims[0], nat_space(&r, &m).unwrap().len());
        assert!(dims[1..].iter().all(|&d| d == 0), "{dims:?}");
    }
}

#[test]
fn degree_cap_enforced() {
    let (_, cat, _) = s4_category();
    let k = constant_functor(&cat, 2);
    assert!(matches!(cobar_complex(&k, 6, &LimitCaps::default()), Err(HomalgError::DegreeCap { .. })));
    let tight = LimitCaps { cobar_max_columns: 3, ..LimitCaps::default() };
    assert!(matches!(cobar_complex(&k, 2, &tight), Err(HomalgError::DimensionCap { .. })));
    let auto = higher_limits(&k, 2, Engine::Auto, &tight).unwrap();
    assert_eq!(auto.engine, Engine::Resolution);
    assert_eq!(auto.dims, vec![1, 0, 0]);
}
