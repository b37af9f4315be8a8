use std::sync::Arc;

use super::*;
use crate::fusion::{inner_fusion, realize, Universe};
use crate::group::{presets, sylow, Permutation};
use crate::homalg::cohomology::CohomologyCaps;

struct Fixture {
    f: Arc<FusionSystem>,
    h: Arc<FusionSystem>,
    v: SubId,
}

fn d8_fixture() -> Fixture {
    let g = presets::symmetric(4).unwrap();
    let s = sylow(&g.whole(), 2).unwrap();
    let f = Arc::new(realize(&g, &s).unwrap());
    let u = f.universe().clone();
    let h = Arc::new(inner_fusion(&u, f.base()).unwrap());
    let v = klein(&u);
    Fixture { f, h, v }
}

fn klein(u: &Universe) -> SubId {
    let a = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
    let b = Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap();
    u.id_of_permutations(&[a, b]).unwrap()
}

#[test]
fn family_closure() {
    let fx = d8_fixture();
    let f = &fx.f;
    let top = close_family(f, &[f.base()]);
    assert_eq!(top.members(), &[f.base()]);
    let from_v = close_family(f, &[fx.v]);
    let mut expected = vec![fx.v, f.base()];
    expected.sort_unstable();
    assert_eq!(from_v.members(), expected.as_slice());
    assert!(from_v.is_certified());
    let c = centric_family(f);
    assert_eq!(c.len(), 4);
    assert!(c.is_certified());
    let cr = f.centric_radical_subgroups().unwrap();
    assert_eq!(close_family(f, &cr).members(), expected.as_slice());
    assert_eq!(close_family(f, c.members()), c);
    let bad = SubgroupFamily::new(f, [fx.v]);
    assert!(!bad.is_certified());
    assert!(OrbitCategory::build(f.clone(), &bad).is_err());
}

#[test]
fn orbit_category_counts() {
    let fx = d8_fixture();
    let f = &fx.f;
    let cat = OrbitCategory::build(f.clone(), &centric_family(f)).unwrap();
    assert_eq!(cat.object_count(), 4);
    let v = cat.object_of(fx.v).unwrap();
    let s = cat.object_of(f.base()).unwrap();
    assert_eq!(cat.hom(v, s).len(), 3);
    assert_eq!(cat.hom(v, v).len(), 6);
    assert_eq!(cat.hom(s, s).len(), 1);
    cat.check_laws().unwrap();
    assert!(cat.is_connected());

    let a4 = presets::alternating(4).unwrap();
    let k = sylow(&a4.whole(), 2).unwrap();
    let fa = Arc::new(realize(&a4, &k).unwrap());
    let one = close_family(&fa, &[fa.base()]);
    let ca = OrbitCategory::build(fa.clone(), &one).unwrap();
    assert_eq!(ca.object_count(), 1);
    assert_eq!(ca.morphism_count(), 3);
    ca.check_laws().unwrap();

    let inner = Arc::new(inner_fusion(fa.universe(), fa.base()).unwrap());
    let ci = OrbitCategory::build(inner.clone(), &close_family(&inner, &[inner.base()])).unwrap();
    assert_eq!(ci.morphism_count(), 1);
}

#[test]
fn functors_are_functorial() {
    let fx = d8_fixture();
    let f = &fx.f;
    let cat = OrbitCategory::build(f.clone(), &centric_family(f)).unwrap();
    let cache = CohomologyCache::new(f.universe().clone(), CohomologyCaps::default());
    let k = constant_functor(&cat, 2);
    k.check_functoriality().unwrap();
    for j in 0..=3 {
        let m = cohomology_functor(&cat, j, &cache).unwrap();
        m.check_functoriality().unwrap();
        if j == 0 {
            assert_eq!(m, k);
        }
    }
    let h1 = cohomology_functor(&cat, 1, &cache).unwrap();
    assert_eq!(h1.dim(cat.object_of(f.base()).unwrap()), 2);
    for x in 0..cat.object_count() {
        representable_functor(&cat, 2, x).check_functoriality().unwrap();
    }
    assert!(inner_maps_act_trivially(&cache, cat.objects(), 3).unwrap());
}

#[test]
fn yoneda_and_constant_nat() {
    let fx = d8_fixture();
    let f = &fx.f;
    let cat = OrbitCategory::build(f.clone(), &centric_family(f)).unwrap();
    let cache = CohomologyCache::new(f.universe().clone(), CohomologyCaps::default());
    let k = constant_functor(&cat, 2);
    assert_eq!(nat_space(&k, &k).unwrap().len(), 1);
    let zero = FunctorModule::zero(cat.clone(), 2);
    let h2 = cohomology_functor(&cat, 2, &cache).unwrap();
    assert_eq!(nat_space(&zero, &h2).unwrap().len(), 0);
    for x in 0..cat.object_count() {
        let r = representable_functor(&cat, 2, x);
        let nat = nat_space(&r, &h2).unwrap();
        assert_eq!(nat.len(), h2.dim(x));
        for eta in &nat {
            assert!(eta.is_natural(&r, &h2).unwrap());
        }
    }
}

#[test]
fn induction_from_inner_fusion() {
    let fx = d8_fixture();
    let f = &fx.f;
    let fam = centric_family(f);
    let cat = OrbitCategory::build(f.clone(), &fam).unwrap();
    let sub = OrbitCategory::build(fx.h.clone(), &fam.restricted_to(&fx.h)).unwrap();
    let ind = induce_functor(&constant_functor(&sub, 2), &cat).unwrap();
    ind.module.check_functoriality().unwrap();
    assert_eq!(ind.module.dim(cat.object_of(fx.v).unwrap()), 3);
    assert_eq!(ind.module.dim(cat.object_of(f.base()).unwrap()), 1);

    let cache = CohomologyCache::new(f.universe().clone(), CohomologyCaps::default());
    for j in 0..=2 {
        let b = cohomology_functor(&cat, j, &cache).unwrap();
        let left = nat_space(&ind.module, &b).unwrap().len();
        let right = nat_space(&constant_functor(&sub, 2), &restrict_functor(&b, &sub).unwrap()).unwrap().len();
        assert_eq!(left, right, "adjunction at degree {j}");
    }

    let same = induce_functor(&constant_functor(&cat, 2), &cat).unwrap();
    assert_eq!(same.module.dims(), constant_functor(&cat, 2).dims());
}

#[test]
fn restriction_along_identity() {
    let fx = d8_fixture();
    let f = &fx.f;
    let cat = OrbitCategory::build(f.clone(), &centric_family(f)).unwrap();
    let cache = CohomologyCache::new(f.universe().clone(), CohomologyCaps::default());
    let m = cohomology_functor(&cat, 2, &cache).unwrap();
    assert_eq!(restrict_functor(&m, &cat).unwrap(), m);
}

#[test]
fn kernel_and_cokernel_of_a_projection() {
    let fx = d8_fixture();
    let f = &fx.f;
    let cat = OrbitCategory::build(f.clone(), &centric_family(f)).unwrap();
    let k = constant_functor(&cat, 2);
    let sum = FunctorModule::direct_sum(&[&k, &k]).unwrap();
    let nat = nat_space(&sum, &k).unwrap();
    assert_eq!(nat.len(), 2);
    let (ker, incl) = nat[0].kernel(&sum).unwrap();
    ker.check_functoriality().unwrap();
    assert!(incl.is_natural(&ker, &sum).unwrap());
    assert_eq!(ker.dims(), &[1, 1, 1, 1]);
    let (coker, proj) = nat[0].cokernel(&k).unwrap();
    assert!(coker.is_zero());
    assert!(proj.is_natural(&k, &coker).unwrap());
}
