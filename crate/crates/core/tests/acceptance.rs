use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fusion_limits::fusion::{self, classify, inner_fusion, is_saturated, realize, FusionSystem, Triple, Universe};
use fusion_limits::group::{self, presets, SubgroupHandle, TableGroup};
use fusion_limits::homalg::cohomology::{CohomologyCaps, GroupCohomology};
use fusion_limits::homalg::limits::{cobar_complex, LimitCaps, Resolution};
use fusion_limits::homalg::HomalgError;
use fusion_limits::orbit::{
    centric_family, close_family, cohomology_functor, constant_functor, inner_maps_act_trivially, representable_functor,
    CohomologyCache, OrbitCategory,
};
use fusion_limits::repgraph::{build_cx_complex, build_rep_graph};
use fusion_limits::verify::{
    limits_of_subsystem, sharpness_suite, splitting_check, theorem_a_check, transfer_identity, Realization,
};

mod common;

type Outcome = Result<String, String>;

struct Criterion {
    number: usize,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s4_at_two() -> (Arc<group::FiniteGroup>, SubgroupHandle, Arc<FusionSystem>) {
    let g = presets::symmetric(4).unwrap();
    let s = group::sylow(&g.whole(), 2).unwrap();
    let f = Arc::new(realize(&g, &s).unwrap());
    (g, s, f)
}

fn realizable_sharpness() -> Outcome {
    let (_, _, f) = s4_at_two();
    let cache = CohomologyCache::new(f.universe().clone(), CohomologyCaps::default());
    let report = sharpness_suite(&f, 3, 3, &cache, &LimitCaps::default()).map_err(|e| e.to_string())?;
    ensure(report.sharp(), || format!("{:?}", report.rows))?;
    let lim0: Vec<usize> = report.rows.iter().map(|r| r.lims[0]).collect();
    Ok(format!("lim^n = 0 for 1 ≤ n ≤ 3, 0 ≤ j ≤ 3; lim^0 = {lim0:?}"))
}

fn order_at_most_eight() -> Outcome {
    let groups = [
        ("C2", presets::cyclic(2).unwrap()),
        ("C4", presets::cyclic(4).unwrap()),
        ("V", presets::elementary_abelian(2, 2).unwrap()),
        ("C8", presets::cyclic(8).unwrap()),
        ("C4xC2", presets::abelian(&[4, 2]).unwrap()),
        ("C2^3", presets::elementary_abelian(2, 3).unwrap()),
        ("D8", presets::dihedral(8).unwrap()),
        ("Q8", presets::quaternion8().unwrap()),
    ];
    let caps = LimitCaps::default();
    let mut counts = Vec::new();
    let mut total = 0;
    for (name, g) in groups {
        let u = Universe::new(g, 2).unwrap();
        let cache = CohomologyCache::new(u.clone(), CohomologyCaps::default());
        let all = fusion::enumerate_saturated(&u, u.whole(), fusion::DEFAULT_AUT_CAP).map_err(|e| e.to_string())?;
        for f in &all {
            let report = sharpness_suite(&Arc::new(f.clone()), 3, 3, &cache, &caps).map_err(|e| e.to_string())?;
            ensure(report.passed(), || format!("{name}: {:?}", report.rows))?;
        }
        total += all.len();
        counts.push(format!("{name}:{}", all.len()));
    }
    Ok(format!("{total} saturated systems sharp for j, n ≤ 3 ({})", counts.join(" ")))
}

fn rep_graph_kernels() -> Outcome {
    let groups = common::small_p_groups();
    let mut triples = 0;
    let mut generated = 0;
    let mut unsaturated = 0;
    for seed in 0..120u64 {
        let (name, g, p) = &groups[seed as usize % groups.len()];
        let u = Universe::new(g.clone(), *p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::random_triple(&mut rng, &u);
        if !is_saturated(&t.f).saturated {
            unsaturated += 1;
        }
        let family = close_family(&t.f, &[u.trivial()]);
        let cx = build_cx_complex(&t, &family).map_err(|e| e.to_string())?;
        let (k, _) = cx.kernel().map_err(|e| e.to_string())?;
        for (x, &q) in cx.category.objects().iter().enumerate() {
            let graph = build_rep_graph(&t, q).map_err(|e| e.to_string())?;
            let expected = graph.edge_count() + graph.components() - graph.vertex_count();
            ensure(k.dim(x) == expected, || format!("{name} seed {seed}: ker {} against {expected}", k.dim(x)))?;
        }
        if t.join_is_generated().map_err(|e| e.to_string())? {
            generated += 1;
            ensure(cx.cokernel_is_constant().map_err(|e| e.to_string())?, || format!("{name} seed {seed}: cokernel"))?;
        }
        triples += 1;
    }
    Ok(format!("{triples} triples ({unsaturated} unsaturated joins), cokernel constant on {generated}"))
}

fn theorem_a_on_the_dihedral_triple() -> Outcome {
    let (_, _, f) = s4_at_two();
    let u = f.universe().clone();
    let inner = Arc::new(inner_fusion(&u, f.base()).unwrap());
    let t = Triple::new(inner.clone(), f.clone(), inner).map_err(|e| e.to_string())?;
    let family = centric_family(&f);
    let cat = OrbitCategory::build(f.clone(), &family).map_err(|e| e.to_string())?;
    let cache = CohomologyCache::new(u, CohomologyCaps::default());
    for j in 0..=3 {
        let m = cohomology_functor(&cat, j, &cache).map_err(|e| e.to_string())?;
        let ledger = theorem_a_check(&t, &family, &m, 3, &LimitCaps::default()).map_err(|e| e.to_string())?;
        ensure(ledger.green(), || format!("j = {j}: {ledger:?}"))?;
    }
    Ok("ledger green for H^j, j ≤ 3".into())
}

fn shapiro_agreement() -> Outcome {
    let caps = LimitCaps::default();
    let mut checked = 0;
    for (name, g, p) in common::realizable_fixtures() {
        let s = group::sylow(&g.whole(), p).unwrap();
        let f = Arc::new(realize(&g, &s).unwrap());
        let u = f.universe().clone();
        let inner = Arc::new(inner_fusion(&u, f.base()).unwrap());
        let cat = OrbitCategory::build(f.clone(), &centric_family(&f)).map_err(|e| e.to_string())?;
        let cache = CohomologyCache::new(u, CohomologyCaps::default());
        let mut functors = vec![constant_functor(&cat, p)];
        for j in 1..=2 {
            functors.push(cohomology_functor(&cat, j, &cache).map_err(|e| e.to_string())?);
        }
        for m in &functors {
            for h in [&inner, &f] {
                let r = limits_of_subsystem(&cat, h, m, 2, &caps).map_err(|e| format!("{name} at {p}: {e}"))?;
                ensure(r.ext == r.lim, || format!("{name} at {p}: {r:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} comparisons agree for n ≤ 2"))
}

fn stable_elements() -> Outcome {
    let (g, _, f) = s4_at_two();
    let cache = CohomologyCache::new(f.universe().clone(), CohomologyCaps::default());
    let report = sharpness_suite(&f, 2, 0, &cache, &LimitCaps::default()).map_err(|e| e.to_string())?;
    let tg = TableGroup::from_subgroup(&g.whole());
    let mut dims = Vec::new();
    for j in 0..=2 {
        let bar = GroupCohomology::compute(&tg, 2, j, &CohomologyCaps::default()).map_err(|e| e.to_string())?;
        let lim0 = report.rows[j].lims[0];
        ensure(lim0 == bar.dim(), || format!("j = {j}: lim^0 {lim0} against bar {}", bar.dim()))?;
        dims.push(bar.dim());
    }
    Ok(format!("dim H^j(S4; F2) = {dims:?} for j ≤ 2"))
}

fn transfer() -> Outcome {
    let caps = CohomologyCaps::default();
    let (g, s, f) = s4_at_two();
    let d8 = group::group_from_generators(4, &s.permutations()).unwrap();
    let klein: Vec<usize> = ["(0 1)(2 3)", "(0 2)(1 3)"]
        .iter()
        .map(|c| d8.index_of(&group::parse_cycles(4, c).unwrap()).unwrap())
        .collect();
    let v = group::subgroup_generated(&d8, &klein);
    let c4 = presets::cyclic(4).unwrap();
    let c2 = group::subgroup_generated(&c4, &[c4.mul(c4.generators()[0], c4.generators()[0])]);
    for (name, h) in [("(S4, D8)", &s), ("(D8, V)", &v), ("(C4, C2)", &c2)] {
        for j in 0..=2 {
            let r = transfer_identity(h, 2, j, &caps).map_err(|e| e.to_string())?;
            ensure(r.composite_is_index, || format!("{name}, j = {j}"))?;
            ensure(r.splits == (r.index % 2 == 1), || format!("{name}, j = {j}: splitting {}", r.splits))?;
        }
    }
    let whole = Triple::new(f.clone(), f.clone(), f.clone()).map_err(|e| e.to_string())?;
    let u = f.universe();
    let realization = Realization { group: g, small_base: s };
    let mut split = 0;
    for q in u.subgroups_of(f.base()) {
        if !u.is_normal(q, f.base()) {
            continue;
        }
        for j in 0..=2 {
            let v = splitting_check(&whole, q, j, &realization, &caps).map_err(|e| e.to_string())?;
            let index_line = v.details.first().cloned().unwrap_or_default();
            let index: usize = index_line
                .strip_prefix("[G_e : N(Q)] = ")
                .and_then(|r| r.split(',').next())
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| format!("{} at j = {j}: {v:?}", u.describe(q)))?;
            if index % 2 == 1 {
                ensure(v.passed(), || format!("{} at j = {j}: {v:?}", u.describe(q)))?;
                split += 1;
            }
        }
    }
    Ok(format!("tr∘Res = index on all three pairs for j ≤ 2; {split} splitting checks with odd index pass"))
}

/// `None` when the computation would exceed a size cap.
fn within_caps<T>(r: Result<T, HomalgError>) -> Result<Option<T>, String> {
    match r {
        Ok(t) => Ok(Some(t)),
        Err(HomalgError::DimensionCap { .. }) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

fn property_suites() -> Outcome {
    let caps = LimitCaps::default();
    let mut complexes = 0;
    let mut functors = 0;
    for (name, g, p) in common::small_p_groups() {
        let u = Universe::new(g.clone(), p).unwrap();
        let cache = CohomologyCache::new(u.clone(), CohomologyCaps::default());
        let objects: Vec<usize> = (0..u.len()).collect();
        for degree in 0..=2 {
            let trivial = inner_maps_act_trivially(&cache, &objects, degree).map_err(|e| e.to_string())?;
            ensure(trivial, || format!("{name}: inner maps in degree {degree}"))?;
        }
        for seed in 0..4u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = Arc::new(common::random_system(&mut rng, &u, 2));
            let reports = classify(&f).map_err(|e| e.to_string())?;
            for r in &reports {
                for &q in &r.conjugacy_class {
                    let other = reports.iter().find(|x| x.subgroup == q).unwrap();
                    let key = |x: &fusion::SubgroupReport| (x.order, x.aut_order, x.centric, x.radical, x.essential);
                    ensure(key(r) == key(other), || format!("{name} seed {seed}: classifier"))?;
                }
            }
            let cat = OrbitCategory::build(f.clone(), &centric_family(&f)).map_err(|e| e.to_string())?;
            let mut modules = vec![constant_functor(&cat, p), representable_functor(&cat, p, 0)];
            for j in 0..=2 {
                modules.push(cohomology_functor(&cat, j, &cache).map_err(|e| e.to_string())?);
            }
            let res = within_caps(Resolution::build(&modules[0], 3, &caps))?;
            for m in &modules {
                m.check_functoriality().map_err(|e| format!("{name} seed {seed}: {e}"))?;
                functors += 1;
                if let Some(cx) = within_caps(cobar_complex(m, 3, &caps))? {
                    ensure(cx.check_d_squared(), || format!("{name} seed {seed}: cobar d²"))?;
                    complexes += 1;
                }
                if let Some(res) = &res {
                    let cx = res.hom_complex(&cat, m).map_err(|e| e.to_string())?;
                    ensure(cx.check_d_squared(), || format!("{name} seed {seed}: Hom d²"))?;
                    complexes += 1;
                }
            }
        }
    }
    for (name, g, p) in common::realizable_fixtures() {
        let s = group::sylow(&g.whole(), p).unwrap();
        let f = realize(&g, &s).unwrap();
        ensure(is_saturated(&f).saturated, || format!("{name} at {p} reported unsaturated"))?;
    }
    let g = presets::elementary_abelian(3, 2).unwrap();
    let u = Universe::new(g.clone(), 3).unwrap();
    let factor = u.generated(&[g.generators()[0]]);
    let images: Vec<u32> = u.subgroup(factor).members().iter().map(|&x| g.inv(x as usize) as u32).collect();
    let inversion = u.morphism(factor, images);
    let f = fusion::generate(&u, u.whole(), &[inversion]).map_err(|e| e.to_string())?;
    ensure(!is_saturated(&f).saturated, || "inversion on one factor of C3xC3 reported saturated".into())?;
    Ok(format!("{complexes} complexes with d² = 0, {functors} functors functorial, saturation fixtures decided"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { number: 1, title: "realizable sharpness of S4 at 2", budget: Some(Duration::from_secs(120)), run: realizable_sharpness },
        Criterion { number: 2, title: "sharpness over groups of order 2, 4, 8", budget: Some(Duration::from_secs(900)), run: order_at_most_eight },
        Criterion { number: 3, title: "Rep graph cycles and cokernel", budget: None, run: rep_graph_kernels },
        Criterion { number: 4, title: "Theorem A on the D8 triple", budget: None, run: theorem_a_on_the_dihedral_triple },
        Criterion { number: 5, title: "induction against restriction", budget: None, run: shapiro_agreement },
        Criterion { number: 6, title: "stable elements of S4", budget: Some(Duration::from_secs(300)), run: stable_elements },
        Criterion { number: 7, title: "transfer and splitting", budget: None, run: transfer },
        Criterion { number: 8, title: "property suites", budget: None, run: property_suites },
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let over = c.budget.is_some_and(|b| elapsed > b);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over budget of {:?}", c.budget.unwrap())),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("[{status}] criterion {}: {} ({:.1}s): {detail}", c.number, c.title, elapsed.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
