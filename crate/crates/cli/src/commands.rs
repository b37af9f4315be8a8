use std::sync::Arc;

use serde::Serialize;

use fusion_limits::fusion::{self, FusionSystem, SubId, SubgroupReport, Triple};
use fusion_limits::group::{self, SubgroupHandle};
use fusion_limits::homalg::limits::{higher_limits, Engine};
use fusion_limits::orbit::{centric_family, CohomologyCache, FunctorModule, OrbitCategory, SubgroupFamily};
use fusion_limits::repgraph::{pruning_vanishing_check, tree_criteria_check, TreeCriteriaVerdict};
use fusion_limits::verdict::ScenarioVerdict;
use fusion_limits::verify::{self, Realization, SharpnessReport, TheoremALedger, TheoremCInputs};

use crate::config::{RunConfig, VerifyKind};
use crate::error::CliError;
use crate::report::{table, Outcome, Provenance};
use crate::setup::{type_label, FunctorLabel, Setup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_ALARM: i32 = 4;

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let s = Setup::load(cfg)?;
    match cfg.verify {
        None if cfg.command == "classify" => classify(cfg, &s),
        None => limits(cfg, &s),
        Some(kind) => verify_kind(cfg, &s, kind),
    }
}

#[derive(Serialize)]
struct ClassifyRow {
    label: String,
    generators: Vec<String>,
    #[serde(flatten)]
    report: SubgroupReport,
}

#[derive(Serialize)]
struct ClassifyResult {
    subgroups: usize,
    centric: usize,
    centric_radical: usize,
    essential: usize,
    rows: Vec<ClassifyRow>,
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "-" }.to_string()
}

fn classify(cfg: &RunConfig, s: &Setup) -> Result<Outcome, CliError> {
    let reports = fusion::classify(&s.f)?;
    let u = s.universe();
    let rows: Vec<ClassifyRow> = reports
        .into_iter()
        .map(|r| ClassifyRow { label: type_label(u, r.subgroup), generators: s.generators(r.subgroup), report: r })
        .collect();
    let count = |pred: fn(&SubgroupReport) -> bool| rows.iter().filter(|r| pred(&r.report)).count();
    let result = ClassifyResult {
        subgroups: rows.len(),
        centric: count(|r| r.centric),
        centric_radical: count(|r| r.centric_radical),
        essential: count(|r| r.essential),
        rows,
    };
    let printable: Vec<Vec<String>> = result
        .rows
        .iter()
        .map(|r| {
            vec![
                format!("#{}", r.report.subgroup),
                r.label.clone(),
                r.report.order.to_string(),
                format!("{}/{}", r.report.aut_order, r.report.out_order),
                yes(r.report.fully_normalized),
                yes(r.report.centric),
                yes(r.report.radical),
                yes(r.report.essential),
                r.generators.join(" "),
            ]
        })
        .collect();
    let mut summary = table(
        &["id", "type", "order", "|Aut|/|Out|", "fully normalized", "centric", "radical", "essential", "generators"],
        &printable,
    );
    summary += &format!(
        "{} subgroups, {} centric, {} centric-radical, {} essential\n",
        result.subgroups, result.centric, result.centric_radical, result.essential
    );
    Outcome::new(cfg.command.clone(), Provenance::new(cfg, s, None), result, true, summary, EXIT_OK)
}

#[derive(Serialize)]
struct LimitRow {
    #[serde(flatten)]
    functor: FunctorLabel,
    functor_dims: Vec<usize>,
    lims: Vec<usize>,
}

fn certified(family: &SubgroupFamily) -> Result<(), CliError> {
    if family.is_certified() {
        return Ok(());
    }
    Err(CliError::Config("the family is not closed under F-conjugation and overgroups".into()))
}

fn limits(cfg: &RunConfig, s: &Setup) -> Result<Outcome, CliError> {
    let family = s.family(&cfg.family)?;
    certified(&family)?;
    let cat = s.category(&family)?;
    let cache = s.cache();
    let mut rows = Vec::new();
    for (label, m) in s.functors(&cfg.functor, cfg.j_max, &cat, &cache)? {
        let lims = higher_limits(&m, cfg.n_max, Engine::Auto, &s.limit_caps)?.dims;
        rows.push(LimitRow { functor: label, functor_dims: m.dims().to_vec(), lims });
    }
    let mut header = vec!["functor".to_string()];
    header.extend((0..=cfg.n_max).map(|n| format!("lim^{n}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let printable: Vec<Vec<String>> = rows
        .iter()
        .map(|r| std::iter::once(r.functor.to_string()).chain(r.lims.iter().map(usize::to_string)).collect())
        .collect();
    let summary = table(&header, &printable);
    Outcome::new(cfg.command.clone(), Provenance::new(cfg, s, Some(&family)), rows, true, summary, EXIT_OK)
}

fn verdict_code(v: &ScenarioVerdict) -> i32 {
    if v.passed() {
        EXIT_OK
    } else if !v.hypotheses_hold() {
        EXIT_HYPOTHESIS
    } else {
        EXIT_ALARM
    }
}

fn verdict_lines(v: &ScenarioVerdict) -> String {
    let mut s = String::new();
    for h in &v.hypotheses {
        s += &format!("  [{}] {}", if h.holds { "ok" } else { "FAIL" }, h.name);
        if let Some(w) = &h.witness {
            s += &format!(" ({w})");
        }
        s.push('\n');
    }
    let conclusion = match (v.conclusion_checked, v.conclusion_holds) {
        (false, _) => "not checked",
        (true, true) => "holds",
        (true, false) => "FAILS",
    };
    s += &format!("  conclusion: {conclusion}\n");
    for d in &v.details {
        s += &format!("    {d}\n");
    }
    s
}

/// The worst exit code of several verdicts.
fn worst(codes: impl IntoIterator<Item = i32>) -> i32 {
    codes.into_iter().max().unwrap_or(EXIT_OK)
}

fn verify_kind(cfg: &RunConfig, s: &Setup, kind: VerifyKind) -> Result<Outcome, CliError> {
    match kind {
        VerifyKind::TheoremA => theorem_a(cfg, s),
        VerifyKind::TheoremB => theorem_b(cfg, s),
        VerifyKind::TheoremC => theorem_c(cfg, s),
        VerifyKind::TwoEssential => two_essential(cfg, s),
        VerifyKind::Trees => trees(cfg, s),
        VerifyKind::Sharpness => sharpness(cfg, s),
    }
}

/// The pruned subgroups named on the command line, or every essential.
fn pruned_set(cfg: &RunConfig, s: &Setup) -> Result<Vec<SubId>, CliError> {
    if cfg.prune.is_empty() {
        s.essentials()
    } else {
        s.resolve_all(&cfg.prune)
    }
}

fn single_pruned(cfg: &RunConfig, s: &Setup) -> Result<SubId, CliError> {
    let a = pruned_set(cfg, s)?;
    match a.as_slice() {
        [p] => Ok(*p),
        [] => Err(CliError::Config("no essential subgroup to prune; pass --prune".into())),
        _ => Err(CliError::Config("several subgroups to prune; pass exactly one --prune".into())),
    }
}

/// `(H, N_F(P), N_H(P))` with `H` the system pruned at `P`.
fn pruning_triple(s: &Setup, p: SubId) -> Result<(Arc<FusionSystem>, Triple), CliError> {
    let h = s.pruned(&[p])?;
    let nf = Arc::new(fusion::normalizer_subsystem(&s.f, p)?);
    let nh = Arc::new(fusion::normalizer_subsystem(&h, p)?);
    Ok((h.clone(), Triple::new(h, nf, nh)?))
}

#[derive(Serialize)]
struct TripleRecord {
    pruned: String,
    small_base: String,
    f1_morphisms: usize,
    f2_morphisms: usize,
    fe_morphisms: usize,
    join_morphisms: usize,
}

fn triple_record(s: &Setup, p: SubId, t: &Triple) -> TripleRecord {
    TripleRecord {
        pruned: s.name(p),
        small_base: s.name(t.small_base()),
        f1_morphisms: t.f1.morphism_count(),
        f2_morphisms: t.f2.morphism_count(),
        fe_morphisms: t.fe.morphism_count(),
        join_morphisms: t.f.morphism_count(),
    }
}

struct Centric {
    family: SubgroupFamily,
    cat: Arc<OrbitCategory>,
    cache: CohomologyCache,
}

fn centric(s: &Setup) -> Result<Centric, CliError> {
    let family = centric_family(&s.f);
    let cat = s.category(&family)?;
    Ok(Centric { family, cat, cache: s.cache() })
}

fn functors_over(cfg: &RunConfig, s: &Setup, c: &Centric) -> Result<Vec<(FunctorLabel, FunctorModule)>, CliError> {
    s.functors(&cfg.functor, cfg.j_max, &c.cat, &c.cache)
}

#[derive(Serialize)]
struct LabelledLedger {
    #[serde(flatten)]
    functor: FunctorLabel,
    green: bool,
    ledger: TheoremALedger,
}

#[derive(Serialize)]
struct TheoremAResult {
    triple: TripleRecord,
    ledgers: Vec<LabelledLedger>,
}

fn theorem_a(cfg: &RunConfig, s: &Setup) -> Result<Outcome, CliError> {
    let p = single_pruned(cfg, s)?;
    let (_, t) = pruning_triple(s, p)?;
    let c = centric(s)?;
    let family = s.family(&cfg.family)?;
    let mut ledgers = Vec::new();
    let mut summary = format!("triple (H, N_F(P), N_H(P)) for P = {}\n", s.name(p));
    for (label, m) in functors_over(cfg, s, &c)? {
        let ledger = verify::theorem_a_check(&t, &family, &m, cfg.n_max, &s.limit_caps)?;
        let green = ledger.green();
        summary += &format!("{label}: {}\n", if green { "green" } else { "not green" });
        summary += &verdict_lines(&ledger.verdict);
        if let Some(checks) = &ledger.checks {
            summary += &format!(
                "    lim = {:?}, Ext(C, M) = {:?}, C = {:?}, Nat(C, M) = {}\n",
                checks.lim_dims, checks.ext_dims, checks.kernel_dims, checks.nat_dim
            );
        }
        ledgers.push(LabelledLedger { functor: label, green, ledger });
    }
    let code = worst(ledgers.iter().map(|l| {
        if l.green {
            EXIT_OK
        } else if !l.ledger.verdict.hypotheses_hold() {
            EXIT_HYPOTHESIS
        } else {
            EXIT_ALARM
        }
    }));
    let result = TheoremAResult { triple: triple_record(s, p, &t), ledgers };
    Outcome::new(cfg.command.clone() + " theorem-a", Provenance::new(cfg, s, Some(&family)), result, code == EXIT_OK, summary, code)
}

#[derive(Serialize)]
struct TheoremBResult {
    pruned: Vec<String>,
    verdict: ScenarioVerdict,
}

fn theorem_b(cfg: &RunConfig, s: &Setup) -> Result<Outcome, CliError> {
    let a = pruned_set(cfg, s)?;
    let h = s.pruned(&a)?;
    let cache = s.cache();
    let v = verify::theorem_b_scenario(&s.f, &h, &a, cfg.j_max, cfg.n_max, &cache, &s.limit_caps)?;
    let names: Vec<String> = a.iter().map(|&q| s.name(q)).collect();
    let summary = format!("pruning {}\n{}", names.join(", "), verdict_lines(&v));
    let code = verdict_code(&v);
    let family = centric_family(&s.f);
    let result = TheoremBResult { pruned: names, verdict: v };
    Outcome::new(cfg.command.clone() + " theorem-b", Provenance::new(cfg, s, Some(&family)), result, code == EXIT_OK, summary, code)
}

#[derive(Serialize)]
struct LabelledVerdict {
    #[serde(flatten)]
    functor: FunctorLabel,
    verdict: ScenarioVerdict,
}

#[derive(Serialize)]
struct TheoremCResult {
    triple: TripleRecord,
    q: String,
    realization: Option<RealizationRecord>,
    verdicts: Vec<LabelledVerdict>,
}

#[derive(Serialize)]
struct RealizationRecord {
    group_order: usize,
    generators: Vec<String>,
}

/// A group realizing `F_e` on `S'`: `S'` itself, `N_G(Q)` or `G`.
fn find_realization(s: &Setup, t: &Triple, q: SubId) -> Result<Option<Realization>, CliError> {
    let u = s.universe();
    let degree = s.group.degree();
    let widen = |perms: Vec<group::Permutation>| perms.into_iter().map(|x| x.widen(degree)).collect::<Vec<_>>();
    let small_perms = widen(u.subgroup(t.small_base()).permutations());
    let q_perms = widen(u.subgroup(q).permutations());
    let handle_in = |g: &Arc<group::FiniteGroup>, perms: &[group::Permutation]| -> Option<SubgroupHandle> {
        let members: Option<Vec<usize>> = perms.iter().map(|x| g.index_of(x)).collect();
        group::subgroup_from_members(g, &members?).ok()
    };
    let mut candidates: Vec<Arc<group::FiniteGroup>> = vec![group::group_from_generators(degree, &small_perms)?];
    if let Some(qh) = handle_in(&s.group, &q_perms) {
        let n = group::normalizer(&s.group.whole(), &qh);
        candidates.push(group::group_from_generators(degree, &n.permutations())?);
    }
    candidates.push(s.group.clone());
    for g in candidates {
        let Some(small_base) = handle_in(&g, &small_perms) else { continue };
        if small_base.order() != group::largest_power_dividing(g.order(), u.p()) {
            continue;
        }
        let realized = fusion::realize_in(&g, &small_base, u)?;
        if fusion::fusion_subsystem_eq(&realized, &t.fe) {
            return Ok(Some(Realization { group: g, small_base }));
        }
    }
    Ok(None)
}

fn theorem_c(cfg: &RunConfig, s: &Setup) -> Result<Outcome, CliError> {
    let p = single_pruned(cfg, s)?;
    let (_, t) = pruning_triple(s, p)?;
    let q = match cfg.subgroups.first() {
        Some(name) => s.resolve(name)?,
        None => p,
    };
    let family = s.family(&cfg.family)?;
    let c = centric(s)?;
    let realization = if s.seeded { None } else { find_realization(s, &t, q)? };
    let mut verdicts = Vec::new();
    let mut summary = format!("triple (H, N_F(P), N_H(P)) for P = {}, Q = {}\n", s.name(p), s.name(q));
    for (label, m) in functors_over(cfg, s, &c)? {
        let v = if family.is_certified() {
            let inputs = TheoremCInputs {
                triple: &t,
                q,
                family: &family,
                functor: &m,
                degree: label.degree().unwrap_or(0),
                realization: realization.as_ref(),
                n_max: cfg.n_max,
                caps: &s.limit_caps,
                cohomology_caps: &s.cohomology_caps,
            };
            verify::theorem_c_scenario(&inputs)?
        } else {
            let mut v = ScenarioVerdict::new();
            v.require("family closed in F", false, None);
            v
        };
        summary += &format!("{label}:\n{}", verdict_lines(&v));
        verdicts.push(LabelledVerdict { functor: label, verdict: v });
    }
    let code = worst(verdicts.iter().map(|v| verdict_code(&v.verdict)));
    let result = TheoremCResult {
        triple: triple_record(s, p, &t),
        q: s.name(q),
        realization: realization.as_ref().map(|r| RealizationRecord {
            group_order: r.group.order(),
            generators: r.group.generators().iter().map(|&x| r.group.element(x).to_string()).collect(),
        }),
        verdicts,
    };
    Outcome::new(cfg.command.clone() + " theorem-c", Provenance::new(cfg, s, Some(&family)), result, code == EXIT_OK, summary, code)
}

#[derive(Serialize)]
struct TwoEssentialResult {
    p: String,
    q: String,
    verdicts: Vec<LabelledVerdict>,
}

fn two_essential(cfg: &RunConfig, s: &Setup) -> Result<Outcome, CliError> {
    let named = s.resolve_all(&cfg.subgroups)?;
    let p = match named.first() {
        Some(&p) => p,
        None => single_pruned(cfg, s)?,
    };
    let q = named.get(1).copied().unwrap_or(p);
    let c = centric(s)?;
    let mut verdicts = Vec::new();
    let mut summary = format!("P = {}, Q = {}\n", s.name(p), s.name(q));
    for (label, m) in functors_over(cfg, s, &c)? {
        let v = verify::two_essential_scenario(&s.f, p, q, &m, cfg.n_max, &s.limit_caps)?;
        summary += &format!("{label}:\n{}", verdict_lines(&v));
        verdicts.push(LabelledVerdict { functor: label, verdict: v });
    }
    let code = worst(verdicts.iter().map(|v| verdict_code(&v.verdict)));
    let result = TwoEssentialResult { p: s.name(p), q: s.name(q), verdicts };
    Outcome::new(cfg.command.clone() + " two-essential", Provenance::new(cfg, s, Some(&c.family)), result, code == EXIT_OK, summary, code)
}

#[derive(Serialize)]
struct TreesResult {
    pruned: String,
    verdict: ScenarioVerdict,
    criteria: Vec<TreeCriteriaVerdict>,
}

fn trees(cfg: &RunConfig, s: &Setup) -> Result<Outcome, CliError> {
    let p = single_pruned(cfg, s)?;
    let family = s.family(&cfg.family)?;
    let (h, t) = pruning_triple(s, p)?;
    let v = pruning_vanishing_check(&s.f, &h, p, &family)?;
    let mut criteria = Vec::new();
    for &q in family.members() {
        criteria.push(tree_criteria_check(&t, q)?);
    }
    let mut summary = format!("pruning {}\n{}", s.name(p), verdict_lines(&v));
    let rows: Vec<Vec<String>> = criteria
        .iter()
        .map(|c| vec![c.subgroup.clone(), c.summary().to_string(), yes(c.is_tree), c.h1_dim.to_string()])
        .collect();
    summary += &table(&["subgroup", "criteria", "tree", "h1"], &rows);
    let consistent = criteria.iter().all(TreeCriteriaVerdict::consistent);
    let code = if consistent { verdict_code(&v) } else { EXIT_ALARM };
    let result = TreesResult { pruned: s.name(p), verdict: v, criteria };
    Outcome::new(cfg.command.clone() + " trees", Provenance::new(cfg, s, Some(&family)), result, code == EXIT_OK, summary, code)
}

fn sharpness(cfg: &RunConfig, s: &Setup) -> Result<Outcome, CliError> {
    let cache = s.cache();
    let report: SharpnessReport = verify::sharpness_suite(&s.f, cfg.j_max, cfg.n_max, &cache, &s.limit_caps)?;
    let mut header = vec!["degree".to_string()];
    header.extend((0..=cfg.n_max).map(|n| format!("lim^{n}")));
    header.push("stable elements".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            std::iter::once(format!("H^{}", r.degree))
                .chain(r.lims.iter().map(usize::to_string))
                .chain(std::iter::once(r.stable_elements.to_string()))
                .collect()
        })
        .collect();
    let mut summary = table(&header, &rows);
    summary += &format!("saturated: {}, sharp: {}\n", report.saturated, report.sharp());
    let code = if report.passed() {
        EXIT_OK
    } else if !report.saturated {
        EXIT_HYPOTHESIS
    } else {
        EXIT_ALARM
    };
    let family = centric_family(&s.f);
    Outcome::new(cfg.command.clone() + " sharpness", Provenance::new(cfg, s, Some(&family)), report, code == EXIT_OK, summary, code)
}
