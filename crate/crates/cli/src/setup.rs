use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use fusion_limits::fusion::{self, FusionSystem, Morphism, SubId, Universe};
use fusion_limits::group::{self, presets, FiniteGroup, GroupHom, GroupSpec, Permutation, SubgroupHandle};
use fusion_limits::homalg::cohomology::CohomologyCaps;
use fusion_limits::homalg::limits::LimitCaps;
use fusion_limits::homalg::linalg::FpMatrix;
use fusion_limits::orbit::{
    centric_family, close_family, cohomology_functor, constant_functor, CohomologyCache, FunctorModule, OrbitCategory,
    SubgroupFamily,
};

use crate::config::{FamilySelector, FunctorSelector, GroupSource, RunConfig};
use crate::error::CliError;

/// Everything a command needs: the group, its Sylow subgroup and the
/// fusion system over it.
pub struct Setup {
    pub group: Arc<FiniteGroup>,
    pub f: Arc<FusionSystem>,
    pub seeded: bool,
    pub cohomology_caps: CohomologyCaps,
    pub limit_caps: LimitCaps,
}

#[derive(Deserialize)]
struct SeedFile {
    seeds: Vec<SeedMap>,
}

/// A homomorphism given on generators, in cycle notation.
#[derive(Deserialize)]
struct SeedMap {
    generators: Vec<String>,
    images: Vec<String>,
}

fn load_group(source: &GroupSource) -> Result<Arc<FiniteGroup>, CliError> {
    match source {
        GroupSource::Preset(name) => presets::parse(name).map_err(|e| CliError::Config(e.to_string())),
        GroupSource::File(path) => {
            let spec: GroupSpec = read_json(path)?;
            group::group_from_spec(&spec).map_err(|e| CliError::Config(e.to_string()))
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn prime_of(group: &FiniteGroup, prime: Option<u32>) -> Result<u32, CliError> {
    match prime {
        Some(p) => Ok(p),
        None => fusion::prime_of_p_group(group.order())
            .map_err(|_| CliError::Config(format!("the group has order {}; pass --sylow", group.order()))),
    }
}

impl Setup {
    pub fn load(cfg: &RunConfig) -> Result<Setup, CliError> {
        let group = load_group(&cfg.group)?;
        let p = prime_of(&group, cfg.prime)?;
        let sylow = group::sylow(&group.whole(), p)?;
        if sylow.order() == 1 {
            return Err(CliError::Config(format!("the group has order prime to {p}")));
        }
        let cohomology_caps = CohomologyCaps::default();
        let limit_caps = LimitCaps::default();
        let degree = match cfg.functor {
            FunctorSelector::CohomologyDegree(j) => j,
            _ => cfg.j_max,
        };
        if cfg.command != "classify" {
            cohomology_caps.check(sylow.order(), degree).map_err(|e| CliError::Config(format!("--jmax {degree}: {e}")))?;
            if cfg.n_max > limit_caps.cobar_max_degree {
                return Err(CliError::Config(format!("--nmax {} exceeds the cap of {}", cfg.n_max, limit_caps.cobar_max_degree)));
            }
        }
        let (f, seeded) = match &cfg.seed_homs {
            Some(path) => (seeded_system(&sylow, p, path)?, true),
            None => (fusion::realize(&group, &sylow)?, false),
        };
        Ok(Setup { group, f: Arc::new(f), seeded, cohomology_caps, limit_caps })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        self.f.universe()
    }

    pub fn cache(&self) -> CohomologyCache {
        CohomologyCache::new(self.universe().clone(), self.cohomology_caps.clone())
    }

    /// Cycle notation of the generators of a universe subgroup.
    pub fn generators(&self, q: SubId) -> Vec<String> {
        let u = self.universe();
        u.subgroup(q).generators().iter().map(|&x| u.group().element(x as usize).to_string()).collect()
    }

    pub fn name(&self, q: SubId) -> String {
        let label = type_label(self.universe(), q);
        let gens = self.generators(q);
        format!("{label} <{}>", gens.join(", "))
    }

    pub fn family(&self, selector: &FamilySelector) -> Result<SubgroupFamily, CliError> {
        let f = &self.f;
        match selector {
            FamilySelector::Centric => Ok(centric_family(f)),
            FamilySelector::CentricRadicalClosure => Ok(close_family(f, &f.centric_radical_subgroups()?)),
            FamilySelector::Custom(path) => {
                let names: Vec<String> = read_json(path)?;
                let ids = names.iter().map(|n| self.resolve(n)).collect::<Result<Vec<_>, _>>()?;
                Ok(SubgroupFamily::new(f, ids))
            }
        }
    }

    /// Resolve `S`, `1`, `#id`, generators in cycle notation separated by
    /// `;`, or a type label such as `V`, `C4` or `D8`.
    pub fn resolve(&self, name: &str) -> Result<SubId, CliError> {
        let u = self.universe();
        let f = &self.f;
        let name = name.trim();
        if name == "S" {
            return Ok(f.base());
        }
        if name == "1" {
            return Ok(u.trivial());
        }
        if let Some(id) = name.strip_prefix('#') {
            let id: SubId = id.parse().map_err(|_| CliError::Config(format!("bad subgroup id {name}")))?;
            if id >= u.len() || !u.leq(id, f.base()) {
                return Err(CliError::Config(format!("no subgroup {name} of the base")));
            }
            return Ok(id);
        }
        if name.contains('(') {
            let n = u.group().degree();
            let perms = name
                .split(';')
                .map(|c| group::parse_cycles(n, c))
                .collect::<Result<Vec<Permutation>, _>>()
                .map_err(|e| CliError::Config(e.to_string()))?;
            let id = u.id_of_permutations(&perms).map_err(|e| CliError::Config(e.to_string()))?;
            if !u.leq(id, f.base()) {
                return Err(CliError::Config(format!("{name} is not inside the base")));
            }
            return Ok(id);
        }
        let matching: Vec<SubId> = f.subgroups().into_iter().filter(|&q| type_label(u, q) == name).collect();
        if matching.is_empty() {
            return Err(CliError::Config(format!("no subgroup of the base has type {name}")));
        }
        let reports = fusion::classify(f)?;
        let tiers: [&dyn Fn(SubId) -> bool; 4] = [
            &|q| reports[q_index(&reports, q)].essential,
            &|q| reports[q_index(&reports, q)].centric_radical,
            &|q| reports[q_index(&reports, q)].centric,
            &|_| true,
        ];
        for tier in tiers {
            let hits: Vec<SubId> = matching.iter().copied().filter(|&q| tier(q)).collect();
            if hits.is_empty() {
                continue;
            }
            let first = hits[0];
            if hits.iter().all(|&q| f.are_conjugate(q, first)) {
                return Ok(f.fully_normalized_conjugate(first));
            }
            let names: Vec<String> = hits.iter().map(|&q| self.name(q)).collect();
            return Err(CliError::Config(format!("{name} is ambiguous: {}", names.join("; "))));
        }
        unreachable!("the last tier accepts every match")
    }

    pub fn category(&self, family: &SubgroupFamily) -> Result<Arc<OrbitCategory>, CliError> {
        Ok(OrbitCategory::build(self.f.clone(), family)?)
    }

    /// The functors selected on the command line, each with a label.
    pub fn functors(
        &self,
        selector: &FunctorSelector,
        j_max: usize,
        cat: &Arc<OrbitCategory>,
        cache: &CohomologyCache,
    ) -> Result<Vec<(FunctorLabel, FunctorModule)>, CliError> {
        let p = self.f.p();
        match selector {
            FunctorSelector::Cohomology => (0..=j_max)
                .map(|j| Ok((FunctorLabel::Cohomology(j), cohomology_functor(cat, j, cache)?)))
                .collect(),
            FunctorSelector::CohomologyDegree(j) => Ok(vec![(FunctorLabel::Cohomology(*j), cohomology_functor(cat, *j, cache)?)]),
            FunctorSelector::Constant => Ok(vec![(FunctorLabel::Constant, constant_functor(cat, p))]),
            FunctorSelector::Custom(path) => {
                let file: FunctorFile = read_json(path)?;
                if file.matrices.len() != cat.morphism_count() {
                    return Err(CliError::Config(format!(
                        "functor file has {} matrices, the category has {} morphisms",
                        file.matrices.len(),
                        cat.morphism_count()
                    )));
                }
                let mut action = Vec::with_capacity(file.matrices.len());
                for (m, rows) in file.matrices.iter().enumerate() {
                    let cols = file.dims.get(cat.morphism(m).target).copied().unwrap_or(0);
                    let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.iter().map(|&x| (x % p as u64) as u8).collect()).collect();
                    action.push(FpMatrix::from_rows(p, cols, &rows).map_err(|e| CliError::Config(e.to_string()))?);
                }
                let module = FunctorModule::new(cat.clone(), p, file.dims, action).map_err(|e| CliError::Config(e.to_string()))?;
                module.check_functoriality().map_err(|e| CliError::Config(e.to_string()))?;
                Ok(vec![(FunctorLabel::Custom, module)])
            }
        }
    }

    /// `H = ⟨Aut_F(Q) : Q centric-radical, not F-conjugate into A⟩`.
    pub fn pruned(&self, a: &[SubId]) -> Result<Arc<FusionSystem>, CliError> {
        let f = &self.f;
        let seeds: Vec<Morphism> = f
            .centric_radical_subgroups()?
            .into_iter()
            .filter(|&q| !a.iter().any(|&p| f.are_conjugate(p, q)))
            .flat_map(|q| f.aut(q))
            .collect();
        Ok(Arc::new(fusion::generate(self.universe(), f.base(), &seeds)?))
    }

    /// Representatives of the essential classes, fully normalized.
    pub fn essentials(&self) -> Result<Vec<SubId>, CliError> {
        let f = &self.f;
        let mut out: Vec<SubId> = Vec::new();
        for r in fusion::classify(f)? {
            if r.essential && !out.iter().any(|&q| f.are_conjugate(q, r.subgroup)) {
                out.push(f.fully_normalized_conjugate(r.subgroup));
            }
        }
        Ok(out)
    }

    pub fn resolve_all(&self, names: &[String]) -> Result<Vec<SubId>, CliError> {
        names.iter().map(|n| self.resolve(n)).collect()
    }
}

fn q_index(reports: &[fusion::SubgroupReport], q: SubId) -> usize {
    reports.iter().position(|r| r.subgroup == q).expect("classified")
}

#[derive(Deserialize)]
struct FunctorFile {
    dims: Vec<usize>,
    /// One row-major matrix per morphism of the orbit category.
    matrices: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "functor", content = "degree", rename_all = "kebab-case")]
pub enum FunctorLabel {
    Cohomology(usize),
    Constant,
    Custom,
}

impl FunctorLabel {
    pub fn degree(&self) -> Option<usize> {
        match self {
            FunctorLabel::Cohomology(j) => Some(*j),
            _ => None,
        }
    }
}

impl std::fmt::Display for FunctorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FunctorLabel::Cohomology(j) => write!(f, "H^{j}"),
            FunctorLabel::Constant => write!(f, "F_p"),
            FunctorLabel::Custom => write!(f, "custom"),
        }
    }
}

/// Isomorphism type of a small p-group: `1`, `C4`, `V`, `C4xC2`, `C2^3`,
/// `D8`, `Q8`, or `G{order}` otherwise.
pub fn type_label(u: &Universe, q: SubId) -> String {
    let sub = u.subgroup(q);
    let g = u.group();
    let n = sub.order();
    if n == 1 {
        return "1".into();
    }
    let p = u.p() as usize;
    let orders: Vec<usize> = sub.members().iter().map(|&x| g.element_order(x as usize) as usize).collect();
    if sub.is_abelian() {
        let mut invariants = abelian_invariants(&orders, p);
        invariants.sort_unstable_by(|a, b| b.cmp(a));
        if invariants.len() == 1 {
            return format!("C{n}");
        }
        if invariants.iter().all(|&e| e == p) {
            return if p == 2 && invariants.len() == 2 { "V".into() } else { format!("C{p}^{}", invariants.len()) };
        }
        return invariants.iter().map(|e| format!("C{e}")).collect::<Vec<_>>().join("x");
    }
    if n == 8 {
        let involutions = orders.iter().filter(|&&o| o == 2).count();
        return if involutions == 5 { "D8".into() } else { "Q8".into() };
    }
    format!("G{n}")
}

/// Cyclic factor orders of an abelian p-group from its element orders.
fn abelian_invariants(orders: &[usize], p: usize) -> Vec<usize> {
    // r_k = #{factors of order ≥ p^k} = log_p |Ω_k| − log_p |Ω_{k−1}|
    let log = |mut x: usize| {
        let mut k = 0;
        while x > 1 {
            x /= p;
            k += 1;
        }
        k
    };
    let omega = |pk: usize| orders.iter().filter(|&&o| pk.is_multiple_of(o)).count();
    let mut at_least = Vec::new();
    let mut pk = 1;
    loop {
        let r = log(omega(pk * p)) - log(omega(pk));
        if r == 0 {
            break;
        }
        at_least.push(r);
        pk *= p;
    }
    let mut out = Vec::new();
    for (k, &r) in at_least.iter().enumerate() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        out.extend(std::iter::repeat_n(p.pow(k as u32 + 1), r - next));
    }
    out
}

/// The fusion system over `sylow` generated by the seed maps in `path`.
fn seeded_system(sylow: &SubgroupHandle, p: u32, path: &Path) -> Result<FusionSystem, CliError> {
    let file: SeedFile = read_json(path)?;
    let u = Universe::from_subgroup(sylow, p)?;
    let base = u.id_of_permutations(&sylow.permutations())?;
    let ug = u.group();
    let n = ug.degree();
    let element = |c: &str| -> Result<usize, CliError> {
        let perm = group::parse_cycles(n, c).map_err(|e| CliError::Config(e.to_string()))?;
        ug.index_of(&perm).ok_or_else(|| CliError::Config(format!("{c} is outside the Sylow subgroup")))
    };
    let mut seeds = Vec::with_capacity(file.seeds.len());
    for seed in &file.seeds {
        if seed.generators.len() != seed.images.len() {
            return Err(CliError::Config("a seed needs one image per generator".into()));
        }
        let gens = seed.generators.iter().map(|c| element(c)).collect::<Result<Vec<_>, _>>()?;
        let imgs = seed.images.iter().map(|c| element(c)).collect::<Result<Vec<_>, _>>()?;
        let domain = u.subgroup(u.generated(&gens)).clone();
        let pairs: Vec<(usize, usize)> = gens.into_iter().zip(imgs).collect();
        let hom = GroupHom::from_generator_images(&domain, u.subgroup(base), &pairs).map_err(|e| CliError::Config(e.to_string()))?;
        seeds.push(u.from_group_hom(&hom).map_err(|e| CliError::Config(e.to_string()))?);
    }
    Ok(fusion::generate(&u, base, &seeds)?)
}
