use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "fusion-limits", version, about = "Fusion systems over finite p-groups and higher limits over their orbit categories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify the subgroups of the base: centric, radical, essential.
    Classify(Common),
    /// Table of lim^n of the selected functor over the orbit category.
    Limits(Common),
    /// Check one of the scenario harnesses and write its verdict.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        #[command(flatten)]
        common: Common,
        /// Essential subgroup to prune; repeat for several.
        #[arg(long = "prune", value_name = "NAME")]
        prune: Vec<String>,
        /// Scenario subgroup (Q for theorem-c, P then Q for two-essential).
        #[arg(long = "subgroup", value_name = "NAME")]
        subgroups: Vec<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// `preset:NAME:ARGS` or a path to a JSON group `{"degree", "generators"}`.
    #[arg(long)]
    pub group: String,
    /// The prime; defaults to the prime of a p-group.
    #[arg(long)]
    pub sylow: Option<u32>,
    /// `centric`, `centric-radical-closure` or a JSON list of subgroup names.
    #[arg(long, default_value = "centric")]
    pub family: String,
    /// `cohomology`, `cohomology:J`, `constant` or a JSON functor file.
    #[arg(long, default_value = "cohomology")]
    pub functor: String,
    #[arg(long, default_value_t = 3)]
    pub jmax: usize,
    #[arg(long, default_value_t = 3)]
    pub nmax: usize,
    /// Where to write the JSON report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed morphisms generating the fusion system instead of the group.
    #[arg(long = "seed-homs", value_name = "PATH")]
    pub seed_homs: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyKind {
    TheoremA,
    TheoremB,
    TheoremC,
    TwoEssential,
    Trees,
    Sharpness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum GroupSource {
    Preset(String),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum FamilySelector {
    Centric,
    CentricRadicalClosure,
    Custom(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum FunctorSelector {
    /// Every degree `0..=jmax`.
    Cohomology,
    CohomologyDegree(usize),
    Constant,
    Custom(PathBuf),
}

/// A validated command line.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub group: GroupSource,
    pub prime: Option<u32>,
    pub family: FamilySelector,
    pub functor: FunctorSelector,
    pub j_max: usize,
    pub n_max: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub seed_homs: Option<PathBuf>,
    pub verify: Option<VerifyKind>,
    pub prune: Vec<String>,
    pub subgroups: Vec<String>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig, CliError> {
        let (command, common, verify, prune, subgroups) = match cli.command {
            Command::Classify(c) => ("classify", c, None, Vec::new(), Vec::new()),
            Command::Limits(c) => ("limits", c, None, Vec::new(), Vec::new()),
            Command::Verify { kind, common, prune, subgroups } => ("verify", common, Some(kind), prune, subgroups),
        };
        if common.nmax == 0 {
            return Err(CliError::Config("--nmax must be positive".into()));
        }
        if let Some(p) = common.sylow {
            if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
                return Err(CliError::Config(format!("--sylow {p} is not a prime")));
            }
        }
        Ok(RunConfig {
            command: command.to_string(),
            group: parse_group(&common.group)?,
            prime: common.sylow,
            family: parse_family(&common.family),
            functor: parse_functor(&common.functor)?,
            j_max: common.jmax,
            n_max: common.nmax,
            out: common.out,
            seed_homs: common.seed_homs,
            verify,
            prune,
            subgroups,
        })
    }
}

fn parse_group(s: &str) -> Result<GroupSource, CliError> {
    if let Some(name) = s.strip_prefix("preset:") {
        if name.is_empty() {
            return Err(CliError::Config("empty preset name".into()));
        }
        return Ok(GroupSource::Preset(name.to_string()));
    }
    let path = PathBuf::from(s);
    if !path.is_file() {
        return Err(CliError::Config(format!("group source {s} is neither a preset nor a file")));
    }
    Ok(GroupSource::File(path))
}

fn parse_family(s: &str) -> FamilySelector {
    match s {
        "centric" => FamilySelector::Centric,
        "centric-radical-closure" => FamilySelector::CentricRadicalClosure,
        other => FamilySelector::Custom(PathBuf::from(other)),
    }
}

fn parse_functor(s: &str) -> Result<FunctorSelector, CliError> {
    match s {
        "cohomology" => Ok(FunctorSelector::Cohomology),
        "constant" => Ok(FunctorSelector::Constant),
        other => match other.strip_prefix("cohomology:") {
            Some(j) => j
                .parse()
                .map(FunctorSelector::CohomologyDegree)
                .map_err(|_| CliError::Config(format!("bad cohomology degree in {other}"))),
            None if PathBuf::from(other).is_file() => Ok(FunctorSelector::Custom(PathBuf::from(other))),
            None => Err(CliError::Config(format!("unknown functor selector {other}"))),
        },
    }
}
