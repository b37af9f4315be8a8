use std::io::Write;

use serde::Serialize;

use fusion_limits::group::GroupSpec;
use fusion_limits::orbit::SubgroupFamily;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::setup::Setup;

pub const SCHEMA: &str = "fusion-limits/1";

#[derive(Serialize)]
pub struct CapsRecord {
    pub cohomology_degree_by_order: Vec<(usize, usize)>,
    pub cohomology_max_columns: usize,
    pub cobar_max_degree: usize,
    pub cobar_max_columns: usize,
    pub resolution_max_dim: usize,
}

/// What a report was computed from.
#[derive(Serialize)]
pub struct Provenance {
    pub config: RunConfig,
    pub group: GroupSpec,
    pub group_order: usize,
    pub p: u32,
    pub sylow_generators: Vec<String>,
    pub sylow_order: usize,
    pub fusion: &'static str,
    pub fusion_morphisms: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub family: Vec<String>,
    pub caps: CapsRecord,
}

impl Provenance {
    pub fn new(cfg: &RunConfig, s: &Setup, family: Option<&SubgroupFamily>) -> Provenance {
        let f = &s.f;
        Provenance {
            config: cfg.clone(),
            group: s.group.spec(),
            group_order: s.group.order(),
            p: f.p(),
            sylow_generators: s.generators(f.base()),
            sylow_order: f.base_order(),
            fusion: if s.seeded { "generated from seeds" } else { "realized by the group" },
            fusion_morphisms: f.morphism_count(),
            family: family.map(|fam| fam.members().iter().map(|&q| s.name(q)).collect()).unwrap_or_default(),
            caps: CapsRecord {
                cohomology_degree_by_order: s.cohomology_caps.by_order.clone(),
                cohomology_max_columns: s.cohomology_caps.max_columns,
                cobar_max_degree: s.limit_caps.cobar_max_degree,
                cobar_max_columns: s.limit_caps.cobar_max_columns,
                resolution_max_dim: s.limit_caps.resolution_max_dim,
            },
        }
    }
}

#[derive(Serialize)]
pub struct Report<T: Serialize> {
    pub schema: &'static str,
    pub command: String,
    pub passed: bool,
    pub provenance: Provenance,
    pub result: T,
}

/// A finished command: its printable summary, its JSON and its exit code.
pub struct Outcome {
    pub summary: String,
    pub json: String,
    pub exit_code: i32,
}

impl Outcome {
    pub fn new<T: Serialize>(command: String, provenance: Provenance, result: T, passed: bool, summary: String, exit_code: i32) -> Result<Outcome, CliError> {
        let report = Report { schema: SCHEMA, command, passed, provenance, result };
        let mut json = serde_json::to_string_pretty(&report)?;
        json.push('\n');
        Ok(Outcome { summary, json, exit_code })
    }

    pub fn emit(&self, cfg: &RunConfig) -> Result<(), CliError> {
        if let Some(path) = &cfg.out {
            std::fs::write(path, &self.json)?;
        }
        let mut out = std::io::stdout().lock();
        out.write_all(self.summary.as_bytes())?;
        Ok(())
    }
}

/// Left-aligned text table.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(header.to_vec());
    for row in rows {
        s += &line(row.iter().map(String::as_str).collect());
    }
    s
}
