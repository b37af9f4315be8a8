//! Theorem-level harnesses: identifications of higher limits through the
//! complex `CX_1 → CX_0`, scenario checkers that record every hypothesis
//! before testing a conclusion, and sharpness tables.

use std::sync::Arc;

use thiserror::Error;

use crate::fusion::{FusionError, FusionSystem};
use crate::group::GroupError;
use crate::homalg::limits::{higher_limits, Engine, LimitCaps};
use crate::homalg::linalg::{Coordinates, FpMatrix, LinalgError};
use crate::homalg::HomalgError;
use crate::orbit::{restrict_functor, FunctorModule, NaturalTransformation, OrbitCategory, OrbitError, SubgroupFamily};
use crate::repgraph::RepGraphError;

mod gamma;
mod scenarios;
mod sharpness;
mod theorem_a;

pub use gamma::{
    evaluate_theorem_c, gamma_map, splitting_check, theorem_c_scenario, transfer_identity, GammaMap, GammaObject, GammaReport,
    Realization, TheoremCInputs, TransferReport,
};
pub use scenarios::{theorem_b_scenario, two_essential_scenario};
pub use sharpness::{sharpness_suite, stable_elements_dim, SharpnessReport, SharpnessRow};
pub use theorem_a::{
    limits_of_subsystem, limone_identification, theorem_a_check, ExactnessFlags, LimOneReport, ShapiroReport, TheoremAChecks,
    TheoremALedger,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Homalg(#[from] HomalgError),
    #[error(transparent)]
    RepGraph(#[from] RepGraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
    /// A computed identity failed; this points at a bug or a false claim.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl From<LinalgError> for VerifyError {
    fn from(e: LinalgError) -> Self {
        VerifyError::Homalg(e.into())
    }
}

pub type Result<T> = std::result::Result<T, VerifyError>;

/// `O^C(H)` for a subsystem `H`, on the members of `C` inside its base.
pub(crate) fn sub_category(h: &Arc<FusionSystem>, family: &SubgroupFamily) -> Result<Arc<OrbitCategory>> {
    Ok(OrbitCategory::build(h.clone(), &family.restricted_to(h))?)
}

/// `lim^n` over `O^C(H)` of `M↓` for `n = 0..=n_max`.
pub(crate) fn subsystem_limits(
    cat: &Arc<OrbitCategory>,
    h: &Arc<FusionSystem>,
    m: &FunctorModule,
    n_max: usize,
    caps: &LimitCaps,
) -> Result<Vec<usize>> {
    let sub = sub_category(h, cat.family())?;
    let r = restrict_functor(m, &sub)?;
    Ok(higher_limits(&r, n_max, Engine::Auto, caps)?.dims)
}

/// Matrix of `β ↦ β ∘ g` from `Nat(B, M)` to `Nat(A, M)` in the given bases.
pub(crate) fn precomposition_matrix(
    p: u32,
    source_basis: &[NaturalTransformation],
    target_basis: &[NaturalTransformation],
    g: &NaturalTransformation,
) -> Result<FpMatrix> {
    let flat: Vec<Vec<u8>> = target_basis.iter().map(NaturalTransformation::flatten).collect();
    let width = flat.first().map_or(0, Vec::len);
    let coords = Coordinates::new(p, width, &flat);
    let mut columns = Vec::with_capacity(source_basis.len());
    for beta in source_basis {
        let image = beta.after(g)?.flatten();
        let c = if target_basis.is_empty() {
            if image.iter().any(|&x| x != 0) {
                None
            } else {
                Some(Vec::new())
            }
        } else {
            coords.of(&image)
        };
        columns.push(c.ok_or_else(|| VerifyError::Invariant("precomposite is not natural".into()))?);
    }
    Ok(FpMatrix::from_columns(p, target_basis.len(), &columns)?)
}

/// Whether every centric-radical subgroup of `e` lies in the family.
pub(crate) fn centric_radicals_in(e: &FusionSystem, family: &SubgroupFamily) -> Result<(bool, Option<String>)> {
    let missing: Vec<String> =
        e.centric_radical_subgroups()?.into_iter().filter(|&p| !family.contains(p)).map(|p| e.universe().describe(p)).collect();
    Ok((missing.is_empty(), (!missing.is_empty()).then(|| format!("missing {}", missing.join(", ")))))
}

/// The members of `family`, as readable names.
pub(crate) fn describe_family(f: &FusionSystem, family: &SubgroupFamily) -> Vec<String> {
    family.members().iter().map(|&q| f.universe().describe(q)).collect()
}

#[cfg(test)]
mod tests;
