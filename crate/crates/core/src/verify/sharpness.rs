//! Tables of `lim^n H^j(−; F_p)` over the centric orbit category, with
//! the degree-zero row checked against stable elements.

use std::sync::Arc;

use serde::Serialize;

use crate::fusion::{is_saturated, FusionSystem};
use crate::homalg::limits::{higher_limits, Engine, LimitCaps};
use crate::homalg::linalg::{sub_mod, RowReducer};
use crate::orbit::{centric_family, cohomology_functor, CohomologyCache, OrbitCategory};

use super::{Result, VerifyError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharpnessRow {
    pub degree: usize,
    /// `lim^n H^j` for `n = 0..=n_max`.
    pub lims: Vec<usize>,
    pub stable_elements: usize,
}

impl SharpnessRow {
    pub fn vanishes(&self) -> bool {
        self.lims.iter().skip(1).all(|&d| d == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharpnessReport {
    pub p: u32,
    pub base_order: usize,
    pub saturated: bool,
    pub j_max: usize,
    pub n_max: usize,
    pub rows: Vec<SharpnessRow>,
}

impl SharpnessReport {
    /// Every `lim^n` with `n ≥ 1` in the table is zero.
    pub fn sharp(&self) -> bool {
        self.rows.iter().all(SharpnessRow::vanishes)
    }

    /// The degree-zero column agrees with the stable elements.
    pub fn stable_elements_agree(&self) -> bool {
        self.rows.iter().all(|r| r.lims.first() == Some(&r.stable_elements))
    }

    pub fn passed(&self) -> bool {
        self.saturated && self.sharp() && self.stable_elements_agree()
    }
}

/// `dim` of the classes `x ∈ H^j(S)` with `φ*x = x|_P` for every `P ≤ S`
/// and every `φ ∈ Hom_F(P, S)`.
pub fn stable_elements_dim(f: &FusionSystem, degree: usize, cache: &CohomologyCache) -> Result<usize> {
    let u = f.universe();
    if **cache.universe() != **u {
        return Err(VerifyError::Invariant("cohomology cache over another universe".into()));
    }
    let s = f.base();
    let p = f.p();
    let width = cache.get(s, degree)?.dim();
    let mut r = RowReducer::new(p, width);
    for q in f.subgroups() {
        let incl = cache.induced_map(&u.restrict(&u.identity(s), q), s, degree)?;
        for phi in f.homs_to_base(q) {
            let a = cache.induced_map(phi, s, degree)?;
            for i in 0..a.rows() {
                r.insert((0..width).map(|c| sub_mod(a.get(i, c), incl.get(i, c), p)).collect());
            }
        }
    }
    Ok(width - r.rank())
}

/// `lim^n H^j` over `O(F^c)` for `j ≤ j_max` and `n ≤ n_max`.
pub fn sharpness_suite(
    f: &Arc<FusionSystem>,
    j_max: usize,
    n_max: usize,
    cache: &CohomologyCache,
    caps: &LimitCaps,
) -> Result<SharpnessReport> {
    let cat = OrbitCategory::build(f.clone(), &centric_family(f))?;
    let mut rows = Vec::with_capacity(j_max + 1);
    for degree in 0..=j_max {
        let m = cohomology_functor(&cat, degree, cache)?;
        let lims = higher_limits(&m, n_max, Engine::Auto, caps)?.dims;
        rows.push(SharpnessRow { degree, lims, stable_elements: stable_elements_dim(f, degree, cache)? });
    }
    Ok(SharpnessReport { p: f.p(), base_order: f.base_order(), saturated: is_saturated(f).saturated, j_max, n_max, rows })
}
