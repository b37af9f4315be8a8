//! Two fusion systems glued along a common subsystem.

use std::sync::Arc;

use super::{fusion_subsystem_eq, fusion_subsystem_leq, join, FusionError, FusionSystem};

/// `F_1` over `S`, `F_2` and `F_e` over `S' ≤ S` with `F_e ⊆ F_1 ∩ F_2`,
/// and their join `F = ⟨F_1, F_2⟩` over `S`.
#[derive(Clone, Debug)]
pub struct Triple {
    pub f1: Arc<FusionSystem>,
    pub f2: Arc<FusionSystem>,
    pub fe: Arc<FusionSystem>,
    pub f: Arc<FusionSystem>,
}

impl Triple {
    pub fn new(f1: Arc<FusionSystem>, f2: Arc<FusionSystem>, fe: Arc<FusionSystem>) -> Result<Triple, FusionError> {
        let f = Arc::new(join(&f1, &f2)?);
        Triple::with_join(f1, f2, fe, f)
    }

    /// Use a precomputed join, which is checked against `⟨F_1, F_2⟩`.
    pub fn with_join(
        f1: Arc<FusionSystem>,
        f2: Arc<FusionSystem>,
        fe: Arc<FusionSystem>,
        f: Arc<FusionSystem>,
    ) -> Result<Triple, FusionError> {
        let u = f1.universe();
        if **u != **f2.universe() || **u != **fe.universe() || **u != **f.universe() {
            return Err(FusionError::UniverseMismatch);
        }
        if f2.base() != fe.base() || !u.leq(f2.base(), f1.base()) || f.base() != f1.base() {
            return Err(FusionError::Inconsistent("bases must satisfy S' = base(F_2) = base(F_e) ≤ S = base(F_1)".into()));
        }
        if !fusion_subsystem_leq(&fe, &f1) || !fusion_subsystem_leq(&fe, &f2) {
            return Err(FusionError::Inconsistent("F_e is not contained in both F_1 and F_2".into()));
        }
        if !fusion_subsystem_leq(&f1, &f) || !fusion_subsystem_leq(&f2, &f) {
            return Err(FusionError::Inconsistent("the join does not contain both members".into()));
        }
        let t = Triple { f1, f2, fe, f };
        Ok(t)
    }

    /// Whether the stored join equals `⟨F_1, F_2⟩`.
    pub fn join_is_generated(&self) -> Result<bool, FusionError> {
        Ok(fusion_subsystem_eq(&join(&self.f1, &self.f2)?, &self.f))
    }

    /// `S'`.
    pub fn small_base(&self) -> usize {
        self.f2.base()
    }

    pub fn members(&self) -> [(&'static str, &Arc<FusionSystem>); 3] {
        [("F1", &self.f1), ("F2", &self.f2), ("Fe", &self.fe)]
    }
}
