//! The Sylow and extension axioms.

use std::collections::HashSet;

use serde::Serialize;

use super::{FusionSystem, Morphism, SubId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum SaturationWitness {
    /// `Aut_S(S)` is not a Sylow subgroup of `Aut_F(S)`.
    Sylow { aut_order: usize, inner_order: usize },
    /// `morphism` has fully normalized image but no extension to `n_phi`.
    Extension {
        domain: SubId,
        #[serde(skip)]
        morphism: Morphism,
        images: Vec<u32>,
        n_phi: SubId,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationVerdict {
    pub saturated: bool,
    pub witness: Option<SaturationWitness>,
}

/// `N_φ`: elements of `N_S(P)` whose conjugation action is carried by `φ`
/// to conjugation by some element of `N_S(φ(P))`.
pub fn extension_control(f: &FusionSystem, phi: &Morphism) -> SubId {
    let u = f.universe();
    let p = phi.domain;
    let q = phi.image;
    let target: HashSet<Morphism> = f.aut_base(q).into_iter().collect();
    let inv = u.inverse(phi);
    let mut elems = Vec::new();
    for &y in u.subgroup(f.normalizer(p)).members() {
        let cy = u.conjugation(y as usize, p);
        let conj = u.compose(phi, &u.compose(&cy, &inv));
        if target.contains(&conj) {
            elems.push(y as usize);
        }
    }
    u.generated(&elems)
}

pub fn is_saturated(f: &FusionSystem) -> SaturationVerdict {
    let u = f.universe();
    let s = f.base();
    let aut_order = f.aut(s).len();
    let inner_order = f.aut_base(s).len();
    let index = aut_order / inner_order;
    if index.is_multiple_of(u.p() as usize) {
        return SaturationVerdict { saturated: false, witness: Some(SaturationWitness::Sylow { aut_order, inner_order }) };
    }
    for p in f.subgroups() {
        for phi in f.homs_to_base(p) {
            if !f.is_fully_normalized(phi.image) {
                continue;
            }
            let n = extension_control(f, phi);
            if n == p {
                continue;
            }
            let extends = f.homs_to_base(n).iter().any(|hat| u.restrict(hat, p) == *phi);
            if !extends {
                return SaturationVerdict {
                    saturated: false,
                    witness: Some(SaturationWitness::Extension {
                        domain: p,
                        morphism: phi.clone(),
                        images: phi.images.to_vec(),
                        n_phi: n,
                    }),
                };
            }
        }
    }
    SaturationVerdict { saturated: true, witness: None }
}
