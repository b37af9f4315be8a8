//! Saturated fusion systems over a small p-group, generated from
//! automorphism seeds on the base and on candidate essential subgroups.

use std::collections::HashSet;

use crate::group::{self, SubgroupHandle};

use super::classify::{automorphism_group, automorphism_permutation_group, has_strongly_embedded, outer_automorphism_group, AutomorphismGroup};
use super::{generate, is_saturated, FusionError, FusionSystem, Morphism, SubId, Universe};

/// Largest automorphism group whose subgroups are enumerated.
pub const DEFAULT_AUT_CAP: usize = 2000;

fn inner_maps(u: &Universe, p: SubId) -> Vec<Morphism> {
    u.subgroup(p).members().iter().map(|&x| u.conjugation(x as usize, p)).collect()
}

fn maps_of(aut: &AutomorphismGroup, h: &SubgroupHandle) -> Vec<Morphism> {
    h.members().iter().map(|&i| aut.maps[i as usize].clone()).collect()
}

fn generator_maps(aut: &AutomorphismGroup, h: &SubgroupHandle) -> Vec<Morphism> {
    h.generators().iter().map(|&i| aut.maps[i as usize].clone()).collect()
}

fn full_automorphisms(u: &Universe, p: SubId, cap: usize) -> Result<AutomorphismGroup, FusionError> {
    let all = automorphism_group(u, p);
    if all.len() > cap {
        return Err(FusionError::Inconsistent(format!(
            "Aut of {} has order {} above the enumeration cap {cap}",
            u.describe(p),
            all.len()
        )));
    }
    automorphism_permutation_group(u, p, &all)
}

/// Groups `A` with `Inn(S) ≤ A ≤ Aut(S)` and `[A : Inn(S)]` prime to p.
fn base_candidates(u: &Universe, s: SubId, cap: usize) -> Result<Vec<Vec<Morphism>>, FusionError> {
    let aut = full_automorphisms(u, s, cap)?;
    let inner = aut.subgroup_from_maps(u, &inner_maps(u, s));
    let p = u.p() as usize;
    Ok(group::enumerate_subgroups(&aut.group)
        .into_iter()
        .filter(|a| inner.is_subgroup_of(a) && (a.order() / inner.order()) % p != 0)
        .map(|a| generator_maps(&aut, &a))
        .collect())
}

/// Groups `B ≤ Aut(E)` with `Aut_S(E)` a Sylow p-subgroup and a strongly
/// p-embedded subgroup in `B / Inn(E)`.
fn essential_candidates(u: &Universe, s: SubId, e: SubId, cap: usize) -> Result<Vec<Vec<Morphism>>, FusionError> {
    let aut = full_automorphisms(u, e, cap)?;
    let n = u.normalizer(s, e);
    let from_s: Vec<Morphism> = u.subgroup(n).members().iter().map(|&x| u.conjugation(x as usize, e)).collect();
    let aut_s = aut.subgroup_from_maps(u, &from_s);
    let p = u.p();
    let mut out = Vec::new();
    for b in group::enumerate_subgroups(&aut.group) {
        if !aut_s.is_subgroup_of(&b) || group::largest_power_dividing(b.order(), p) != aut_s.order() {
            continue;
        }
        let maps = maps_of(&aut, &b);
        let local = automorphism_permutation_group(u, e, &maps)?;
        let inner = local.subgroup_from_maps(u, &inner_maps(u, e));
        let (out_group, _) = outer_automorphism_group(&local.group, &inner)?;
        if has_strongly_embedded(&out_group, p)? {
            out.push(generator_maps(&aut, &b));
        }
    }
    Ok(out)
}

/// Every saturated fusion system over `base`, each listed once.
pub fn enumerate_saturated(u: &std::sync::Arc<Universe>, base: SubId, aut_cap: usize) -> Result<Vec<FusionSystem>, FusionError> {
    let bases = base_candidates(u, base, aut_cap)?;
    // one subgroup per S-conjugacy class of proper self-centralizing subgroups
    let mut seen_classes: HashSet<SubId> = HashSet::new();
    let mut essentials: Vec<Vec<Vec<Morphism>>> = Vec::new();
    for e in u.subgroups_of(base) {
        if e == base || seen_classes.contains(&e) || !u.leq(u.centralizer(base, e), e) {
            continue;
        }
        for &x in u.subgroup(base).members() {
            seen_classes.insert(u.conjugate_subgroup(x as usize, e));
        }
        let cands = essential_candidates(u, base, e, aut_cap)?;
        if !cands.is_empty() {
            essentials.push(cands);
        }
    }
    let mut found: Vec<FusionSystem> = Vec::new();
    let mut choice = vec![0usize; essentials.len()];
    loop {
        for a in &bases {
            let mut seeds = a.clone();
            for (k, &c) in choice.iter().enumerate() {
                if c > 0 {
                    seeds.extend(essentials[k][c - 1].iter().cloned());
                }
            }
            let f = generate(u, base, &seeds)?;
            if found.iter().any(|g| g.homs == f.homs) {
                continue;
            }
            if is_saturated(&f).saturated {
                found.push(f);
            }
        }
        let mut k = 0;
        loop {
            if k == essentials.len() {
                return Ok(found);
            }
            choice[k] += 1;
            if choice[k] <= essentials[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}
