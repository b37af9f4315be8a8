#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use fusion_limits::fusion::{automorphism_group, generate, FusionSystem, Morphism, SubId, Triple, Universe};
use fusion_limits::group::{presets, FiniteGroup};

/// p-groups of order at most 16, with their prime.
pub fn small_p_groups() -> Vec<(&'static str, Arc<FiniteGroup>, u32)> {
    vec![
        ("C2", presets::cyclic(2).unwrap(), 2),
        ("C3", presets::cyclic(3).unwrap(), 3),
        ("C4", presets::cyclic(4).unwrap(), 2),
        ("V", presets::elementary_abelian(2, 2).unwrap(), 2),
        ("C8", presets::cyclic(8).unwrap(), 2),
        ("C4xC2", presets::abelian(&[4, 2]).unwrap(), 2),
        ("C2^3", presets::elementary_abelian(2, 3).unwrap(), 2),
        ("D8", presets::dihedral(8).unwrap(), 2),
        ("Q8", presets::quaternion8().unwrap(), 2),
        ("C9", presets::cyclic(9).unwrap(), 3),
        ("C3xC3", presets::elementary_abelian(3, 2).unwrap(), 3),
        ("C16", presets::cyclic(16).unwrap(), 2),
        ("C4xC4", presets::abelian(&[4, 4]).unwrap(), 2),
        ("C8xC2", presets::abelian(&[8, 2]).unwrap(), 2),
        ("D16", presets::dihedral(16).unwrap(), 2),
    ]
}

/// Groups with a non-normal or non-trivially fused Sylow subgroup.
pub fn realizable_fixtures() -> Vec<(&'static str, Arc<FiniteGroup>, u32)> {
    vec![
        ("S3", presets::symmetric(3).unwrap(), 2),
        ("S3", presets::symmetric(3).unwrap(), 3),
        ("A4", presets::alternating(4).unwrap(), 2),
        ("A4", presets::alternating(4).unwrap(), 3),
        ("S4", presets::symmetric(4).unwrap(), 2),
        ("S4", presets::symmetric(4).unwrap(), 3),
        ("D12", presets::dihedral(12).unwrap(), 2),
        ("D24", presets::dihedral(24).unwrap(), 2),
        ("A5", presets::alternating(5).unwrap(), 2),
        ("A5", presets::alternating(5).unwrap(), 5),
    ]
}

/// A random automorphism of a random subgroup of `within`.
pub fn random_automorphism(rng: &mut ChaCha8Rng, u: &Universe, within: SubId) -> Option<Morphism> {
    let subs: Vec<SubId> = u.subgroups_of(within).into_iter().filter(|&q| u.order(q) > 1).collect();
    let &q = subs.choose(rng)?;
    let auts = automorphism_group(u, q);
    auts.choose(rng).cloned()
}

pub fn random_seeds(rng: &mut ChaCha8Rng, u: &Universe, within: SubId, max: usize) -> Vec<Morphism> {
    let k = rng.gen_range(0..=max);
    (0..k).filter_map(|_| random_automorphism(rng, u, within)).collect()
}

/// A fusion system over the whole universe generated by random seeds.
pub fn random_system(rng: &mut ChaCha8Rng, u: &Arc<Universe>, max_seeds: usize) -> FusionSystem {
    let seeds = random_seeds(rng, u, u.whole(), max_seeds);
    generate(u, u.whole(), &seeds).unwrap()
}

/// A random triple over the whole universe: `F_e` from seeds inside a
/// random `S'`, and `F_1`, `F_2` generated by those seeds and more.
pub fn random_triple(rng: &mut ChaCha8Rng, u: &Arc<Universe>) -> Triple {
    let s = u.whole();
    let candidates = u.subgroups_of(s);
    let small = *candidates.choose(rng).unwrap();
    let shared = random_seeds(rng, u, small, 1);
    let mut one = shared.clone();
    one.extend(random_seeds(rng, u, s, 2));
    let mut two = shared.clone();
    two.extend(random_seeds(rng, u, small, 2));
    let fe = Arc::new(generate(u, small, &shared).unwrap());
    let f1 = Arc::new(generate(u, s, &one).unwrap());
    let f2 = Arc::new(generate(u, small, &two).unwrap());
    Triple::new(f1, f2, fe).unwrap()
}
