use std::collections::BTreeSet;

use fusion_limits::group::{enumerate_subgroups, presets, FiniteGroup};

mod common;

/// Every subset of the group closed under multiplication, as sorted member
/// lists.
fn closed_subsets(g: &FiniteGroup) -> BTreeSet<Vec<u32>> {
    let n = g.order();
    let identity = (0..n).find(|&i| g.element(i).is_identity()).unwrap();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        if mask & (1 << identity) == 0 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let closed = members.iter().all(|&a| members.iter().all(|&b| mask & (1 << g.mul(a, b)) != 0));
        if closed {
            out.insert(members.iter().map(|&i| i as u32).collect());
        }
    }
    out
}

#[test]
fn enumeration_matches_the_subset_oracle() {
    let mut groups: Vec<_> = common::small_p_groups().into_iter().map(|(name, g, _)| (name, g)).collect();
    groups.push(("S3", presets::symmetric(3).unwrap()));
    groups.push(("D12", presets::dihedral(12).unwrap()));
    groups.push(("A4", presets::alternating(4).unwrap()));
    for (name, g) in groups {
        let found: BTreeSet<Vec<u32>> = enumerate_subgroups(&g).iter().map(|h| h.members().to_vec()).collect();
        assert_eq!(found, closed_subsets(&g), "{name}");
    }
}
