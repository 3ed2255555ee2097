use std::collections::BTreeSet;

use proptest::prelude::*;
use rfsm::{ApproximationSpace, DefinableSet, StateSubset};

/// Restricted growth strings of length `n` with at most `k` blocks.
fn partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for label in 0..=next.min(k - 1) {
            prefix.push(label);
            go(prefix, n, k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, k, &mut out);
    out
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("q{i}")).collect()
}

fn space_from(labels: &[usize]) -> ApproximationSpace {
    ApproximationSpace::from_labels(&names(labels.len()), labels).unwrap()
}

fn block_subset(space: &ApproximationSpace, mask: usize) -> DefinableSet {
    DefinableSet::from_blocks(
        space,
        (0..space.block_count()).filter(|b| mask >> b & 1 == 1),
    )
    .unwrap()
}

#[test]
fn partition_enumeration_counts() {
    // Stirling numbers S(6,1) + S(6,2) + S(6,3).
    assert_eq!(partitions(6, 3).len(), 1 + 31 + 90);
    assert_eq!(partitions(4, 4).len(), 15);
}

#[test]
fn realizability_matches_brute_force() {
    let mut checked = 0usize;
    let mut disagreements = Vec::new();
    for n in 1..=6 {
        for labels in partitions(n, 3) {
            let space = space_from(&labels);
            let reachable: BTreeSet<(Vec<usize>, Vec<usize>)> = (0u64..1 << n)
                .map(|mask| {
                    let rs = space
                        .approximate(&StateSubset::from_mask(&space, mask))
                        .unwrap();
                    (
                        rs.lower.block_ids().collect(),
                        rs.upper.block_ids().collect(),
                    )
                })
                .collect();
            let nb = space.block_count();
            for l in 0..1usize << nb {
                for u in 0..1usize << nb {
                    let (lower, upper) = (block_subset(&space, l), block_subset(&space, u));
                    let claimed = space.is_realizable(&lower, &upper).unwrap();
                    let actual = reachable
                        .contains(&(lower.block_ids().collect(), upper.block_ids().collect()));
                    checked += 1;
                    if claimed != actual {
                        disagreements.push((labels.clone(), l, u));
                    }
                }
            }
        }
    }
    assert!(checked > 5000);
    assert!(disagreements.is_empty(), "{disagreements:?}");
}

fn space_and_subset() -> impl Strategy<Value = (Vec<usize>, u64)> {
    (1usize..=7).prop_flat_map(|n| (proptest::collection::vec(0usize..n, n), 0u64..1 << n))
}

proptest! {
    #[test]
    fn approximations_sandwich_the_subset((labels, mask) in space_and_subset()) {
        let space = space_from(&labels);
        let a = StateSubset::from_mask(&space, mask);
        let rs = space.approximate(&a).unwrap();
        let lower = rs.lower.to_subset(&space);
        let upper = rs.upper.to_subset(&space);
        for s in 0..space.len() {
            if lower.contains(s) { prop_assert!(a.contains(s)); }
            if a.contains(s) { prop_assert!(upper.contains(s)); }
        }
        prop_assert!(rs.lower.is_subset(&rs.upper));
        prop_assert!(rs.is_realizable_in(&space).unwrap());
        prop_assert_eq!(space.is_definable(&a).unwrap(), rs.lower == rs.upper);
    }

    #[test]
    fn approximations_are_idempotent_on_definable_sets((labels, mask) in space_and_subset()) {
        let space = space_from(&labels);
        let rs = space.approximate(&StateSubset::from_mask(&space, mask)).unwrap();
        for d in [&rs.lower, &rs.upper] {
            let again = space.approximate(&d.to_subset(&space)).unwrap();
            prop_assert_eq!(&again.lower, d);
            prop_assert_eq!(&again.upper, d);
        }
    }

    #[test]
    fn product_partition_is_pairwise_relation(
        (l1, _) in space_and_subset(),
        (l2, _) in space_and_subset(),
    ) {
        let (s1, s2) = (space_from(&l1), space_from(&l2));
        let p = s1.product_partition(&s2);
        prop_assert_eq!(p.len(), s1.len() * s2.len());
        prop_assert_eq!(p.block_count(), s1.block_count() * s2.block_count());
        let n2 = s2.len();
        for a in 0..p.len() {
            for b in 0..p.len() {
                let expect = s1.related(a / n2, b / n2) && s2.related(a % n2, b % n2);
                prop_assert_eq!(p.related(a, b), expect);
            }
        }
    }
}
