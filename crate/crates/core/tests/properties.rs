//! Invariants checked on random small types.

use hurwitz_core::oracle::{double_hurwitz, is_cardinality_scaled, pruned_double_hurwitz_oracle};
use hurwitz_core::partition::partitions_desc;
use hurwitz_core::pruned_tropical::tropical_pruned_with;
use hurwitz_core::recursion::PrunedRecursion;
use hurwitz_core::tropical::tropical_double_hurwitz;
use hurwitz_core::{HurwitzType, Partition, PrunedSide, Rational};
use proptest::prelude::*;

/// Random types of degree at most 5 with at most 5 simple branch points, so
/// the permutation oracle stays fast.
fn small_type() -> impl Strategy<Value = HurwitzType> {
    (2u32..=5, 0u32..=1, any::<prop::sample::Index>(), any::<prop::sample::Index>())
        .prop_map(|(d, g, i, j)| {
            let parts = partitions_desc(d);
            let mu = parts[i.index(parts.len())].clone();
            let nu = parts[j.index(parts.len())].clone();
            HurwitzType::of(g, &mu, &nu)
        })
        .prop_filter("0 <= b <= 5", |t| (0..=5).contains(&t.branch_count()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classical_numbers_are_symmetric(t in small_type()) {
        let a: Rational = double_hurwitz(&t).unwrap();
        let b: Rational = double_hurwitz(&t.swapped()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn scaled_numbers_are_cardinalities(t in small_type()) {
        let h: Rational = double_hurwitz(&t).unwrap();
        prop_assert!(is_cardinality_scaled(&h, t.degree()));
        let p: Rational = pruned_double_hurwitz_oracle(&t.clone().pruned(PrunedSide::Left)).unwrap();
        prop_assert!(is_cardinality_scaled(&p, t.degree()));
    }

    #[test]
    fn pruned_never_exceeds_classical(t in small_type()) {
        let h: Rational = double_hurwitz(&t).unwrap();
        for side in [PrunedSide::Left, PrunedSide::Right] {
            let p: Rational = pruned_double_hurwitz_oracle(&t.clone().pruned(side)).unwrap();
            prop_assert!(p <= h);
        }
    }

    #[test]
    fn pruning_sides_swap(t in small_type()) {
        let left: Rational = pruned_double_hurwitz_oracle(&t.clone().pruned(PrunedSide::Left)).unwrap();
        let right: Rational = pruned_double_hurwitz_oracle(&t.swapped().pruned(PrunedSide::Right)).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tropical_matches_oracle(t in small_type()) {
        prop_assume!(t.branch_count() > 0);
        let h: Rational = double_hurwitz(&t).unwrap();
        prop_assert_eq!(tropical_double_hurwitz::<Rational>(&t).unwrap(), h);
    }

    #[test]
    fn recursion_and_pruned_graphs_match_oracle(t in small_type()) {
        let t = t.pruned(PrunedSide::Left);
        let expected: Rational = pruned_double_hurwitz_oracle(&t).unwrap();
        let rec = PrunedRecursion::<Rational>::new();
        prop_assert_eq!(rec.value(&t).unwrap(), expected.clone());
        prop_assert_eq!(tropical_pruned_with(&t, &rec).unwrap(), expected);
    }

    #[test]
    fn type_text_round_trips(t in small_type(), side in 0usize..3) {
        let side = [PrunedSide::None, PrunedSide::Left, PrunedSide::Right][side];
        let t = if side == PrunedSide::None { t } else { t.pruned(side) };
        let back: HurwitzType = t.to_string().parse().unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn partition_text_round_trips(parts in prop::collection::vec(1u32..9, 1..6)) {
        let p = Partition::new(parts).unwrap();
        let back: Partition = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn recursion_cache_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.txt");
    let t = HurwitzType::of(1, &[3, 2], &[2, 2, 1]).pruned(PrunedSide::Left);
    let cold = PrunedRecursion::<Rational>::with_cache_file(&path).unwrap();
    let value = cold.value(&t).unwrap();
    cold.save().unwrap();
    let warm = PrunedRecursion::<Rational>::with_cache_file(&path).unwrap();
    assert_eq!(warm.memo_len(), cold.memo_len());
    assert_eq!(warm.value(&t).unwrap(), value);
}
