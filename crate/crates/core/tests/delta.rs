mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use stepup_core::delta::{
    delta, delta_sequence, enumerate_realizable_patterns, is_realizable, merged_delta, raw_deltas,
    realize_deltas, realize_pattern, subsequence_vertices, verify_delta_properties,
};
use stepup_core::DeltaPattern;

use common::{brute_patterns, slow_delta};

/// Realizable length-5 patterns; pinned from the brute-force scan below.
const K5: usize = 214;

fn increasing(max_bits: u32, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::btree_set(0u64..(1u64 << max_bits), len).prop_map(|s| s.into_iter().collect())
}

#[test]
fn enumeration_matches_brute_force_up_to_five() {
    for len in 1..=5 {
        let got: BTreeSet<Vec<u8>> = enumerate_realizable_patterns(len)
            .unwrap()
            .into_iter()
            .map(|p| p.ranks().to_vec())
            .collect();
        assert_eq!(got, brute_patterns(len), "length {len}");
    }
    assert_eq!(enumerate_realizable_patterns(5).unwrap().len(), K5);
}

#[test]
fn enumeration_order_is_lexicographic_and_stable() {
    let a = enumerate_realizable_patterns(6).unwrap();
    let b = enumerate_realizable_patterns(6).unwrap();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0].ranks() < w[1].ranks()));
    assert!(a.iter().all(is_realizable));
}

#[test]
fn realize_round_trips_up_to_six() {
    for len in 1..=6 {
        for p in enumerate_realizable_patterns(len).unwrap() {
            let vs = realize_pattern(&p).unwrap();
            assert_eq!(delta_sequence(&vs).unwrap().pattern, p);
            // bit width bounded by the number of distinct ranks
            assert!(*vs.last().unwrap() < 1u64 << p.rank_count());
        }
    }
}

#[test]
fn unrealizable_patterns_are_rejected() {
    let all: BTreeSet<Vec<u8>> = brute_patterns(4);
    // every canonical weak order of length 4 that brute force never produced
    let mut rejected = 0;
    for code in 0..4u32.pow(4) {
        let ranks: Vec<u8> = (0..4).map(|i| ((code / 4u32.pow(i)) % 4) as u8).collect();
        let Ok(p) = DeltaPattern::new(ranks.clone()) else {
            continue;
        };
        if !all.contains(&ranks) {
            assert!(!is_realizable(&p));
            assert!(realize_pattern(&p).is_err());
            rejected += 1;
        }
    }
    assert!(rejected > 0);
}

#[test]
fn property_two_exhaustive_at_six_bits() {
    let vs: Vec<u64> = (0..64).collect();
    for i in 0..64 {
        for j in i + 1..64 {
            assert_eq!(
                merged_delta(&vs, i, j).unwrap(),
                slow_delta(i as u64, j as u64)
            );
        }
    }
}

#[test]
fn property_one_exhaustive_at_eight_bits() {
    // every triple u < v < w below 256
    for u in 0u64..256 {
        for v in u + 1..256 {
            let d1 = slow_delta(u, v);
            for w in v + 1..256 {
                assert_ne!(d1, slow_delta(v, w));
            }
        }
    }
}

proptest! {
    #[test]
    fn delta_matches_bit_scan(u in any::<u64>(), v in any::<u64>()) {
        prop_assume!(u != v);
        prop_assert_eq!(delta(&u, &v).unwrap(), slow_delta(u, v));
        let wide = delta(&BigUint::from(u), &BigUint::from(v)).unwrap();
        prop_assert_eq!(wide, slow_delta(u, v));
    }

    #[test]
    fn properties_hold_on_increasing_lists(vs in increasing(16, 2..12)) {
        prop_assert!(verify_delta_properties(&vs).unwrap().passed);
    }

    #[test]
    fn merged_delta_is_span_maximum(vs in increasing(20, 2..10)) {
        let raw = raw_deltas(&vs).unwrap();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                let direct = slow_delta(vs[i], vs[j]);
                prop_assert_eq!(merged_delta(&vs, i, j).unwrap(), direct);
                prop_assert_eq!(raw[i..j].iter().copied().max().unwrap(), direct);
            }
        }
    }

    #[test]
    fn property_three(vs in increasing(12, 4..5)) {
        let (d1, d2, d3) = (slow_delta(vs[0], vs[1]), slow_delta(vs[1], vs[2]), slow_delta(vs[2], vs[3]));
        if d1 > d2 {
            prop_assert_ne!(d1, d3);
        }
    }

    #[test]
    fn realize_deltas_reproduces_delta_lists(vs in increasing(24, 2..10)) {
        let raw = raw_deltas(&vs).unwrap();
        let back = realize_deltas(&raw).unwrap();
        prop_assert_eq!(raw_deltas(&back).unwrap(), raw);
    }

    #[test]
    fn subsequences_keep_picked_deltas(
        len in 3usize..10,
        decreasing in any::<bool>(),
        mask in 1u32..512,
    ) {
        // monotone delta lists of length len - 1
        let raw: Vec<u32> = if decreasing { (0..len as u32 - 1).rev().collect() } else { (0..len as u32 - 1).collect() };
        let vs = realize_deltas(&raw).unwrap();
        let picks: Vec<usize> = (0..raw.len()).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!picks.is_empty());
        let sub = subsequence_vertices(&vs, &picks).unwrap();
        let want: Vec<u32> = picks.iter().map(|&p| raw[p]).collect();
        prop_assert_eq!(raw_deltas(&sub).unwrap(), want);
        prop_assert!(sub.iter().all(|v| vs.contains(v)));
    }
}

#[test]
fn non_monotone_subsequence_is_a_precondition_error() {
    let vs: Vec<u64> = vec![0, 4, 6, 8, 9];
    assert!(subsequence_vertices(&vs, &[0, 1]).is_err());
}
