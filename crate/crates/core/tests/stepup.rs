mod common;

use proptest::prelude::*;
use stepup_core::base::random_pair_coloring;
use stepup_core::delta::{enumerate_realizable_patterns, realize_deltas, realize_pattern};
use stepup_core::stepup::{
    chi, chi_on_subset, chi_variant_665, classify_pattern, classify_variant, induced_deltas,
    VariantMatch,
};
use stepup_core::{Color, Error, PairColoring, QuadColoring, RuleMatch, StepColoring};

use common::naive_bad;

fn hb(a: u64, b: u64) -> u32 {
    63 - (a ^ b).leading_zeros()
}

/// Main rules written out directly from the four red conditions.
fn oracle_red(phi: &PairColoring, d: [u32; 4]) -> (bool, usize) {
    let [d1, d2, d3, d4] = d;
    let red = |x, y| phi.is_red(x, y);
    let inc = d1 < d2 && d2 < d3 && d3 < d4;
    let dec = d1 > d2 && d2 > d3 && d3 > d4;
    let mut s = d;
    s.sort_unstable();
    let r1 = (inc || dec) && naive_bad(phi, s);
    let r2 = d3 > d1 && d1 > d2 && d2 > d4 && red(d1, d4) && !red(d2, d4);
    let r3 = d2 > d4 && d4 > d3 && d3 > d1 && red(d1, d4) && !red(d1, d3);
    let r4 = d1 < d2 && d2 > d3 && d3 < d4 && d1 == d4;
    let hits = [r1, r2, r3, r4].iter().filter(|&&x| x).count();
    (hits == 1, hits)
}

#[test]
fn rules_are_exclusive_on_every_pattern() {
    for p in enumerate_realizable_patterns(4).unwrap() {
        let r = p.rank_count() as u32;
        let vs = realize_pattern(&p).unwrap();
        let pairs = (r * r.saturating_sub(1) / 2) as usize;
        for mask in 0u32..1 << pairs {
            let m = r.max(2);
            // row-major pair order, one mask bit per pair
            let mut k = 0;
            let phi = PairColoring::from_fn(m, |_, _| {
                let c = Color::from_red(mask >> k & 1 == 1);
                k += 1;
                c
            })
            .unwrap();
            let d = p.values();
            let d = [d[0], d[1], d[2], d[3]];
            let (want, hits) = oracle_red(&phi, d);
            assert!(hits <= 1, "{p:?} mask {mask}");
            let sc = StepColoring::main(phi, m).unwrap();
            assert_eq!(chi(&sc, &vs).unwrap().is_red(), want, "{p:?} mask {mask}");
        }
    }
}

#[test]
fn subset_colors_match_explicit_subsets_at_six_bits() {
    let phi = random_pair_coloring(6, 2024).unwrap();
    let sc = StepColoring::main(phi.clone(), 6).unwrap();
    let mut checked = 0u64;
    let mut six = [0u64; 6];
    for a in 0..64 {
        six[0] = a;
        for b in a + 1..64 {
            six[1] = b;
            for c in b + 1..64 {
                six[2] = c;
                for d in c + 1..64 {
                    six[3] = d;
                    for e in d + 1..64 {
                        six[4] = e;
                        for f in e + 1..64 {
                            six[5] = f;
                            for omit in 0..6 {
                                let mut five = [0u64; 5];
                                let mut k = 0;
                                for (i, &v) in six.iter().enumerate() {
                                    if i != omit {
                                        five[k] = v;
                                        k += 1;
                                    }
                                }
                                let dd = [
                                    hb(five[0], five[1]),
                                    hb(five[1], five[2]),
                                    hb(five[2], five[3]),
                                    hb(five[3], five[4]),
                                ];
                                let got = chi_on_subset(&sc, &six, omit).unwrap();
                                assert_eq!(
                                    got.is_red(),
                                    oracle_red(&phi, dd).0,
                                    "{six:?} omit {omit}"
                                );
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(checked, 74_974_368);
}

#[test]
fn induced_deltas_match_direct_deltas() {
    let six = [3u64, 9, 10, 17, 40, 41];
    let d: Vec<u32> = six.windows(2).map(|w| hb(w[0], w[1])).collect();
    let d = [d[0], d[1], d[2], d[3], d[4]];
    assert_eq!(induced_deltas(&d, 0), [d[1], d[2], d[3], d[4]]);
    assert_eq!(induced_deltas(&d, 5), [d[0], d[1], d[2], d[3]]);
    // dropping the third vertex merges its two gaps
    assert_eq!(induced_deltas(&d, 2)[1], hb(six[1], six[3]));
}

#[test]
fn variant_examples() {
    let blue = QuadColoring::uniform(4, Color::Blue).unwrap();
    let sc = StepColoring::variant(blue.clone(), 4).unwrap();
    let mono = realize_deltas(&[0, 1, 2, 3]).unwrap();
    assert_eq!(chi_variant_665(&sc, &mono).unwrap(), Color::Blue);
    let zig = realize_deltas(&[2, 0, 3, 1]).unwrap();
    assert_eq!(
        classify_variant([2, 0, 3, 1]).unwrap(),
        VariantMatch::Zigzag
    );
    assert_eq!(chi_variant_665(&sc, &zig).unwrap(), Color::Red);
    let side = realize_deltas(&[3, 0, 2, 1]).unwrap();
    assert_eq!(chi_variant_665(&sc, &side).unwrap(), Color::Blue);
    let red = StepColoring::variant(QuadColoring::uniform(4, Color::Red).unwrap(), 4).unwrap();
    assert_eq!(chi_variant_665(&red, &mono).unwrap(), Color::Red);
    // rule sets are not interchangeable
    assert!(matches!(chi(&sc, &mono), Err(Error::Precondition(_))));
}

#[test]
fn figure_d_is_red_for_every_phi() {
    let vs: [u64; 5] = [0b000, 0b010, 0b100, 0b101, 0b110];
    assert_eq!(
        classify_pattern([1, 2, 0, 1]).unwrap(),
        RuleMatch::EqualEndsRule4
    );
    for seed in 0..50 {
        let sc = StepColoring::main(random_pair_coloring(3, seed).unwrap(), 3).unwrap();
        assert_eq!(chi(&sc, &vs).unwrap(), Color::Red);
    }
}

#[test]
fn range_and_order_errors() {
    let sc = StepColoring::main(PairColoring::uniform(4, Color::Red).unwrap(), 4).unwrap();
    assert!(matches!(
        chi(&sc, &[0u64, 1, 2, 3, 16]),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        chi(&sc, &[0u64, 2, 1, 3, 4]),
        Err(Error::Order(_))
    ));
    assert!(matches!(
        chi(&sc, &[0u64, 1, 2, 3]),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        sc.color_deltas([0, 4, 1, 2]),
        Err(Error::BaseRange { .. })
    ));
    assert!(StepColoring::main(PairColoring::uniform(4, Color::Red).unwrap(), 5).is_err());
}

proptest! {
    #[test]
    fn monotone_colors_follow_the_bad_tuple_test(
        seed in any::<u64>(),
        vals in prop::collection::btree_set(0u32..12, 4),
        decreasing in any::<bool>(),
    ) {
        let phi = random_pair_coloring(12, seed).unwrap();
        let mut d: Vec<u32> = vals.into_iter().collect();
        let sorted = [d[0], d[1], d[2], d[3]];
        if decreasing {
            d.reverse();
        }
        let vs = realize_deltas(&d).unwrap();
        let sc = StepColoring::main(phi.clone(), 12).unwrap();
        prop_assert_eq!(chi(&sc, &vs).unwrap().is_red(), naive_bad(&phi, sorted));
    }

    #[test]
    fn chi_matches_oracle_on_wide_vertices(
        seed in any::<u64>(),
        d in prop::collection::vec(0u32..40, 4),
    ) {
        prop_assume!(d.windows(2).all(|w| w[0] != w[1]));
        let Ok(vs) = realize_deltas(&d) else { return Ok(()) };
        let phi = random_pair_coloring(40, seed).unwrap();
        let sc = StepColoring::main(phi.clone(), 40).unwrap();
        let dd = [d[0], d[1], d[2], d[3]];
        prop_assert_eq!(chi(&sc, &vs).unwrap().is_red(), oracle_red(&phi, dd).0);
    }

    #[test]
    fn psi_bytes_round_trip(seed in any::<u64>(), m in 4u32..14) {
        let psi = QuadColoring::random(m, seed).unwrap();
        let back = QuadColoring::from_bytes(&psi.to_bytes()).unwrap();
        prop_assert!(back == psi);
    }

    #[test]
    fn sparse_quads_meet_the_hypothesis(seed in any::<u64>(), m in 5u32..12) {
        let psi = QuadColoring::random_sparse(m, seed).unwrap();
        prop_assert!(psi.hypothesis_violation().is_none());
    }
}

#[test]
fn dense_quads_break_the_hypothesis() {
    let psi = QuadColoring::uniform(6, Color::Red).unwrap();
    assert_eq!(psi.hypothesis_violation(), Some([0, 1, 2, 3, 4]));
}
