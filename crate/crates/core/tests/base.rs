mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use stepup_core::base::{
    count_bad_4tuples, expected_counts, find_abc_structure, find_bad4_free_nset, generate_phi,
    greedy_partial_steiner, is_bad_4tuple, random_pair_coloring, steiner_block_count,
    BAD_TUPLE_PROBABILITY,
};
use stepup_core::combinatorics::binomial;
use stepup_core::{Color, Error, PairColoring};

use common::{naive_abc_exists, naive_bad, naive_bad4_free, subsets};

const BUDGET: u128 = 1 << 40;

/// Greedy block count on 100 points; regression constant.
const STEINER_100: usize = 645;

#[test]
fn symmetry_up_to_64() {
    for m in 2..=64u32 {
        let phi = random_pair_coloring(m, u64::from(m)).unwrap();
        for a in 0..m {
            for b in a + 1..m {
                assert_eq!(phi.color(a, b), phi.color(b, a));
            }
        }
    }
}

#[test]
fn same_seed_same_coloring() {
    let a = random_pair_coloring(40, 9).unwrap();
    let b = random_pair_coloring(40, 9).unwrap();
    assert_eq!(a.to_bytes(), b.to_bytes());
    assert!(random_pair_coloring(1, 0).is_err());
    assert_eq!(random_pair_coloring(2, 3).unwrap().pair_count(), 1);
}

#[test]
fn red_fraction_within_five_sigma() {
    let phi = random_pair_coloring(64, 1234).unwrap();
    let n = phi.pair_count() as f64;
    let red = phi.red_count() as f64;
    assert!((red - n / 2.0).abs() <= 5.0 * (n / 4.0).sqrt());
}

#[test]
fn bad_tuple_examples() {
    // red ab, bc, bd; blue ac, ad, cd
    let phi = PairColoring::from_fn(4, |a, b| {
        Color::from_red(matches!((a, b), (0, 1) | (1, 2) | (1, 3)))
    })
    .unwrap();
    assert!(is_bad_4tuple(&phi, [0, 1, 2, 3]).unwrap());
    let red = PairColoring::uniform(4, Color::Red).unwrap();
    assert!(!is_bad_4tuple(&red, [0, 1, 2, 3]).unwrap());
    assert!(matches!(
        is_bad_4tuple(&phi, [0, 2, 1, 3]),
        Err(Error::Order(_))
    ));
}

#[test]
fn bad_tuple_recount_at_twelve() {
    for seed in 0..20 {
        let phi = random_pair_coloring(12, seed).unwrap();
        let naive = subsets(12, 4)
            .iter()
            .filter(|q| naive_bad(&phi, [q[0], q[1], q[2], q[3]]))
            .count() as u64;
        assert_eq!(count_bad_4tuples(&phi), naive);
    }
}

#[test]
fn bad4_free_agrees_with_naive_oracle() {
    let mut found = 0;
    for seed in 0..120u64 {
        let m = 6 + (seed % 7) as u32;
        let n = 1 + (seed % 3) as usize + usize::from(seed % 2 == 0) * 2;
        let phi = random_pair_coloring(m, seed).unwrap();
        let got = find_bad4_free_nset(&phi, n, BUDGET).unwrap();
        assert_eq!(got, naive_bad4_free(&phi, n), "seed {seed}");
        found += usize::from(got.is_some());
    }
    assert!(found > 0);
}

#[test]
fn bad4_free_exact_up_to_five_at_sixteen() {
    for seed in 0..10u64 {
        let phi = random_pair_coloring(16, 100 + seed).unwrap();
        for n in 4..=5 {
            let got = find_bad4_free_nset(&phi, n, BUDGET).unwrap();
            assert_eq!(got, naive_bad4_free(&phi, n));
        }
    }
    // trivial outcomes for monochromatic colorings
    let red = PairColoring::uniform(16, Color::Red).unwrap();
    assert_eq!(
        find_bad4_free_nset(&red, 4, BUDGET).unwrap(),
        Some(vec![0, 1, 2, 3])
    );
}

#[test]
fn abc_agrees_with_naive_oracle() {
    for seed in 0..110u64 {
        let (n, m) = match seed % 3 {
            0 => (1, 3 + (seed % 10) as u32),
            1 => (2, 6 + (seed % 7) as u32),
            _ => (3, 9),
        };
        let phi = random_pair_coloring(m, seed).unwrap();
        let got = find_abc_structure(&phi, n, BUDGET).unwrap();
        assert_eq!(got.is_some(), naive_abc_exists(&phi, n), "seed {seed}");
        if let Some(w) = got {
            w.check_structure(n).unwrap();
            assert!(w.satisfies_disjunction(&phi));
        }
    }
}

#[test]
fn abc_on_structured_colorings() {
    // all blue: the disjunction needs a f(b) blue, which always holds
    let blue = PairColoring::uniform(6, Color::Blue).unwrap();
    assert!(find_abc_structure(&blue, 2, BUDGET).unwrap().is_some());
    let red = PairColoring::uniform(6, Color::Red).unwrap();
    assert!(find_abc_structure(&red, 2, BUDGET).unwrap().is_some());
    // 3n > M leaves nothing to find
    assert!(find_abc_structure(&red, 3, BUDGET).unwrap().is_none());
    assert!(!naive_abc_exists(&red, 3));
}

#[test]
fn budgets_are_enforced() {
    let phi = random_pair_coloring(40, 1).unwrap();
    assert!(matches!(
        find_bad4_free_nset(&phi, 10, 1000),
        Err(Error::Resource(_))
    ));
    assert!(matches!(
        find_abc_structure(&phi, 3, 1000),
        Err(Error::Resource(_))
    ));
    assert!(matches!(
        find_bad4_free_nset(&phi, 41, BUDGET),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn accepted_colorings_survive_reverification() {
    // feasible scales only: with n = 4 any M >= 5 forces a contradiction
    let mut accepted = 0;
    for (seed, (n, m)) in [(4, 4), (5, 5), (5, 6), (6, 6)].into_iter().enumerate() {
        if let Ok(g) = generate_phi(n, m, seed as u64, 200_000, BUDGET) {
            assert!(find_bad4_free_nset(&g.phi, n, BUDGET).unwrap().is_none());
            assert!(find_abc_structure(&g.phi, n, BUDGET).unwrap().is_none());
            assert!(naive_bad4_free(&g.phi, n).is_none());
            assert!(!naive_abc_exists(&g.phi, n));
            assert_eq!(
                g.log.attempts,
                g.log.rejected_bad4_free + g.log.rejected_abc + 1
            );
            accepted += 1;
        }
    }
    assert!(accepted >= 3, "{accepted}");
}

#[test]
fn small_sets_are_always_bad4_free() {
    let err = generate_phi(2, 50, 7, 25, BUDGET).unwrap_err();
    match err {
        Error::SearchExhausted { attempts, .. } => assert_eq!(attempts, 25),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn generation_is_deterministic() {
    let a = generate_phi(4, 4, 11, 10_000, BUDGET).unwrap();
    let b = generate_phi(4, 4, 11, 10_000, BUDGET).unwrap();
    assert_eq!(a.phi.to_bytes(), b.phi.to_bytes());
    assert_eq!(a.log, b.log);
}

#[test]
fn steiner_invariant_up_to_200() {
    for n in 4..=200u32 {
        let s = greedy_partial_steiner(n).unwrap();
        let mut seen = vec![false; (n * n) as usize];
        for b in &s.blocks {
            assert!(b.windows(2).all(|w| w[0] < w[1]) && b[3] < n);
            for i in 0..4 {
                for j in i + 1..4 {
                    let k = (b[i] * n + b[j]) as usize;
                    assert!(!seen[k], "n = {n}: pair {} {} twice", b[i], b[j]);
                    seen[k] = true;
                }
            }
        }
        assert!(s.pair_conflict().is_none());
    }
    let s100 = greedy_partial_steiner(100).unwrap().block_count();
    assert!(s100 >= 100 * 100 / 20);
    assert_eq!(s100, STEINER_100);
}

fn exact_abc(n: u64, m: u64) -> BigRational {
    let c = BigInt::from(binomial(m, n));
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    let q = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut pow = BigRational::one();
    for _ in 0..n * n {
        pow *= &q;
    }
    BigRational::from_integer(&c * &c * &c * fact) * pow
}

fn exact_good(n: u64, m: u64) -> BigRational {
    let q = BigRational::new(BigInt::from(63), BigInt::from(64));
    let mut pow = BigRational::one();
    for _ in 0..steiner_block_count(n) {
        pow *= &q;
    }
    BigRational::from_integer(BigInt::from(binomial(m, n))) * pow
}

#[test]
fn expectations_match_exact_rationals() {
    assert_eq!(BAD_TUPLE_PROBABILITY, 1.0 / 64.0);
    for n in 1..=8u64 {
        for m in [3 * n, 3 * n + 5, 40] {
            let e = expected_counts(n, m);
            let abc = exact_abc(n, m).to_f64().unwrap();
            let good = exact_good(n, m).to_f64().unwrap();
            assert!(
                (e.abc_expectation - abc).abs() <= 1e-9 * abc.max(1e-300),
                "{n} {m}"
            );
            assert!(
                (e.good_set_bound - good).abs() <= 1e-9 * good.max(1e-300),
                "{n} {m}"
            );
        }
    }
    let one = expected_counts(1, 10);
    assert!((one.abc_expectation - 750.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn counts_agree_with_naive(seed in any::<u64>(), m in 4u32..11) {
        let phi = random_pair_coloring(m, seed).unwrap();
        let naive = subsets(m, 4).iter().filter(|q| naive_bad(&phi, [q[0], q[1], q[2], q[3]])).count() as u64;
        prop_assert_eq!(count_bad_4tuples(&phi), naive);
    }

    #[test]
    fn phi_bytes_round_trip(seed in any::<u64>(), m in 2u32..70) {
        let phi = random_pair_coloring(m, seed).unwrap();
        let back = PairColoring::from_bytes(&phi.to_bytes()).unwrap();
        prop_assert_eq!(back.to_bytes(), phi.to_bytes());
        prop_assert_eq!(back.seed(), Some(seed));
    }
}
