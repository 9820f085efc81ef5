use serde::{Deserialize, Serialize};

use super::steiner::greedy_partial_steiner;
use crate::combinatorics::{ln_binomial, ln_factorial};

/// Chance that a fixed 4-tuple is bad under a uniform random coloring.
pub const BAD_TUPLE_PROBABILITY: f64 = 1.0 / 64.0;

/// The two union-bound expectations, with their natural logs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    pub n: u64,
    pub m: u64,
    /// Blocks in the greedy Steiner packing on `n` points (0 below 4 points).
    pub steiner_blocks: u64,
    /// `C(M,n)^3 * n! * (3/4)^(n^2)`.
    pub abc_expectation: f64,
    pub ln_abc_expectation: f64,
    /// `C(M,n) * (63/64)^s(n)`.
    pub good_set_bound: f64,
    pub ln_good_set_bound: f64,
}

pub fn steiner_block_count(n: u64) -> u64 {
    if n < 4 {
        0
    } else {
        greedy_partial_steiner(n as u32)
            .map(|s| s.block_count() as u64)
            .unwrap_or(0)
    }
}

pub fn expected_counts(n: u64, m: u64) -> ExpectedCounts {
    let s = steiner_block_count(n);
    let lb = ln_binomial(m, n);
    let ln_abc = 3.0 * lb + ln_factorial(n) + (n * n) as f64 * (0.75f64).ln();
    let ln_good = lb + s as f64 * (1.0 - BAD_TUPLE_PROBABILITY).ln();
    ExpectedCounts {
        n,
        m,
        steiner_blocks: s,
        abc_expectation: ln_abc.exp(),
        ln_abc_expectation: ln_abc,
        good_set_bound: ln_good.exp(),
        ln_good_set_bound: ln_good,
    }
}
