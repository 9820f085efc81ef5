//! Integer-level searches: the most red edges inside any 6-set, and the
//! largest set whose 5-subsets are all blue.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, for_each_colex_in_range, partition_ranges, with_workers};
use crate::error::{Error, Result};
use crate::proofcheck::{MAIN_THRESHOLD, VARIANT_THRESHOLD};
use crate::stepup::{induced_deltas, FiveColoring, RuleSet, StepColoring};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Cap on 6-subsets scanned, or on search nodes for the clique search.
    pub max_subsets: u128,
    /// Wall-clock cap; results stay worker-count independent only while it is not hit.
    pub max_seconds: Option<f64>,
    pub workers: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_subsets: 2_000_000_000,
            max_seconds: None,
            workers: 1,
        }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_subsets == 0
            || self.workers == 0
            || self.max_seconds.is_some_and(|s| s.is_nan() || s <= 0.0)
        {
            return Err(Error::Precondition(format!(
                "budget bounds must be positive: {self:?}"
            )));
        }
        Ok(())
    }

    fn out_of_time(&self, start: &Instant) -> bool {
        self.max_seconds
            .is_some_and(|s| start.elapsed().as_secs_f64() > s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SixScan {
    pub max: u32,
    pub witness: Vec<u64>,
    /// Every 6-subset was scanned.
    pub exact: bool,
    pub subsets_scanned: u64,
    pub seconds: f64,
    pub threshold: u32,
    pub exceeds_threshold: bool,
}

/// Bit `i` set when the 5-subset missing `six[i]` is red.
trait SixKernel: Sync {
    fn red_edges(&self, six: &[u64; 6]) -> Result<u8>;
}

struct Generic<'a, C: FiveColoring>(&'a C);

impl<C: FiveColoring> SixKernel for Generic<'_, C> {
    fn red_edges(&self, six: &[u64; 6]) -> Result<u8> {
        let mut out = 0u8;
        for omit in 0..6 {
            let mut five = [0u64; 5];
            let mut k = 0;
            for (i, &v) in six.iter().enumerate() {
                if i != omit {
                    five[k] = v;
                    k += 1;
                }
            }
            if self.0.color5(&five)?.is_red() {
                out |= 1 << omit;
            }
        }
        Ok(out)
    }
}

struct Stepped<'a>(&'a StepColoring);

impl SixKernel for Stepped<'_> {
    #[inline]
    fn red_edges(&self, six: &[u64; 6]) -> Result<u8> {
        let d: [u32; 5] = std::array::from_fn(|i| 63 - (six[i] ^ six[i + 1]).leading_zeros());
        let mut out = 0u8;
        for omit in 0..6 {
            if self
                .0
                .color_deltas_unchecked(induced_deltas(&d, omit))
                .is_red()
            {
                out |= 1 << omit;
            }
        }
        Ok(out)
    }
}

fn check_vertices(vertices: &[u64], min: usize) -> Result<()> {
    if vertices.len() < min {
        return Err(Error::Size(format!(
            "need at least {min} vertices, got {}",
            vertices.len()
        )));
    }
    if vertices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Order(
            "vertex subset must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn check_width(sc: &StepColoring, vertices: &[u64]) -> Result<()> {
    let top = vertices.last().copied().unwrap_or(0);
    if sc.bit_width() < 64 && top >> sc.bit_width() != 0 {
        return Err(Error::Precondition(format!(
            "vertex {top} is not below 2^{}",
            sc.bit_width()
        )));
    }
    Ok(())
}

#[derive(Default)]
struct Best {
    max: u32,
    witness: Option<[u64; 6]>,
    scanned: u64,
    timed_out: bool,
}

impl Best {
    fn offer(&mut self, count: u32, six: [u64; 6]) {
        let better = match &self.witness {
            None => true,
            Some(w) => count > self.max || (count == self.max && six < *w),
        };
        if better {
            self.max = count;
            self.witness = Some(six);
        }
    }

    fn merge(mut self, o: Best) -> Best {
        self.scanned += o.scanned;
        self.timed_out |= o.timed_out;
        if let Some(w) = o.witness {
            self.offer(o.max, w);
        }
        self
    }
}

fn scan_six(
    kernel: &impl SixKernel,
    vertices: &[u64],
    budget: &SearchBudget,
    threshold: u32,
) -> Result<SixScan> {
    budget.validate()?;
    check_vertices(vertices, 6)?;
    let start = Instant::now();
    let total = binomial(vertices.len() as u64, 6);
    let limit = total.min(budget.max_subsets);
    let ranges = partition_ranges(limit, budget.workers * 16);
    let n = vertices.len();
    let best = with_workers(budget.workers, || {
        ranges
            .par_iter()
            .map(|&(s, e)| -> Result<Best> {
                let mut best = Best::default();
                if budget.out_of_time(&start) {
                    best.timed_out = true;
                    return Ok(best);
                }
                let mut err = None;
                for_each_colex_in_range(n, 6, s, e, |c| {
                    if err.is_some() {
                        return;
                    }
                    let six: [u64; 6] = std::array::from_fn(|i| vertices[c[i]]);
                    match kernel.red_edges(&six) {
                        Ok(red) => {
                            best.scanned += 1;
                            best.offer(red.count_ones(), six);
                        }
                        Err(e) => err = Some(e),
                    }
                });
                err.map_or(Ok(best), Err)
            })
            .try_reduce(Best::default, |a, b| Ok(a.merge(b)))
    })?;
    Ok(SixScan {
        max: best.max,
        witness: best.witness.map(|w| w.to_vec()).unwrap_or_default(),
        exact: limit == total && !best.timed_out,
        subsets_scanned: best.scanned,
        seconds: start.elapsed().as_secs_f64(),
        threshold,
        exceeds_threshold: best.max > threshold,
    })
}

/// Most red edges in any 6-subset, with the lexicographically least witness.
pub fn max_red_in_six(
    sc: &StepColoring,
    vertices: &[u64],
    budget: &SearchBudget,
) -> Result<SixScan> {
    if sc.rule_set() != RuleSet::Main64 {
        return Err(Error::Precondition(
            "max_red_in_six needs the main rule set".into(),
        ));
    }
    check_width(sc, vertices)?;
    scan_six(&Stepped(sc), vertices, budget, MAIN_THRESHOLD)
}

/// As [`max_red_in_six`] for the variant coloring, flagged against 4.
pub fn max_red_in_six_variant(
    sc: &StepColoring,
    vertices: &[u64],
    budget: &SearchBudget,
) -> Result<SixScan> {
    if sc.rule_set() != RuleSet::Variant65 {
        return Err(Error::Precondition(
            "max_red_in_six_variant needs the variant rule set".into(),
        ));
    }
    check_width(sc, vertices)?;
    scan_six(&Stepped(sc), vertices, budget, VARIANT_THRESHOLD)
}

/// Red-edge scan for an arbitrary 5-uniform coloring.
pub fn max_red_in_six_with<C: FiveColoring>(
    coloring: &C,
    vertices: &[u64],
    budget: &SearchBudget,
    threshold: u32,
) -> Result<SixScan> {
    scan_six(&Generic(coloring), vertices, budget, threshold)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueResult {
    pub size: usize,
    pub clique: Vec<u64>,
    /// The whole search space was explored, so `size` is the maximum.
    pub exact: bool,
    pub nodes: u64,
    pub seconds: f64,
}

struct BlueTable {
    binom: [[u64; 6]; 65],
    blue: Vec<u64>,
}

impl BlueTable {
    fn build<C: FiveColoring>(coloring: &C, vertices: &[u64], workers: usize) -> Result<Self> {
        let mut binom = [[0u64; 6]; 65];
        for (i, row) in binom.iter_mut().enumerate() {
            for (k, slot) in row.iter_mut().enumerate() {
                *slot = binomial(i as u64, k as u64) as u64;
            }
        }
        let n = vertices.len();
        let total = binomial(n as u64, 5);
        let words = (total as usize).div_ceil(64);
        // ranges aligned to whole words so each chunk owns its output
        let chunk_words = words.div_ceil(workers.max(1) * 8).max(1);
        let chunks: Vec<(usize, usize)> = (0..words)
            .step_by(chunk_words)
            .map(|w| (w, (w + chunk_words).min(words)))
            .collect();
        let parts = with_workers(workers, || {
            chunks
                .par_iter()
                .map(|&(w0, w1)| -> Result<Vec<u64>> {
                    let mut out = vec![0u64; w1 - w0];
                    let s = w0 as u128 * 64;
                    let e = (w1 as u128 * 64).min(total);
                    let mut rank = s as usize;
                    let mut err = None;
                    for_each_colex_in_range(n, 5, s, e, |c| {
                        if err.is_none() {
                            let five: [u64; 5] = std::array::from_fn(|i| vertices[c[i]]);
                            match coloring.color5(&five) {
                                Ok(col) if !col.is_red() => {
                                    let k = rank - w0 * 64;
                                    out[k / 64] |= 1 << (k % 64);
                                }
                                Ok(_) => {}
                                Err(e) => err = Some(e),
                            }
                        }
                        rank += 1;
                    });
                    err.map_or(Ok(out), Err)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(Self {
            binom,
            blue: parts.concat(),
        })
    }

    #[inline]
    fn is_blue(&self, idx: [usize; 5]) -> bool {
        let r: u64 = idx
            .iter()
            .enumerate()
            .map(|(i, &c)| self.binom[c][i + 1])
            .sum();
        self.blue[(r / 64) as usize] >> (r % 64) & 1 == 1
    }
}

/// Candidates `u > v` from `cand` that stay blue together with `clique + v`.
fn extend(table: &BlueTable, clique: &[usize], v: usize, cand: u64) -> u64 {
    let mut out = cand & !((2u64 << v) - 1);
    if clique.len() < 3 {
        return out;
    }
    let mut rest = out;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        'check: for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                for k in j + 1..clique.len() {
                    if !table.is_blue([clique[i], clique[j], clique[k], v, u]) {
                        out &= !(1 << u);
                        break 'check;
                    }
                }
            }
        }
    }
    out
}

struct Branch<'a> {
    table: &'a BlueTable,
    node_budget: u64,
    nodes: u64,
    exhausted: bool,
    best_size: usize,
    best: Option<Vec<usize>>,
}

impl Branch<'_> {
    fn dfs(&mut self, clique: &mut Vec<usize>, cand: u64) {
        if clique.len() > self.best_size {
            self.best_size = clique.len();
            self.best = Some(clique.clone());
        }
        let mut rest = cand;
        while rest != 0 {
            if clique.len() + rest.count_ones() as usize <= self.best_size {
                return;
            }
            if self.nodes >= self.node_budget {
                self.exhausted = true;
                return;
            }
            self.nodes += 1;
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let next = extend(self.table, clique, v, rest);
            clique.push(v);
            self.dfs(clique, next);
            clique.pop();
        }
    }
}

fn greedy(table: &BlueTable, n: usize) -> Vec<usize> {
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut clique = Vec::new();
    let mut cand = all;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand = extend(table, &clique, v, cand);
        clique.push(v);
    }
    clique
}

/// Largest vertex set with every 5-subset blue, by greedy start plus
/// branch-and-bound over increasing vertex sequences.
///
/// Each top-level branch gets `max_subsets / |V|` search nodes, so results
/// do not depend on the worker count. The clique reported is the
/// lexicographically least among those of the largest size found.
pub fn max_blue_clique<C: FiveColoring>(
    coloring: &C,
    vertices: &[u64],
    budget: &SearchBudget,
) -> Result<CliqueResult> {
    budget.validate()?;
    check_vertices(vertices, 5)?;
    if vertices.len() > 64 {
        return Err(Error::Resource(format!(
            "clique search handles at most 64 vertices, got {}",
            vertices.len()
        )));
    }
    let start = Instant::now();
    let n = vertices.len();
    let table = BlueTable::build(coloring, vertices, budget.workers)?;
    let lower = greedy(&table, n);
    let node_budget = (budget.max_subsets / n as u128).clamp(1, u64::MAX as u128) as u64;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let results: Vec<(Option<Vec<usize>>, u64, bool)> = with_workers(budget.workers, || {
        (0..n)
            .into_par_iter()
            .map(|v| {
                if budget.out_of_time(&start) {
                    return (None, 0, true);
                }
                let mut b = Branch {
                    table: &table,
                    node_budget,
                    nodes: 1,
                    exhausted: false,
                    best_size: lower.len() - 1,
                    best: None,
                };
                let mut clique = vec![v];
                let cand = extend(&table, &[], v, all);
                b.dfs(&mut clique, cand);
                (b.best, b.nodes, b.exhausted)
            })
            .collect()
    });
    let mut best = lower;
    let mut nodes = 0;
    let mut exact = true;
    let mut found: Option<Vec<usize>> = None;
    for (clique, count, exhausted) in results {
        nodes += count;
        exact &= !exhausted;
        if let Some(c) = clique {
            if found.as_ref().is_none_or(|f| c.len() > f.len()) {
                found = Some(c);
            }
        }
    }
    if let Some(f) = found {
        if f.len() >= best.len() {
            best = f;
        }
    }
    Ok(CliqueResult {
        size: best.len(),
        clique: best.iter().map(|&i| vertices[i]).collect(),
        exact,
        nodes,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Color, PairColoring};
    use crate::stepup::ConstantColoring;

    #[test]
    fn constant_blue_is_one_clique() {
        let vs: Vec<u64> = (0..20).collect();
        let r = max_blue_clique(
            &ConstantColoring(Color::Blue),
            &vs,
            &SearchBudget::default(),
        )
        .unwrap();
        assert_eq!(r.size, 20);
        assert!(r.exact);
        let r =
            max_blue_clique(&ConstantColoring(Color::Red), &vs, &SearchBudget::default()).unwrap();
        assert_eq!(r.clique, vec![0, 1, 2, 3]);
        assert!(r.exact);
    }

    #[test]
    fn all_blue_six_sets_count_zero() {
        let vs: Vec<u64> = (0..9).collect();
        let s = max_red_in_six_with(
            &ConstantColoring(Color::Blue),
            &vs,
            &SearchBudget::default(),
            3,
        )
        .unwrap();
        assert_eq!(s.max, 0);
        assert_eq!(s.witness, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(s.subsets_scanned, 84);
    }

    #[test]
    fn truncation_is_flagged() {
        let sc = StepColoring::main(PairColoring::random(4, 1).unwrap(), 4).unwrap();
        let vs: Vec<u64> = (0..16).collect();
        let budget = SearchBudget {
            max_subsets: 100,
            ..SearchBudget::default()
        };
        let s = max_red_in_six(&sc, &vs, &budget).unwrap();
        assert!(!s.exact);
        assert_eq!(s.subsets_scanned, 100);
    }
}
