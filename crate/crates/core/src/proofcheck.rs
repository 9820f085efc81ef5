//! Exhaustive symbolic check of the six-vertex red-edge bounds.
//!
//! Only the weak ordering of the five consecutive deltas of a sorted 6-tuple and
//! the base colors among those delta values influence the six edge colors. We
//! therefore enumerate every realizable length-5 pattern together with every
//! base assignment on its ranks, which covers every 6-tuple of every stepped-up
//! coloring at once.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::base::{Color, PairColoring};
use crate::combinatorics::{
    binomial, colex_rank, for_each_colex_in_range, partition_ranges, with_workers,
};
use crate::delta::{enumerate_realizable_patterns, is_realizable, realize_pattern, DeltaPattern};
use crate::error::{Error, Result};
use crate::stepup::{induced_deltas, main_rule_red, variant_rule_red, QuadColoring, StepColoring};

/// Red-count bound for the main coloring.
pub const MAIN_THRESHOLD: u32 = 3;
/// Red-count bound for the variant coloring.
pub const VARIANT_THRESHOLD: u32 = 4;

/// The sixteen up/down shapes of five consecutive deltas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "1a")]
    C1a,
    #[serde(rename = "1b")]
    C1b,
    #[serde(rename = "2a")]
    C2a,
    #[serde(rename = "2b")]
    C2b,
    #[serde(rename = "3a")]
    C3a,
    #[serde(rename = "3b")]
    C3b,
    #[serde(rename = "4a")]
    C4a,
    #[serde(rename = "4b")]
    C4b,
    #[serde(rename = "5a")]
    C5a,
    #[serde(rename = "5b")]
    C5b,
    #[serde(rename = "6a")]
    C6a,
    #[serde(rename = "6b")]
    C6b,
    #[serde(rename = "7a")]
    C7a,
    #[serde(rename = "7b")]
    C7b,
    #[serde(rename = "8a")]
    C8a,
    #[serde(rename = "8b")]
    C8b,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 16] = [
        CaseLabel::C1a,
        CaseLabel::C1b,
        CaseLabel::C2a,
        CaseLabel::C2b,
        CaseLabel::C3a,
        CaseLabel::C3b,
        CaseLabel::C4a,
        CaseLabel::C4b,
        CaseLabel::C5a,
        CaseLabel::C5b,
        CaseLabel::C6a,
        CaseLabel::C6b,
        CaseLabel::C7a,
        CaseLabel::C7b,
        CaseLabel::C8a,
        CaseLabel::C8b,
    ];

    /// Up/down signs of `d2-d1, .., d5-d4`, `U` for a rise.
    pub fn signs(self) -> &'static str {
        match self {
            CaseLabel::C1a => "DUDU",
            CaseLabel::C1b => "UDUD",
            CaseLabel::C2a => "DDUD",
            CaseLabel::C2b => "UUDU",
            CaseLabel::C3a => "DUDD",
            CaseLabel::C3b => "UDUU",
            CaseLabel::C4a => "DUUD",
            CaseLabel::C4b => "UDDU",
            CaseLabel::C5a => "DUUU",
            CaseLabel::C5b => "UDDD",
            CaseLabel::C6a => "DDUU",
            CaseLabel::C6b => "UUDD",
            CaseLabel::C7a => "DDDU",
            CaseLabel::C7b => "UUUD",
            CaseLabel::C8a => "DDDD",
            CaseLabel::C8b => "UUUU",
        }
    }

    /// Label of a length-5 sequence with distinct neighbours.
    pub fn of(values: &[u32]) -> Result<Self> {
        if values.len() != 5 || values.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Pattern(format!(
                "case labels need 5 values with distinct neighbours, got {values:?}"
            )));
        }
        let signs: String = values
            .windows(2)
            .map(|w| if w[1] > w[0] { 'U' } else { 'D' })
            .collect();
        Ok(*Self::ALL
            .iter()
            .find(|c| c.signs() == signs)
            .expect("all 16 sign strings are labelled"))
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

/// Base color assigned to a set of distinct ranks (a pair, or a quad for the variant).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankAssignment {
    pub ranks: Vec<u8>,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub variant: bool,
    pub pattern: DeltaPattern,
    /// Bit `k` is the color of the `k`-th rank set (1 = red).
    pub assignment_mask: u32,
    pub phi_assignment: Vec<RankAssignment>,
    /// Colors of the edges missing vertex 1, .., vertex 6.
    pub edge_colors: [Color; 6],
    pub red_count: u32,
    pub case_label: CaseLabel,
    pub strict: bool,
}

/// Slot of the rank pair `x < y` among the pairs of `r` ranks, row-major.
#[inline]
pub fn pair_slot(r: usize, x: usize, y: usize) -> usize {
    x * (2 * r - x - 1) / 2 + (y - x - 1)
}

/// The rank sets the base coloring is queried on, in slot order.
fn rank_sets(r: usize, variant: bool) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if variant {
        for d in 3..r {
            for c in 2..d {
                for b in 1..c {
                    for a in 0..b {
                        out.push(vec![a as u8, b as u8, c as u8, d as u8]);
                    }
                }
            }
        }
    } else {
        for x in 0..r {
            for y in x + 1..r {
                out.push(vec![x as u8, y as u8]);
            }
        }
    }
    out
}

fn slot_count(r: usize, variant: bool) -> usize {
    binomial(r as u64, if variant { 4 } else { 2 }) as usize
}

/// Red edges (bit `i` for the edge missing vertex `i`) under a rank assignment.
#[inline]
pub fn symbolic_red_mask(values: &[u32; 5], r: usize, mask: u32, variant: bool) -> u8 {
    let mut out = 0u8;
    for omit in 0..6 {
        let d = induced_deltas(values, omit);
        let red = if variant {
            variant_rule_red(d, |q| mask >> colex_rank(&q.map(|x| x as usize)) & 1 == 1)
        } else {
            main_rule_red(d, |x, y| {
                let (x, y) = (x.min(y) as usize, x.max(y) as usize);
                mask >> pair_slot(r, x, y) & 1 == 1
            })
        };
        if red {
            out |= 1 << omit;
        }
    }
    out
}

fn pattern_values(p: &DeltaPattern) -> Result<[u32; 5]> {
    p.values()
        .try_into()
        .map_err(|_| Error::Pattern(format!("expected a length-5 pattern, got {p}")))
}

/// Symbolic evaluation of one pattern under one assignment.
pub fn case_report(p: &DeltaPattern, mask: u32, variant: bool) -> Result<CaseReport> {
    let values = pattern_values(p)?;
    let r = p.rank_count();
    let red = symbolic_red_mask(&values, r, mask, variant);
    let edge_colors = std::array::from_fn(|i| Color::from_red(red >> i & 1 == 1));
    Ok(CaseReport {
        variant,
        pattern: p.clone(),
        assignment_mask: mask,
        phi_assignment: rank_sets(r, variant)
            .into_iter()
            .enumerate()
            .map(|(k, ranks)| RankAssignment {
                ranks,
                color: Color::from_red(mask >> k & 1 == 1),
            })
            .collect(),
        edge_colors,
        red_count: red.count_ones(),
        case_label: CaseLabel::of(&values)?,
        strict: p.is_strict(),
    })
}

/// The six length-4 patterns seen by the edges missing vertex 1, .., 6.
pub fn induced_edge_patterns(p: &DeltaPattern) -> Result<[DeltaPattern; 6]> {
    let values = pattern_values(p)?;
    if !is_realizable(p) {
        return Err(Error::Realizability(p.ranks().to_vec()));
    }
    let mut out = Vec::with_capacity(6);
    for omit in 0..6 {
        out.push(DeltaPattern::from_values(&induced_deltas(&values, omit))?);
    }
    Ok(out.try_into().expect("six patterns"))
}

/// How many of the main coloring's shapes a quadruple fits, each tested on
/// its own.
fn main_shapes_matched(d: [u32; 4]) -> u32 {
    let [d1, d2, d3, d4] = d;
    let mono = (d1 < d2 && d2 < d3 && d3 < d4) || (d1 > d2 && d2 > d3 && d3 > d4);
    let r2 = d1 > d2 && d2 < d3 && d3 > d4 && d1 < d3 && d2 > d4;
    let r3 = d1 < d2 && d2 > d3 && d3 < d4 && d1 < d3 && d2 > d4;
    let r4 = d1 < d2 && d2 > d3 && d3 < d4 && d1 == d4;
    u32::from(mono) + u32::from(r2) + u32::from(r3) + u32::from(r4)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseStats {
    pub patterns: u64,
    pub strict_patterns: u64,
    pub assignments: u64,
    pub max_red: u32,
    pub witness: Option<CaseReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub variant: bool,
    pub hypothesis_filter: bool,
    pub threshold: u32,
    pub patterns: u64,
    pub assignments_checked: u64,
    pub assignments_filtered: u64,
    /// Edges matching two or more red-rule shapes at once (expected 0).
    pub rule_overlaps: u64,
    pub global_max: u32,
    pub witness: CaseReport,
    pub per_case: BTreeMap<CaseLabel, CaseStats>,
}

fn run_claim(variant: bool, filter: bool) -> Result<ClaimSummary> {
    let threshold = if variant {
        VARIANT_THRESHOLD
    } else {
        MAIN_THRESHOLD
    };
    let patterns = enumerate_realizable_patterns(5)?;
    let mut per_case: BTreeMap<CaseLabel, CaseStats> = BTreeMap::new();
    let mut checked = 0u64;
    let mut filtered = 0u64;
    let mut overlaps = 0u64;
    let mut best: Option<(u32, &DeltaPattern, u32)> = None;
    for p in &patterns {
        let values = pattern_values(p)?;
        let r = p.rank_count();
        let label = CaseLabel::of(&values)?;
        let stats = per_case.entry(label).or_default();
        stats.patterns += 1;
        stats.strict_patterns += u64::from(p.is_strict());
        if !variant {
            overlaps += (0..6)
                .filter(|&o| main_shapes_matched(induced_deltas(&values, o)) > 1)
                .count() as u64;
        }
        for mask in 0u32..1 << slot_count(r, variant) {
            if variant && filter && r == 5 && mask.count_ones() > 3 {
                filtered += 1;
                continue;
            }
            checked += 1;
            stats.assignments += 1;
            let red = symbolic_red_mask(&values, r, mask, variant).count_ones();
            if red > threshold {
                return Err(Error::ClaimViolation(Box::new(case_report(
                    p, mask, variant,
                )?)));
            }
            if stats.witness.is_none() || red > stats.max_red {
                stats.max_red = red;
                stats.witness = Some(case_report(p, mask, variant)?);
            }
            if best.is_none_or(|(b, _, _)| red > b) {
                best = Some((red, p, mask));
            }
        }
    }
    let (global_max, wp, wm) =
        best.ok_or_else(|| Error::Pipeline("no patterns enumerated".into()))?;
    Ok(ClaimSummary {
        variant,
        hypothesis_filter: variant && filter,
        threshold,
        patterns: patterns.len() as u64,
        assignments_checked: checked,
        assignments_filtered: filtered,
        rule_overlaps: overlaps,
        global_max,
        witness: case_report(wp, wm, variant)?,
        per_case,
    })
}

/// Every realizable pattern against every pair assignment of its ranks.
///
/// Fails with the first counterexample in enumeration order.
pub fn check_six_point_claim() -> Result<ClaimSummary> {
    run_claim(false, true)
}

/// The variant's bound. With `hypothesis_filter`, assignments putting four or
/// more red quads on five ranks are skipped.
pub fn check_six_point_claim_variant(hypothesis_filter: bool) -> Result<ClaimSummary> {
    run_claim(true, hypothesis_filter)
}

/// Concrete vertices and base coloring reproducing a symbolic case.
pub fn realize_case(
    pattern: &DeltaPattern,
    mask: u32,
    variant: bool,
) -> Result<(Vec<u64>, StepColoring)> {
    let vs = realize_pattern(pattern)?;
    if vs.len() != 6 {
        return Err(Error::Pattern(format!(
            "expected a length-5 pattern, got {pattern}"
        )));
    }
    let r = pattern.rank_count();
    let width = r as u32;
    let sc = if variant {
        let psi = QuadColoring::from_fn(r.max(4) as u32, |q| {
            let inside = (q[3] as usize) < r;
            Color::from_red(inside && mask >> colex_rank(&q.map(|x| x as usize)) & 1 == 1)
        })?;
        StepColoring::variant(psi, width)?
    } else {
        let phi = PairColoring::from_fn(r.max(2) as u32, |a, b| {
            let inside = (b as usize) < r;
            Color::from_red(inside && mask >> pair_slot(r, a as usize, b as usize) & 1 == 1)
        })?;
        StepColoring::main(phi, width)?
    };
    Ok((vs, sc))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayOutcome {
    pub vertices: Vec<u64>,
    pub integer_colors: [Color; 6],
    pub symbolic_colors: [Color; 6],
    pub red_count: u32,
    pub agrees: bool,
}

/// Re-evaluates a case report on actual integers.
pub fn replay_case(report: &CaseReport) -> Result<ReplayOutcome> {
    let (vs, sc) = realize_case(&report.pattern, report.assignment_mask, report.variant)?;
    let mut integer_colors = [Color::Blue; 6];
    for (omit, slot) in integer_colors.iter_mut().enumerate() {
        *slot = sc.color_on_subset(&vs, omit)?;
    }
    let fresh = case_report(&report.pattern, report.assignment_mask, report.variant)?;
    Ok(ReplayOutcome {
        red_count: integer_colors.iter().filter(|c| c.is_red()).count() as u32,
        agrees: integer_colors == fresh.edge_colors && fresh.edge_colors == report.edge_colors,
        vertices: vs,
        integer_colors,
        symbolic_colors: report.edge_colors,
    })
}

/// Base-5 code of a rank sequence, used to index patterns quickly.
#[inline]
fn rank_code(ranks: &[u32; 5]) -> usize {
    ranks.iter().fold(0usize, |acc, &r| acc * 5 + r as usize)
}

/// Precomputed symbolic red masks for every pattern and assignment.
pub struct SymbolicTable {
    by_code: Vec<u32>,
    ranks: Vec<usize>,
    masks: Vec<Vec<u8>>,
}

impl SymbolicTable {
    pub fn build() -> Result<Self> {
        let patterns = enumerate_realizable_patterns(5)?;
        let mut by_code = vec![u32::MAX; 5usize.pow(5)];
        let mut ranks = Vec::new();
        let mut masks = Vec::new();
        for (id, p) in patterns.iter().enumerate() {
            let values = pattern_values(p)?;
            let r = p.rank_count();
            by_code[rank_code(&values)] = id as u32;
            ranks.push(r);
            masks.push(
                (0u32..1 << slot_count(r, false))
                    .map(|m| symbolic_red_mask(&values, r, m, false))
                    .collect(),
            );
        }
        Ok(Self {
            by_code,
            ranks,
            masks,
        })
    }

    /// Red-edge mask predicted for raw deltas `d` under `phi`.
    #[inline]
    pub fn predict(&self, d: &[u32; 5], phi: &PairColoring) -> Option<u8> {
        let mut distinct = *d;
        distinct.sort_unstable();
        let mut uniq = [0u32; 5];
        let mut r = 0;
        for &x in &distinct {
            if r == 0 || uniq[r - 1] != x {
                uniq[r] = x;
                r += 1;
            }
        }
        let ranks = d.map(|x| uniq[..r].iter().position(|&u| u == x).unwrap_or(0) as u32);
        let id = *self.by_code.get(rank_code(&ranks))?;
        if id == u32::MAX || self.ranks[id as usize] != r {
            return None;
        }
        let mut mask = 0u32;
        for x in 0..r {
            for y in x + 1..r {
                if phi.is_red(uniq[x], uniq[y]) {
                    mask |= 1 << pair_slot(r, x, y);
                }
            }
        }
        Some(self.masks[id as usize][mask as usize])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerCheckReport {
    pub bit_width: u32,
    pub subsets: u64,
    pub max_red: u32,
    pub witness: Vec<u64>,
    pub mismatches: u64,
    pub first_mismatch: Option<Vec<u64>>,
    pub holds: bool,
}

#[derive(Default)]
struct ScanAcc {
    subsets: u64,
    max_red: u32,
    witness: Option<[u64; 6]>,
    mismatches: u64,
    first_mismatch: Option<[u64; 6]>,
}

fn lex_less(a: &[u64; 6], b: &Option<[u64; 6]>) -> bool {
    b.as_ref().is_none_or(|b| a < b)
}

impl ScanAcc {
    fn merge(mut self, o: ScanAcc) -> ScanAcc {
        self.subsets += o.subsets;
        self.mismatches += o.mismatches;
        if let Some(w) = o.witness {
            if o.max_red > self.max_red
                || (o.max_red == self.max_red && lex_less(&w, &self.witness))
            {
                self.max_red = o.max_red;
                self.witness = Some(w);
            }
        }
        if let Some(m) = o.first_mismatch {
            if lex_less(&m, &self.first_mismatch) {
                self.first_mismatch = Some(m);
            }
        }
        self
    }
}

/// Scans every 6-subset of `{0,..,2^B-1}` and compares the colors computed on
/// the integers with the symbolic table.
pub fn integer_cross_check(
    bit_width: u32,
    phi: &PairColoring,
    budget: u128,
    workers: usize,
) -> Result<IntegerCheckReport> {
    if !(3..=7).contains(&bit_width) {
        return Err(Error::Resource(format!(
            "integer cross-check supports bit widths 3..=7, got {bit_width}"
        )));
    }
    let n = 1usize << bit_width;
    let total = binomial(n as u64, 6);
    if total > budget {
        return Err(Error::Resource(format!(
            "C({n}, 6) = {total} subsets exceed budget {budget}"
        )));
    }
    let sc = StepColoring::main(phi.clone(), bit_width)?;
    let table = SymbolicTable::build()?;
    let ranges = partition_ranges(total, workers.max(1) * 16);
    let acc = with_workers(workers, || {
        ranges
            .par_iter()
            .map(|&(s, e)| {
                let mut acc = ScanAcc::default();
                for_each_colex_in_range(n, 6, s, e, |c| {
                    let vs: [u64; 6] = std::array::from_fn(|i| c[i] as u64);
                    let d: [u32; 5] =
                        std::array::from_fn(|i| 63 - (vs[i] ^ vs[i + 1]).leading_zeros());
                    let mut red = 0u8;
                    for omit in 0..6 {
                        if sc.color_deltas_unchecked(induced_deltas(&d, omit)).is_red() {
                            red |= 1 << omit;
                        }
                    }
                    acc.subsets += 1;
                    if table.predict(&d, phi) != Some(red) {
                        acc.mismatches += 1;
                        if lex_less(&vs, &acc.first_mismatch) {
                            acc.first_mismatch = Some(vs);
                        }
                    }
                    let count = red.count_ones();
                    if acc.witness.is_none()
                        || count > acc.max_red
                        || (count == acc.max_red && lex_less(&vs, &acc.witness))
                    {
                        acc.max_red = count;
                        acc.witness = Some(vs);
                    }
                });
                acc
            })
            .reduce(ScanAcc::default, ScanAcc::merge)
    });
    Ok(IntegerCheckReport {
        bit_width,
        subsets: acc.subsets,
        max_red: acc.max_red,
        witness: acc.witness.map(|w| w.to_vec()).unwrap_or_default(),
        mismatches: acc.mismatches,
        first_mismatch: acc.first_mismatch.map(|w| w.to_vec()),
        holds: acc.max_red <= MAIN_THRESHOLD && acc.mismatches == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(r: &[u8]) -> DeltaPattern {
        DeltaPattern::new(r.to_vec()).unwrap()
    }

    #[test]
    fn labels_cover_sign_strings() {
        assert_eq!(CaseLabel::of(&[3, 1, 4, 0, 2]).unwrap(), CaseLabel::C1a);
        assert_eq!(CaseLabel::of(&[4, 3, 2, 1, 0]).unwrap(), CaseLabel::C8a);
        assert_eq!(CaseLabel::of(&[0, 1, 2, 3, 4]).unwrap(), CaseLabel::C8b);
        assert_eq!(CaseLabel::C4a.to_string(), "4a");
        let mut all: Vec<&str> = CaseLabel::ALL.iter().map(|c| c.signs()).collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 16);
    }

    #[test]
    fn end_edges_are_restrictions() {
        let e = induced_edge_patterns(&pat(&[0, 1, 2, 3, 4])).unwrap();
        assert_eq!(e[0], pat(&[0, 1, 2, 3]));
        assert_eq!(e[5], pat(&[0, 1, 2, 3]));
        assert!(matches!(
            induced_edge_patterns(&pat(&[1, 0, 1, 0, 2])),
            Err(Error::Realizability(_))
        ));
    }

    #[test]
    fn zigzag_has_equal_second_and_third_edges() {
        // d1 > d2 < d3 > d4 < d5
        let e = induced_edge_patterns(&pat(&[3, 1, 4, 0, 2])).unwrap();
        assert_eq!(e[1], e[2]);
    }

    #[test]
    fn slots_are_dense() {
        let r = 5;
        let mut seen = [false; 10];
        for x in 0..r {
            for y in x + 1..r {
                seen[pair_slot(r, x, y)] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}
