//! The most-significant-differing-bit function on vertices and the weak-order
//! patterns of delta sequences.
//!
//! For `u < v` write `delta(u, v)` for the highest bit position where the two
//! binary expansions differ. Along an increasing vertex list the consecutive
//! deltas never repeat adjacently, the delta of any two list members is the
//! maximum over the gap between them, and a delta sequence is produced by some
//! increasing list exactly when every contiguous window has a unique maximum.
//! The last fact is what makes the symbolic enumeration in
//! [`crate::proofcheck`] exhaustive.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest pattern length accepted by [`enumerate_realizable_patterns`].
pub const MAX_PATTERN_LEN: usize = 8;

/// A vertex of the stepped-up ground set, read through its binary digits.
pub trait DeltaVertex: Ord + Clone + fmt::Debug + Send + Sync {
    /// Highest bit position where `self` and `other` differ, `None` if equal.
    fn highest_differing_bit(&self, other: &Self) -> Option<u32>;

    /// Number of significant bits (`0` for zero).
    fn bit_length(&self) -> u64;

    fn to_wide(&self) -> BigUint;
}

impl DeltaVertex for u64 {
    #[inline]
    fn highest_differing_bit(&self, other: &Self) -> Option<u32> {
        let x = self ^ other;
        (x != 0).then(|| 63 - x.leading_zeros())
    }

    fn bit_length(&self) -> u64 {
        u64::from(64 - self.leading_zeros())
    }

    fn to_wide(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl DeltaVertex for u128 {
    #[inline]
    fn highest_differing_bit(&self, other: &Self) -> Option<u32> {
        let x = self ^ other;
        (x != 0).then(|| 127 - x.leading_zeros())
    }

    fn bit_length(&self) -> u64 {
        u64::from(128 - self.leading_zeros())
    }

    fn to_wide(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl DeltaVertex for BigUint {
    fn highest_differing_bit(&self, other: &Self) -> Option<u32> {
        let x = self ^ other;
        if x.is_zero() {
            None
        } else {
            Some((x.bits() - 1) as u32)
        }
    }

    fn bit_length(&self) -> u64 {
        self.bits()
    }

    fn to_wide(&self) -> BigUint {
        self.clone()
    }
}

pub fn delta<V: DeltaVertex>(u: &V, v: &V) -> Result<u32> {
    u.highest_differing_bit(v)
        .ok_or_else(|| Error::Distinctness(format!("{u:?}")))
}

fn check_increasing<V: DeltaVertex>(vs: &[V]) -> Result<()> {
    for (i, w) in vs.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(Error::Order(format!(
                "vertices at positions {i} and {} are not strictly increasing",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Consecutive deltas of a strictly increasing list (length `vs.len() - 1`).
pub fn raw_deltas<V: DeltaVertex>(vs: &[V]) -> Result<Vec<u32>> {
    if vs.len() < 2 {
        return Err(Error::Order(format!(
            "need at least 2 vertices, got {}",
            vs.len()
        )));
    }
    check_increasing(vs)?;
    vs.windows(2).map(|w| delta(&w[0], &w[1])).collect()
}

/// A weak ordering of a delta sequence in rank-compressed form.
///
/// The ranks used are exactly `0..rank_count()` and adjacent entries differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct DeltaPattern {
    ranks: Vec<u8>,
}

impl DeltaPattern {
    pub fn new(ranks: Vec<u8>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Pattern("empty pattern".into()));
        }
        if let Some(i) = ranks.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::Pattern(format!(
                "adjacent entries {i} and {} tie in {ranks:?}",
                i + 1
            )));
        }
        let top = *ranks.iter().max().unwrap_or(&0) as usize;
        let mut used = vec![false; top + 1];
        for &r in &ranks {
            used[r as usize] = true;
        }
        if used.iter().any(|u| !u) {
            return Err(Error::Pattern(format!("{ranks:?} skips a rank")));
        }
        Ok(Self { ranks })
    }

    /// Rank-compresses arbitrary values (ties kept).
    pub fn from_values(values: &[u32]) -> Result<Self> {
        let mut sorted: Vec<u32> = values.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() > u8::MAX as usize {
            return Err(Error::Resource(format!(
                "{} distinct values exceed the pattern rank range",
                sorted.len()
            )));
        }
        let ranks = values
            .iter()
            .map(|v| sorted.binary_search(v).unwrap_or_default() as u8)
            .collect();
        Self::new(ranks)
    }

    pub fn ranks(&self) -> &[u8] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank_count(&self) -> usize {
        self.ranks.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// True when all entries are distinct (a total order).
    pub fn is_strict(&self) -> bool {
        self.rank_count() == self.len()
    }

    pub fn values(&self) -> Vec<u32> {
        self.ranks.iter().map(|&r| u32::from(r)).collect()
    }
}

impl TryFrom<Vec<u8>> for DeltaPattern {
    type Error = Error;

    fn try_from(ranks: Vec<u8>) -> Result<Self> {
        Self::new(ranks)
    }
}

impl From<DeltaPattern> for Vec<u8> {
    fn from(p: DeltaPattern) -> Self {
        p.ranks
    }
}

impl fmt::Display for DeltaPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.ranks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSequence {
    pub raw: Vec<u32>,
    pub pattern: DeltaPattern,
}

pub fn delta_sequence<V: DeltaVertex>(vs: &[V]) -> Result<DeltaSequence> {
    let raw = raw_deltas(vs)?;
    let pattern = DeltaPattern::from_values(&raw)?;
    Ok(DeltaSequence { raw, pattern })
}

/// `delta(vs[i], vs[j])` computed as the maximum consecutive delta over the gap.
pub fn merged_delta<V: DeltaVertex>(vs: &[V], i: usize, j: usize) -> Result<u32> {
    if i >= j {
        return Err(Error::Order(format!(
            "merged_delta needs i < j, got ({i}, {j})"
        )));
    }
    if j >= vs.len() {
        return Err(Error::Precondition(format!(
            "index {j} out of bounds for {} vertices",
            vs.len()
        )));
    }
    check_increasing(&vs[i..=j])?;
    vs[i..=j]
        .windows(2)
        .map(|w| delta(&w[0], &w[1]))
        .try_fold(0u32, |acc, d| d.map(|d| acc.max(d)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeltaProperty {
    /// Adjacent deltas differ.
    I,
    /// The delta of a span is the maximum consecutive delta inside it.
    II,
    /// A drop after the first gap forbids equality of the first and third gaps.
    III,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyViolation {
    pub property: DeltaProperty,
    /// Positions in the vertex list.
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub passed: bool,
    pub violation: Option<PropertyViolation>,
}

impl PropertyReport {
    fn fail(property: DeltaProperty, indices: Vec<usize>) -> Self {
        Self {
            passed: false,
            violation: Some(PropertyViolation { property, indices }),
        }
    }
}

pub fn verify_delta_properties<V: DeltaVertex>(vs: &[V]) -> Result<PropertyReport> {
    let raw = raw_deltas(vs)?;
    verify_delta_report(vs, &raw)
}

/// Checks a claimed consecutive-delta report against the vertices themselves.
pub fn verify_delta_report<V: DeltaVertex>(vs: &[V], raw: &[u32]) -> Result<PropertyReport> {
    check_increasing(vs)?;
    if raw.len() + 1 != vs.len() {
        return Err(Error::Precondition(format!(
            "report has {} deltas for {} vertices",
            raw.len(),
            vs.len()
        )));
    }
    let n = vs.len();
    // pairwise table from the vertices, independent of the report
    let mut table = vec![0u32; n * n];
    for i in 0..n {
        for j in i + 1..n {
            table[i * n + j] = delta(&vs[i], &vs[j])?;
        }
    }
    let d = |i: usize, j: usize| table[i * n + j];

    for i in 0..raw.len().saturating_sub(1) {
        if raw[i] == raw[i + 1] {
            return Ok(PropertyReport::fail(
                DeltaProperty::I,
                vec![i, i + 1, i + 2],
            ));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if d(i, j) == d(j, k) {
                    return Ok(PropertyReport::fail(DeltaProperty::I, vec![i, j, k]));
                }
            }
        }
    }
    for i in 0..n {
        let mut running = 0u32;
        for j in i + 1..n {
            running = running.max(raw[j - 1]);
            if d(i, j) != running {
                return Ok(PropertyReport::fail(DeltaProperty::II, vec![i, j]));
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if d(a, b) <= d(b, c) {
                    continue;
                }
                for e in c + 1..n {
                    if d(a, b) == d(c, e) {
                        return Ok(PropertyReport::fail(DeltaProperty::III, vec![a, b, c, e]));
                    }
                }
            }
        }
    }
    Ok(PropertyReport {
        passed: true,
        violation: None,
    })
}

/// Every contiguous window attains its maximum exactly once.
pub fn windows_have_unique_max(values: &[u32]) -> bool {
    for start in 0..values.len() {
        let mut max = values[start];
        let mut count = 1usize;
        for &v in &values[start + 1..] {
            if v > max {
                max = v;
                count = 1;
            } else if v == max {
                count += 1;
            }
            if count > 1 {
                return false;
            }
        }
    }
    true
}

pub fn is_realizable(p: &DeltaPattern) -> bool {
    windows_have_unique_max(&p.values())
}

/// All canonical realizable patterns of length `len`, in lexicographic order.
pub fn enumerate_realizable_patterns(len: usize) -> Result<Vec<DeltaPattern>> {
    if len == 0 || len > MAX_PATTERN_LEN {
        return Err(Error::Resource(format!(
            "pattern length {len} outside 1..={MAX_PATTERN_LEN}"
        )));
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    extend_patterns(len, &mut cur, &mut out);
    Ok(out)
}

fn extend_patterns(len: usize, cur: &mut Vec<u8>, out: &mut Vec<DeltaPattern>) {
    if cur.len() == len {
        // canonical iff surjective onto 0..r
        if let Ok(p) = DeltaPattern::new(cur.clone()) {
            out.push(p);
        }
        return;
    }
    for x in 0..len as u8 {
        if cur.last() == Some(&x) {
            continue;
        }
        // only windows ending at the new entry can break uniqueness
        let mut max = x;
        let mut count = 1;
        let mut ok = true;
        for &y in cur.iter().rev() {
            if y > max {
                max = y;
                count = 1;
            } else if y == max {
                count += 1;
                if count > 1 {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        cur.push(x);
        extend_patterns(len, cur, out);
        cur.pop();
    }
}

/// Greedy realization: each step sets bit `d` and clears everything below it.
///
/// Fails exactly when bit `d` is already set, i.e. when an earlier equal delta
/// is not separated from this one by a larger delta.
fn realize_greedy(raw: &[u32]) -> Option<Vec<BigUint>> {
    let mut out = Vec::with_capacity(raw.len() + 1);
    let mut v = BigUint::zero();
    out.push(v.clone());
    for &d in raw {
        if v.bit(u64::from(d)) {
            return None;
        }
        v = ((v >> d) | BigUint::from(1u8)) << d;
        out.push(v.clone());
    }
    Some(out)
}

/// A strictly increasing list whose consecutive deltas are exactly `raw`.
pub fn realize_deltas(raw: &[u32]) -> Result<Vec<BigUint>> {
    realize_greedy(raw).ok_or_else(|| {
        Error::Realizability(
            DeltaPattern::from_values(raw)
                .map(Vec::from)
                .unwrap_or_default(),
        )
    })
}

/// Small vertices realizing `p`, using bit positions equal to the ranks.
pub fn realize_pattern(p: &DeltaPattern) -> Result<Vec<u64>> {
    let wide =
        realize_greedy(&p.values()).ok_or_else(|| Error::Realizability(p.ranks().to_vec()))?;
    Ok(wide
        .iter()
        .map(|v| v.iter_u64_digits().next().unwrap_or(0))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

pub fn monotone_direction(raw: &[u32]) -> Option<Direction> {
    if raw.windows(2).all(|w| w[0] < w[1]) {
        Some(Direction::Increasing)
    } else if raw.windows(2).all(|w| w[0] > w[1]) {
        Some(Direction::Decreasing)
    } else {
        None
    }
}

/// Vertex positions whose consecutive deltas are `raw[picks[0]], raw[picks[1]], ..`.
///
/// Increasing runs take the left end of the first pick followed by the right
/// ends of every pick; decreasing runs take left ends followed by the right end
/// of the last pick.
pub fn subsequence_indices(raw: &[u32], picks: &[usize]) -> Result<Vec<usize>> {
    let dir = monotone_direction(raw)
        .ok_or_else(|| Error::Precondition("delta sequence is not strictly monotone".into()))?;
    if picks.is_empty() {
        return Err(Error::Precondition("no deltas picked".into()));
    }
    if picks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "picks must be strictly increasing".into(),
        ));
    }
    if *picks.last().unwrap_or(&0) >= raw.len() {
        return Err(Error::Precondition(
            "pick outside the delta sequence".into(),
        ));
    }
    let mut out = Vec::with_capacity(picks.len() + 1);
    match dir {
        Direction::Increasing => {
            out.push(picks[0]);
            out.extend(picks.iter().map(|&p| p + 1));
        }
        Direction::Decreasing => {
            out.extend_from_slice(picks);
            out.push(picks[picks.len() - 1] + 1);
        }
    }
    Ok(out)
}

pub fn subsequence_vertices<V: DeltaVertex>(vs: &[V], picks: &[usize]) -> Result<Vec<V>> {
    let raw = raw_deltas(vs)?;
    Ok(subsequence_indices(&raw, picks)?
        .into_iter()
        .map(|i| vs[i].clone())
        .collect())
}
