//! Turning a purported blue clique into a checkable contradiction.
//!
//! The pipeline narrows the delta sequence of the clique down to local
//! maxima, then to alternating extrema of those maxima, and finally to a
//! dominant peak whose neighbouring minima carry an A/B/C structure in the
//! base coloring. Every step that could fail instead exposes either a red
//! 5-tuple or a monotone run, both of which are certificates as well.

mod certificate;
mod pipeline;
pub mod planted;

pub use certificate::{
    verify_certificate, AbcRealization, Branch, Origin, TupleRealization, ViolationCertificate,
    Witness, CERTIFICATE_SCHEMA_VERSION,
};
pub use pipeline::{build_abc_witness, PipelineParams};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// First `j` such that `seq[j..j + len]` is strictly monotone.
pub fn find_monotone_run<T: Ord>(seq: &[T], len: usize) -> Option<usize> {
    if len <= 1 {
        return (seq.len() >= len).then_some(0);
    }
    if seq.len() < len {
        return None;
    }
    // length of the monotone run of each kind ending at i
    let (mut up, mut down) = (1usize, 1usize);
    for i in 1..seq.len() {
        up = if seq[i] > seq[i - 1] { up + 1 } else { 1 };
        down = if seq[i] < seq[i - 1] { down + 1 } else { 1 };
        if up >= len || down >= len {
            return Some(i + 1 - len);
        }
    }
    None
}

/// Interior local maxima and minima, by position.
pub fn local_extrema<T: Ord + std::fmt::Debug>(seq: &[T]) -> Result<(Vec<usize>, Vec<usize>)> {
    if let Some(i) = seq.windows(2).position(|w| w[0] == w[1]) {
        return Err(Error::Pattern(format!(
            "entries {i} and {} are equal ({:?})",
            i + 1,
            seq[i]
        )));
    }
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for j in 1..seq.len().saturating_sub(1) {
        if seq[j - 1] < seq[j] && seq[j] > seq[j + 1] {
            maxima.push(j);
        } else if seq[j - 1] > seq[j] && seq[j] < seq[j + 1] {
            minima.push(j);
        }
    }
    Ok((maxima, minima))
}

/// One round of the dominant-peak search.
///
/// Positions here are 1-based, with `sigma = 0` and `tau = len + 1` as the
/// empty sentinels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakSearchState {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub sigma: usize,
    pub tau: usize,
    pub round: usize,
}

impl PeakSearchState {
    fn initial(len: usize) -> Self {
        Self {
            s: Vec::new(),
            t: Vec::new(),
            sigma: 0,
            tau: len + 1,
            round: 0,
        }
    }

    /// The three invariants of the construction against `vals` (0-based storage).
    pub fn check<T: Ord>(&self, vals: &[T], n: usize) -> Result<()> {
        let len = vals.len();
        let at = |p: usize| &vals[p - 1];
        let fail = |what: &str| {
            Err(Error::Pipeline(format!(
                "peak search invariant ({what}) broken at round {}: {self:?}",
                self.round
            )))
        };
        let sigma = self.s.iter().copied().max().unwrap_or(0);
        let tau = self.t.iter().copied().min().unwrap_or(len + 1);
        if sigma != self.sigma || tau != self.tau {
            return fail("sentinels");
        }
        for &s in &self.s {
            if (s + 1..self.tau).any(|l| at(l) >= at(s)) {
                return fail("S domination");
            }
        }
        for &t in &self.t {
            if (self.sigma + 1..t).any(|l| at(l) >= at(t)) {
                return fail("T domination");
            }
        }
        let gap = self.tau as i64 - self.sigma as i64;
        let bound = (16 * n * n) as i64 - (4 * n * self.round) as i64;
        if self.s.len() + self.t.len() != self.round || gap < bound {
            return fail("size");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PeakOutcome {
    /// 0-based position strictly above everything within distance `4n`.
    Peak { index: usize },
    /// 0-based positions, left to right, with strictly decreasing values.
    DecreasingChain { indices: Vec<usize> },
    /// 0-based positions, left to right, with strictly increasing values.
    IncreasingChain { indices: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakSearch {
    pub outcome: PeakOutcome,
    /// State after every round, starting with the empty state.
    pub states: Vec<PeakSearchState>,
}

/// Dominant peak of radius `4n` in a sequence of `16n^2` distinct values, or a
/// monotone chain of length `n`.
pub fn find_dominant_peak<T: Ord + Clone>(vals: &[T], n: usize) -> Result<PeakSearch> {
    find_dominant_peak_with(vals, n, n)
}

/// As [`find_dominant_peak`] with the chain length chosen separately.
///
/// Rounds continue past `2n` until a peak appears or the open interval
/// between the sentinels is empty, so a peak is reported exactly when one
/// exists.
pub fn find_dominant_peak_with<T: Ord + Clone>(
    vals: &[T],
    n: usize,
    chain_len: usize,
) -> Result<PeakSearch> {
    if n == 0 || vals.len() != 16 * n * n {
        return Err(Error::Precondition(format!(
            "need exactly 16n^2 = {} values, got {}",
            16 * n * n,
            vals.len()
        )));
    }
    let mut sorted: Vec<&T> = vals.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition(
            "values must be pairwise distinct".into(),
        ));
    }
    let radius = 4 * n;
    let mut state = PeakSearchState::initial(vals.len());
    state.check(vals, n)?;
    let mut states = vec![state.clone()];
    while state.sigma + 1 < state.tau {
        let k = (state.sigma + 1..state.tau)
            .max_by(|&a, &b| vals[a - 1].cmp(&vals[b - 1]))
            .expect("non-empty interval");
        if k - state.sigma > radius && state.tau - k > radius {
            return Ok(PeakSearch {
                outcome: PeakOutcome::Peak { index: k - 1 },
                states,
            });
        }
        if k - state.sigma <= radius {
            state.s.push(k);
            state.sigma = k;
        } else {
            state.t.push(k);
            state.tau = k;
        }
        state.round += 1;
        state.check(vals, n)?;
        states.push(state.clone());
    }
    let outcome = if state.s.len() >= chain_len {
        PeakOutcome::DecreasingChain {
            indices: state.s[..chain_len].iter().map(|p| p - 1).collect(),
        }
    } else if state.t.len() >= chain_len {
        let mut t: Vec<usize> = state.t.iter().map(|p| p - 1).collect();
        t.sort_unstable();
        t.truncate(chain_len);
        PeakOutcome::IncreasingChain { indices: t }
    } else {
        return Err(Error::Size(format!(
            "no dominant peak and neither chain reaches length {chain_len} (|S| = {}, |T| = {})",
            state.s.len(),
            state.t.len()
        )));
    };
    Ok(PeakSearch { outcome, states })
}
