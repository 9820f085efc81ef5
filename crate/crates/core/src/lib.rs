//! Stepping-up constructions for 5-uniform hypergraph Ramsey colorings.
//!
//! * [`delta`]: the most-significant-differing-bit function and its patterns.
//! * [`base`]: the random pair coloring of the base ground set and its checks.
//! * [`stepup`]: the stepped-up colorings themselves.
//! * [`proofcheck`]: exhaustive symbolic verification of the red-edge bounds.
//! * [`extrema`]: blue-clique refutation producing replayable certificates.
//! * [`cliquesearch`]: brute-force searches on concrete vertex sets.

pub mod base;
pub mod cliquesearch;
pub mod combinatorics;
pub mod delta;
pub mod error;
pub mod extrema;
pub mod proofcheck;
pub mod stepup;

pub use base::{Color, PairColoring};
pub use delta::{DeltaPattern, DeltaVertex};
pub use error::{Error, Result};
pub use extrema::{PeakSearchState, ViolationCertificate};
pub use stepup::{QuadColoring, RuleMatch, RuleSet, StepColoring};

/// Versions of the on-disk and JSON formats.
pub const FORMAT_VERSIONS: &str = "PHI1 v1, PSI1, certificate schema v1";
