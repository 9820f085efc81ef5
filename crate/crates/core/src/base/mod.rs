//! The base pair coloring, its two avoidance properties and the counting
//! tools used to size its ground set.

mod bounds;
mod lemma;
mod pair;
mod steiner;

pub use bounds::{expected_counts, steiner_block_count, ExpectedCounts, BAD_TUPLE_PROBABILITY};
pub(crate) use lemma::is_bad_unchecked;
pub use lemma::{
    count_bad_4tuples, find_abc_structure, find_bad4_free_nset, generate_phi, is_bad_4tuple,
    AbcWitness, AttemptLog, GeneratedPhi, DEFAULT_ENUMERATION_BUDGET,
};
pub use pair::{pair_count, random_pair_coloring, Color, PairColoring, PHI_MAGIC, PHI_VERSION};
pub use steiner::{greedy_partial_steiner, SteinerSystem};
