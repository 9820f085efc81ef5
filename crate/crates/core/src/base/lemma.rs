//! The two avoidance properties the base coloring must have, their exhaustive
//! searches, and the rejection sampler built on top of them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pair::PairColoring;
use crate::combinatorics::{binomial, for_each_lex_subset, next_lex};
use crate::error::{Error, Result};

/// Default cap on enumerated candidates for the searches in this module.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 2_000_000_000;

/// `a < b < c < d` with `ab, bc, bd` red and `ac, ad, cd` blue.
#[inline]
pub(crate) fn is_bad_unchecked(phi: &PairColoring, a: u32, b: u32, c: u32, d: u32) -> bool {
    phi.is_red(a, b)
        && phi.is_red(b, c)
        && phi.is_red(b, d)
        && !phi.is_red(a, c)
        && !phi.is_red(a, d)
        && !phi.is_red(c, d)
}

pub fn is_bad_4tuple(phi: &PairColoring, quad: [u32; 4]) -> Result<bool> {
    if quad.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Order(format!(
            "4-tuple {quad:?} must be strictly increasing"
        )));
    }
    if quad[3] >= phi.ground_size() {
        return Err(Error::BaseRange {
            value: quad[3],
            ground_size: phi.ground_size(),
        });
    }
    Ok(is_bad_unchecked(phi, quad[0], quad[1], quad[2], quad[3]))
}

/// Number of bad 4-tuples, walking all 4-subsets.
pub fn count_bad_4tuples(phi: &PairColoring) -> u64 {
    let m = phi.ground_size() as usize;
    let mut count = 0;
    for_each_lex_subset(m, 4, |q| {
        if is_bad_unchecked(phi, q[0] as u32, q[1] as u32, q[2] as u32, q[3] as u32) {
            count += 1;
        }
    });
    count
}

fn creates_bad(phi: &PairColoring, set: &[u32], x: u32) -> bool {
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            for k in j + 1..set.len() {
                if is_bad_unchecked(phi, set[i], set[j], set[k], x) {
                    return true;
                }
            }
        }
    }
    false
}

fn extend_free(phi: &PairColoring, n: usize, set: &mut Vec<u32>) -> bool {
    if set.len() == n {
        return true;
    }
    let m = phi.ground_size();
    let need = (n - set.len()) as u32;
    let from = set.last().map_or(0, |&x| x + 1);
    for x in from..=m - need {
        if creates_bad(phi, set, x) {
            continue;
        }
        set.push(x);
        if extend_free(phi, n, set) {
            return true;
        }
        set.pop();
    }
    false
}

/// Lexicographically least `n`-set all of whose 4-subsets are good.
///
/// `None` certifies that every `n`-set contains a bad 4-tuple.
pub fn find_bad4_free_nset(phi: &PairColoring, n: usize, budget: u128) -> Result<Option<Vec<u32>>> {
    let m = phi.ground_size();
    if n as u64 > u64::from(m) {
        return Err(Error::Precondition(format!("n = {n} exceeds M = {m}")));
    }
    let space = binomial(u64::from(m), n as u64);
    if space > budget {
        return Err(Error::Resource(format!(
            "C({m}, {n}) = {space} candidate sets exceed budget {budget}"
        )));
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let hit = (0..=m - n as u32).into_par_iter().find_map_first(|first| {
        let mut set = vec![first];
        extend_free(phi, n, &mut set).then_some(set)
    });
    Ok(hit)
}

/// Three disjoint `n`-sets with a bijection `f: B -> C` such that every
/// `a in A`, `b in B` has `ab` red or `a f(b)` blue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbcWitness {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
    /// `(b, f(b))` pairs in the order of `b`.
    pub f: Vec<(u32, u32)>,
}

impl AbcWitness {
    /// Sizes, disjointness and bijectivity of `f`.
    pub fn check_structure(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::Certificate(msg));
        if self.a.len() != n || self.b.len() != n || self.c.len() != n || self.f.len() != n {
            return bad(format!("A, B, C and f must all have size {n}"));
        }
        let mut all: Vec<u32> = self
            .a
            .iter()
            .chain(&self.b)
            .chain(&self.c)
            .copied()
            .collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return bad("A, B, C are not pairwise disjoint sets".into());
        }
        let mut dom: Vec<u32> = self.f.iter().map(|p| p.0).collect();
        let mut img: Vec<u32> = self.f.iter().map(|p| p.1).collect();
        dom.sort_unstable();
        img.sort_unstable();
        let mut b = self.b.clone();
        let mut c = self.c.clone();
        b.sort_unstable();
        c.sort_unstable();
        if dom != b || img != c {
            return bad("f is not a bijection from B onto C".into());
        }
        Ok(())
    }

    pub fn satisfies_disjunction(&self, phi: &PairColoring) -> bool {
        self.a.iter().all(|&a| {
            self.f
                .iter()
                .all(|&(b, fb)| phi.is_red(a, b) || !phi.is_red(a, fb))
        })
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn search_for_a(phi: &PairColoring, n: usize, a: &[u32]) -> Option<AbcWitness> {
    let m = phi.ground_size();
    let rest_b: Vec<u32> = (0..m).filter(|x| !a.contains(x)).collect();
    let mut bi: Vec<usize> = (0..n).collect();
    loop {
        let b: Vec<u32> = bi.iter().map(|&i| rest_b[i]).collect();
        // valid[i][c]: c may serve as f(b_i)
        let valid: Vec<Vec<bool>> = b
            .iter()
            .map(|&bv| {
                (0..m)
                    .map(|c| {
                        a.iter()
                            .all(|&av| phi.is_red(av, bv) || (c != av && !phi.is_red(av, c)))
                    })
                    .collect()
            })
            .collect();
        let rest_c: Vec<u32> = rest_b
            .iter()
            .copied()
            .filter(|x| !b.contains(x) && valid.iter().any(|row| row[*x as usize]))
            .collect();
        if rest_c.len() >= n {
            let mut ci: Vec<usize> = (0..n).collect();
            loop {
                let c: Vec<u32> = ci.iter().map(|&i| rest_c[i]).collect();
                let mut perm: Vec<usize> = (0..n).collect();
                loop {
                    if (0..n).all(|i| valid[i][c[perm[i]] as usize]) {
                        return Some(AbcWitness {
                            a: a.to_vec(),
                            f: (0..n).map(|i| (b[i], c[perm[i]])).collect(),
                            b,
                            c,
                        });
                    }
                    if !next_permutation(&mut perm) {
                        break;
                    }
                }
                if !next_lex(&mut ci, rest_c.len()) {
                    break;
                }
            }
        }
        if !next_lex(&mut bi, rest_b.len()) {
            return None;
        }
    }
}

/// Lexicographically least `(A, B, C, f)` witness, or `None` when the
/// property holds at this scale. Fewer than `3n` points admit no witness.
pub fn find_abc_structure(
    phi: &PairColoring,
    n: usize,
    budget: u128,
) -> Result<Option<AbcWitness>> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let m = phi.ground_size();
    if 3 * n as u64 > u64::from(m) {
        return Ok(None);
    }
    let per_set = binomial(u64::from(m), n as u64);
    let fact: u128 = (1..=n as u128).product();
    let space = per_set
        .saturating_mul(per_set)
        .saturating_mul(per_set)
        .saturating_mul(fact);
    if space > budget {
        return Err(Error::Resource(format!(
            "C({m},{n})^3 * {n}! = {space} candidates exceed budget {budget}"
        )));
    }
    let mut a_sets = Vec::new();
    for_each_lex_subset(m as usize, n, |s| {
        a_sets.push(s.iter().map(|&x| x as u32).collect::<Vec<u32>>())
    });
    Ok(a_sets
        .par_iter()
        .find_map_first(|a| search_for_a(phi, n, a)))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptLog {
    pub attempts: u64,
    pub rejected_bad4_free: u64,
    pub rejected_abc: u64,
}

#[derive(Clone, Debug)]
pub struct GeneratedPhi {
    pub phi: PairColoring,
    pub log: AttemptLog,
}

/// Samples colorings from one seeded stream until both searches come back
/// empty. Running out of attempts says nothing about the lemma itself.
pub fn generate_phi(
    n: usize,
    m: u32,
    seed: u64,
    max_attempts: u64,
    budget: u128,
) -> Result<GeneratedPhi> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = AttemptLog::default();
    while log.attempts < max_attempts {
        log.attempts += 1;
        let phi = PairColoring::random_from_rng(m, &mut rng)?.with_seed(Some(seed));
        if find_bad4_free_nset(&phi, n, budget)?.is_some() {
            log.rejected_bad4_free += 1;
            continue;
        }
        if find_abc_structure(&phi, n, budget)?.is_some() {
            log.rejected_abc += 1;
            continue;
        }
        return Ok(GeneratedPhi { phi, log });
    }
    Err(Error::SearchExhausted {
        attempts: log.attempts,
        note: format!(
            "inconclusive at n = {n}, M = {m}: {} samples had a bad-4-free {n}-set, {} had an A/B/C structure",
            log.rejected_bad4_free, log.rejected_abc
        ),
    })
}
