//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

pub mod certs;

use std::collections::BTreeSet;

use stepup_core::PairColoring;

/// Highest differing bit, recomputed bit by bit.
pub fn slow_delta(u: u64, v: u64) -> u32 {
    (0..64)
        .rev()
        .find(|&i| (u >> i) & 1 != (v >> i) & 1)
        .expect("distinct")
}

/// Rank-compress a sequence of values.
pub fn compress(vals: &[u32]) -> Vec<u8> {
    let set: BTreeSet<u32> = vals.iter().copied().collect();
    let order: Vec<u32> = set.into_iter().collect();
    vals.iter()
        .map(|v| order.iter().position(|o| o == v).unwrap() as u8)
        .collect()
}

/// Patterns realized by all increasing `(len+1)`-tuples from `{0,..,2^len - 1}`.
pub fn brute_patterns(len: usize) -> BTreeSet<Vec<u8>> {
    let top = 1u64 << len;
    let mut out = BTreeSet::new();
    let mut cur: Vec<u64> = (0..=len as u64).collect();
    loop {
        let d: Vec<u32> = cur.windows(2).map(|w| slow_delta(w[0], w[1])).collect();
        out.insert(compress(&d));
        // lexicographic successor
        let k = cur.len();
        let mut i = k;
        let mut moved = false;
        while i > 0 {
            i -= 1;
            if cur[i] < top - (k - i) as u64 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                moved = true;
                break;
            }
        }
        if !moved {
            return out;
        }
    }
}

pub fn naive_bad(phi: &PairColoring, q: [u32; 4]) -> bool {
    let red = |x, y| phi.is_red(x, y);
    let [a, b, c, d] = q;
    let reds = [red(a, b), red(b, c), red(b, d)];
    let blues = [!red(a, c), !red(a, d), !red(c, d)];
    reds.iter().chain(&blues).all(|&x| x)
}

pub fn subsets(n: u32, k: usize) -> Vec<Vec<u32>> {
    fn go(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Lexicographically first `n`-set with no bad 4-subset.
pub fn naive_bad4_free(phi: &PairColoring, n: usize) -> Option<Vec<u32>> {
    subsets(phi.ground_size(), n).into_iter().find(|s| {
        subsets(s.len() as u32, 4).iter().all(|q| {
            !naive_bad(
                phi,
                [
                    s[q[0] as usize],
                    s[q[1] as usize],
                    s[q[2] as usize],
                    s[q[3] as usize],
                ],
            )
        })
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Whether disjoint `A, B, C` and a bijection `f` exist with, for all
/// `a, b`, `ab` red or `a f(b)` blue.
pub fn naive_abc_exists(phi: &PairColoring, n: usize) -> bool {
    let m = phi.ground_size();
    if 3 * n > m as usize {
        return false;
    }
    let sets = subsets(m, n);
    let perms = permutations(n);
    for a in &sets {
        for b in &sets {
            if b.iter().any(|x| a.contains(x)) {
                continue;
            }
            for c in &sets {
                if c.iter().any(|x| a.contains(x) || b.contains(x)) {
                    continue;
                }
                for p in &perms {
                    let ok = a.iter().all(|&x| {
                        b.iter()
                            .enumerate()
                            .all(|(i, &y)| phi.is_red(x, y) || !phi.is_red(x, c[p[i]]))
                    });
                    if ok {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// 0-based positions that beat every other value within distance `4n`.
pub fn dominant_peaks(vals: &[u32], n: usize) -> Vec<usize> {
    let r = 4 * n;
    (r..vals.len().saturating_sub(r))
        .filter(|&k| (k - r..=k + r).all(|l| l == k || vals[l] < vals[k]))
        .collect()
}

/// A noisy monotone ramp of `16n^2` distinct values; dominant peaks are rare.
pub fn drifting<R: rand::Rng>(rng: &mut R, n: usize) -> Vec<u32> {
    let len = 16 * n * n;
    let slope: i64 = if rng.random::<bool>() { 1 } else { -1 };
    let noise = rng.random_range(1..=(8 * n) as i64);
    let mut keyed: Vec<(i64, usize)> = (0..len)
        .map(|i| (slope * i as i64 * 4 + rng.random_range(0..noise * 4), i))
        .collect();
    keyed.sort();
    let mut vals = vec![0u32; len];
    for (rank, (_, i)) in keyed.into_iter().enumerate() {
        vals[i] = rank as u32;
    }
    vals
}
