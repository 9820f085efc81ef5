//! k-subset helpers: binomials, colex ranking and range-partitioned enumeration.
//!
//! Colex order compares sorted subsets by their largest differing element, so
//! the subsets of `{0,..,n-1}` form a prefix of the subsets of `{0,..,n}`.

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is integral; divide first to delay overflow.
        let num = (n - i) as u128;
        let den = i as u128 + 1;
        let g = gcd(acc, den);
        acc = match (acc / g).checked_mul(num / (den / g)) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Natural log of `C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Colex rank of a strictly increasing subset.
pub fn colex_rank(subset: &[usize]) -> u128 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c as u64, i as u64 + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for `k`-subsets.
pub fn colex_unrank(mut rank: u128, k: usize) -> Vec<usize> {
    let mut out = vec![0usize; k];
    for i in (0..k).rev() {
        // largest c with C(c, i+1) <= rank
        let mut c = i;
        while binomial(c as u64 + 1, i as u64 + 1) <= rank {
            c += 1;
        }
        rank -= binomial(c as u64, i as u64 + 1);
        out[i] = c;
    }
    out
}

/// Advances `subset` to its colex successor among subsets of `{0,..,n-1}`.
/// Returns `false` (leaving `subset` unspecified) when it was the last one.
pub fn next_colex(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for i in 0..k {
        let limit = if i + 1 < k { subset[i + 1] } else { n };
        if subset[i] + 1 < limit {
            subset[i] += 1;
            for (j, slot) in subset.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            return true;
        }
    }
    false
}

/// Advances `subset` to its lexicographic successor among subsets of `{0,..,n-1}`.
pub fn next_lex(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every `k`-subset of `{0,..,n-1}` in lexicographic order.
pub fn for_each_lex_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        f(&cur);
        if k == 0 || !next_lex(&mut cur, n) {
            break;
        }
    }
}

/// Splits colex ranks `[0, total)` into at most `parts` contiguous ranges.
pub fn partition_ranges(total: u128, parts: usize) -> Vec<(u128, u128)> {
    if total == 0 {
        return Vec::new();
    }
    let parts = (parts.max(1) as u128).min(total);
    let base = total / parts;
    let extra = total % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = 0u128;
    for i in 0..parts {
        let len = base + u128::from(i < extra);
        out.push((start, start + len));
        start += len;
    }
    out
}

/// Visits the `k`-subsets with colex ranks in `[start, end)`, in colex order.
pub fn for_each_colex_in_range(
    n: usize,
    k: usize,
    start: u128,
    end: u128,
    mut f: impl FnMut(&[usize]),
) {
    if start >= end {
        return;
    }
    let mut cur = colex_unrank(start, k);
    let mut rank = start;
    loop {
        f(&cur);
        rank += 1;
        if rank >= end || !next_colex(&mut cur, n) {
            break;
        }
    }
}

/// Runs `f` inside a dedicated rayon pool with `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
    {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
