use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 4-element blocks on `{0,..,n-1}` with every pair of points in at most one block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerSystem {
    pub n: u32,
    pub blocks: Vec<[u32; 4]>,
}

impl SteinerSystem {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// First pair found in two blocks, if any.
    pub fn pair_conflict(&self) -> Option<(u32, u32)> {
        let n = self.n as usize;
        let mut seen = vec![false; n * n];
        for b in &self.blocks {
            for i in 0..4 {
                for j in i + 1..4 {
                    let (x, y) = (b[i].min(b[j]) as usize, b[i].max(b[j]) as usize);
                    if x == y || y >= n || seen[x * n + y] {
                        return Some((x as u32, y as u32));
                    }
                    seen[x * n + y] = true;
                }
            }
        }
        None
    }
}

/// Lexicographic greedy packing: accept each 4-subset that shares no pair with
/// an earlier block.
pub fn greedy_partial_steiner(n: u32) -> Result<SteinerSystem> {
    if n < 4 {
        return Err(Error::Size(format!(
            "Steiner packing needs n >= 4, got {n}"
        )));
    }
    let m = n as usize;
    let mut used = vec![false; m * m];
    let mut blocks = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            if used[a * m + b] {
                continue;
            }
            for c in b + 1..m {
                if used[a * m + c] || used[b * m + c] {
                    continue;
                }
                for d in c + 1..m {
                    if used[a * m + d] || used[b * m + d] || used[c * m + d] {
                        continue;
                    }
                    let q = [a, b, c, d];
                    for i in 0..4 {
                        for j in i + 1..4 {
                            used[q[i] * m + q[j]] = true;
                        }
                    }
                    blocks.push([a as u32, b as u32, c as u32, d as u32]);
                    break;
                }
                if used[a * m + b] {
                    break;
                }
            }
        }
    }
    Ok(SteinerSystem { n, blocks })
}
