//! Synthetic inputs that drive the pipeline to each certificate kind.

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::certificate::{Branch, Witness};
use super::pipeline::{build_abc_witness, PipelineParams};
use crate::base::{Color, PairColoring};
use crate::delta::realize_deltas;
use crate::error::{Error, Result};
use crate::stepup::StepColoring;

#[derive(Clone, Debug)]
pub struct Planted {
    pub vertices: Vec<BigUint>,
    pub coloring: StepColoring,
    pub params: PipelineParams,
}

/// `2^i - 1` for `i < 128n^4`: every consecutive delta is one more than the last.
pub fn monotone(n: usize, seed: u64) -> Result<Planted> {
    let params = PipelineParams::new(n);
    let m = params.min_vertices();
    let vertices: Vec<BigUint> = (0..m).map(|i| (BigUint::one() << i) - 1u8).collect();
    let width = m as u32;
    let phi = PairColoring::random(width, seed)?;
    Ok(Planted {
        vertices,
        coloring: StepColoring::main(phi, width)?,
        params,
    })
}

/// `0, 1, .., 128n^4 - 1`: the ruler-shaped deltas repeat local maxima.
pub fn equal_maxima(n: usize, seed: u64) -> Result<Planted> {
    let params = PipelineParams::new(n);
    let m = params.min_vertices();
    let width = usize::BITS - (m - 1).leading_zeros();
    let vertices: Vec<BigUint> = (0..m).map(BigUint::from).collect();
    let phi = PairColoring::random(width, seed)?;
    Ok(Planted {
        vertices,
        coloring: StepColoring::main(phi, width)?,
        params,
    })
}

/// Bit width of the A/B/C construction; deltas reach 1023.
pub const ABC_BIT_WIDTH: u32 = 1024;
const LOW: std::ops::RangeInclusive<u32> = 16..=512;
const HIGH: std::ops::RangeInclusive<u32> = 513..=1022;
const PEAK: u32 = 1023;

fn abc_deltas(n: usize, seed: u64, branch: Branch) -> Result<Vec<u32>> {
    let params = PipelineParams::new(n);
    let k_max = params.maxima_needed();
    let half = k_max / 2;
    if half > (*LOW.end() - *LOW.start() + 1) as usize {
        return Err(Error::Resource(format!(
            "n = {n} is too large for the planted construction"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lows: Vec<u32> = LOW.collect();
    lows.shuffle(&mut rng);
    lows.truncate(half);
    let mut highs: Vec<u32> = HIGH.collect();
    highs.shuffle(&mut rng);
    highs.truncate(half);

    // maxima alternate low/high, so every interior maximum is an extremum
    let mut x: Vec<u32> = (0..k_max)
        .map(|i| {
            if i % 2 == 0 {
                lows[i / 2]
            } else {
                highs[i / 2]
            }
        })
        .collect();
    // extremum e sits at x[e + 1]; put the peak at extremum 8n
    let r = 4 * n;
    let k = 2 * r;
    x[k + 1] = PEAK;
    // minima around the peak: the smallest half goes to the side that becomes A
    let mut window: Vec<usize> = (k + 1 - r..k + r).step_by(2).map(|e| e + 1).collect();
    let mut vals: Vec<u32> = window.iter().map(|&i| x[i]).collect();
    vals.sort_unstable();
    if branch == Branch::Right {
        window.reverse();
    }
    for (i, v) in window.into_iter().zip(vals) {
        x[i] = v;
    }

    let mut raw = Vec::with_capacity(params.min_vertices());
    raw.push(0);
    for v in x {
        raw.push(v);
        raw.push(0);
    }
    // ruler tail with small values keeps windows realizable
    let mut i = 1u32;
    while raw.len() + 1 < params.min_vertices() {
        raw.push(1 + i.trailing_zeros());
        raw.push(0);
        i += 1;
    }
    Ok(raw)
}

/// Vertices whose inspected tuples are blue under a base coloring with an
/// A/B/C structure at size `n`; the structure sits on the requested side of
/// the peak.
pub fn abc(n: usize, seed: u64, branch: Branch) -> Result<Planted> {
    let params = PipelineParams::new(n);
    let raw = abc_deltas(n, seed, branch)?;
    let vertices = realize_deltas(&raw)?;
    // with every pair red each inspected tuple is blue, exposing A and B
    let dry = StepColoring::main(
        PairColoring::uniform(ABC_BIT_WIDTH, Color::Red)?,
        ABC_BIT_WIDTH,
    )?;
    let cert = build_abc_witness(&vertices, &dry, params)?;
    let Witness::AbcStructure { a, b, .. } = cert.witness else {
        return Err(Error::Pipeline(format!(
            "planted run ended at {:?}",
            cert.origin
        )));
    };
    let mut phi = PairColoring::random(ABC_BIT_WIDTH, seed)?;
    for &x in &a {
        for &y in &b {
            phi.set(x, y, Color::Red);
        }
    }
    Ok(Planted {
        vertices,
        coloring: StepColoring::main(phi, ABC_BIT_WIDTH)?,
        params,
    })
}
