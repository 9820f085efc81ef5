use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PHI_MAGIC: &[u8; 4] = b"PHI1";
pub const PHI_VERSION: u16 = 1;
const PHI_HEADER_LEN: usize = 4 + 2 + 4 + 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn is_red(self) -> bool {
        self == Color::Red
    }

    pub fn from_red(red: bool) -> Self {
        if red {
            Color::Red
        } else {
            Color::Blue
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// Red/blue coloring of the unordered pairs of `{0,..,M-1}`.
///
/// Stored as a packed strict upper triangle, row-major; bit set means red.
#[derive(Clone, PartialEq, Eq)]
pub struct PairColoring {
    ground_size: u32,
    seed: Option<u64>,
    bits: Vec<u64>,
}

impl fmt::Debug for PairColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PairColoring")
            .field("ground_size", &self.ground_size)
            .field("seed", &self.seed)
            .field("red_pairs", &self.red_count())
            .finish()
    }
}

pub fn pair_count(m: u32) -> u64 {
    let m = u64::from(m);
    m * m.saturating_sub(1) / 2
}

impl PairColoring {
    fn blank(ground_size: u32) -> Result<Self> {
        if ground_size < 2 {
            return Err(Error::Size(format!(
                "pair coloring needs at least 2 points, got {ground_size}"
            )));
        }
        let words = pair_count(ground_size).div_ceil(64) as usize;
        Ok(Self {
            ground_size,
            seed: None,
            bits: vec![0; words],
        })
    }

    pub fn uniform(ground_size: u32, color: Color) -> Result<Self> {
        Self::from_fn(ground_size, |_, _| color)
    }

    /// Builds a coloring from `f(a, b)` evaluated once per pair with `a < b`.
    pub fn from_fn(ground_size: u32, mut f: impl FnMut(u32, u32) -> Color) -> Result<Self> {
        let mut out = Self::blank(ground_size)?;
        let mut k = 0usize;
        for a in 0..ground_size {
            for b in a + 1..ground_size {
                if f(a, b).is_red() {
                    out.bits[k / 64] |= 1 << (k % 64);
                }
                k += 1;
            }
        }
        Ok(out)
    }

    /// Independent fair coin per pair, drawn in row-major pair order.
    pub fn random(ground_size: u32, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Self::random_from_rng(ground_size, &mut rng)?;
        out.seed = Some(seed);
        Ok(out)
    }

    pub fn random_from_rng<R: Rng + ?Sized>(ground_size: u32, rng: &mut R) -> Result<Self> {
        Self::from_fn(ground_size, |_, _| Color::from_red(rng.random::<bool>()))
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn ground_size(&self) -> u32 {
        self.ground_size
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn pair_count(&self) -> u64 {
        pair_count(self.ground_size)
    }

    #[inline]
    fn index(&self, a: u32, b: u32) -> usize {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        let (i, j, m) = (i as usize, j as usize, self.ground_size as usize);
        i * (2 * m - i - 1) / 2 + (j - i - 1)
    }

    /// Color of `{a, b}`; callers guarantee `a != b` and both in range.
    #[inline]
    pub fn color(&self, a: u32, b: u32) -> Color {
        debug_assert!(a != b && a < self.ground_size && b < self.ground_size);
        let k = self.index(a, b);
        Color::from_red(self.bits[k / 64] >> (k % 64) & 1 == 1)
    }

    #[inline]
    pub fn is_red(&self, a: u32, b: u32) -> bool {
        self.color(a, b).is_red()
    }

    pub fn try_color(&self, a: u32, b: u32) -> Result<Color> {
        if a == b {
            return Err(Error::Distinctness(format!("pair ({a}, {b})")));
        }
        let top = a.max(b);
        if top >= self.ground_size {
            return Err(Error::BaseRange {
                value: top,
                ground_size: self.ground_size,
            });
        }
        Ok(self.color(a, b))
    }

    pub fn set(&mut self, a: u32, b: u32, color: Color) {
        assert!(a != b && a < self.ground_size && b < self.ground_size);
        let k = self.index(a, b);
        if color.is_red() {
            self.bits[k / 64] |= 1 << (k % 64);
        } else {
            self.bits[k / 64] &= !(1 << (k % 64));
        }
    }

    pub fn red_count(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// PHI1 encoding: little-endian header, then the triangle packed LSB-first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let payload = self.pair_count().div_ceil(8) as usize;
        let mut out = Vec::with_capacity(PHI_HEADER_LEN + payload);
        out.extend_from_slice(PHI_MAGIC);
        out.extend_from_slice(&PHI_VERSION.to_le_bytes());
        out.extend_from_slice(&self.ground_size.to_le_bytes());
        out.extend_from_slice(&self.seed.unwrap_or(0).to_le_bytes());
        for i in 0..payload {
            out.push((self.bits[i / 8] >> (8 * (i % 8))) as u8);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < PHI_HEADER_LEN || &bytes[..4] != PHI_MAGIC {
            return Err(Error::Format("missing PHI1 header".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != PHI_VERSION {
            return Err(Error::Format(format!("unsupported PHI1 version {version}")));
        }
        let ground_size = u32::from_le_bytes(bytes[6..10].try_into().expect("4 bytes"));
        let seed = u64::from_le_bytes(bytes[10..18].try_into().expect("8 bytes"));
        let mut out = Self::blank(ground_size).map_err(|e| Error::Format(e.to_string()))?;
        let pairs = out.pair_count();
        let payload = &bytes[PHI_HEADER_LEN..];
        if payload.len() as u64 != pairs.div_ceil(8) {
            return Err(Error::Format(format!(
                "expected {} payload bytes for M = {ground_size}, found {}",
                pairs.div_ceil(8),
                payload.len()
            )));
        }
        for (i, &byte) in payload.iter().enumerate() {
            out.bits[i / 8] |= u64::from(byte) << (8 * (i % 8));
        }
        if pairs % 8 != 0 {
            let last = payload[payload.len() - 1];
            if last >> (pairs % 8) != 0 {
                return Err(Error::Format("nonzero padding bits".into()));
            }
        }
        out.seed = (seed != 0).then_some(seed);
        Ok(out)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

/// Uniform random pair coloring on `{0,..,m-1}`, reproducible per seed.
pub fn random_pair_coloring(m: u32, seed: u64) -> Result<PairColoring> {
    PairColoring::random(m, seed)
}
