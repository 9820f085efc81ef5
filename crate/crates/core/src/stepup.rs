//! Stepped-up 5-uniform colorings on `{0,..,2^N-1}`.
//!
//! Both colorings look only at the four consecutive deltas `d1..d4` of a sorted
//! 5-tuple. The main coloring reads a pair coloring on delta values and has
//! four red rules; the variant reads a coloring of 4-subsets and has two.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::base::{is_bad_unchecked, Color, PairColoring};
use crate::combinatorics::{binomial, colex_rank};
use crate::delta::{raw_deltas, DeltaVertex};
use crate::error::{Error, Result};

pub const PSI_MAGIC: &[u8; 4] = b"PSI1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleMatch {
    Monotone,
    ZigzagRule2,
    ZigzagRule3,
    EqualEndsRule4,
    NoRule,
}

impl fmt::Display for RuleMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleMatch::Monotone => "monotone",
            RuleMatch::ZigzagRule2 => "zigzag-2",
            RuleMatch::ZigzagRule3 => "zigzag-3",
            RuleMatch::EqualEndsRule4 => "equal-ends-4",
            RuleMatch::NoRule => "none",
        })
    }
}

fn check_adjacent(d: &[u32; 4]) -> Result<()> {
    if d.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Pattern(format!("adjacent deltas tie in {d:?}")));
    }
    Ok(())
}

#[inline]
fn shape(d: &[u32; 4]) -> RuleMatch {
    let [d1, d2, d3, d4] = *d;
    if (d1 < d2 && d2 < d3 && d3 < d4) || (d1 > d2 && d2 > d3 && d3 > d4) {
        RuleMatch::Monotone
    } else if d3 > d1 && d1 > d2 && d2 > d4 {
        RuleMatch::ZigzagRule2
    } else if d2 > d4 && d4 > d3 && d3 > d1 {
        RuleMatch::ZigzagRule3
    } else if d2 > d1 && d1 == d4 && d4 > d3 {
        RuleMatch::EqualEndsRule4
    } else {
        RuleMatch::NoRule
    }
}

/// Shape of a delta quadruple under the main coloring's rules.
pub fn classify_pattern(d: [u32; 4]) -> Result<RuleMatch> {
    check_adjacent(&d)?;
    Ok(shape(&d))
}

/// Main-coloring verdict with the pair coloring supplied as a predicate.
///
/// `red(x, y)` is only consulted on distinct values.
#[inline]
pub fn main_rule_red(d: [u32; 4], red: impl Fn(u32, u32) -> bool) -> bool {
    let [d1, d2, d3, d4] = d;
    match shape(&d) {
        RuleMatch::Monotone => {
            let mut s = d;
            s.sort_unstable();
            let [a, b, c, e] = s;
            red(a, b) && red(b, c) && red(b, e) && !red(a, c) && !red(a, e) && !red(c, e)
        }
        RuleMatch::ZigzagRule2 => red(d1, d4) && !red(d2, d4),
        RuleMatch::ZigzagRule3 => red(d1, d4) && !red(d1, d3),
        RuleMatch::EqualEndsRule4 => true,
        RuleMatch::NoRule => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantMatch {
    Monotone,
    Zigzag,
    NoRule,
}

#[inline]
fn variant_shape(d: &[u32; 4]) -> VariantMatch {
    let [d1, d2, d3, d4] = *d;
    if (d1 < d2 && d2 < d3 && d3 < d4) || (d1 > d2 && d2 > d3 && d3 > d4) {
        VariantMatch::Monotone
    } else if d1 > d2 && d2 < d3 && d3 > d4 && d1 < d3 {
        VariantMatch::Zigzag
    } else {
        VariantMatch::NoRule
    }
}

pub fn classify_variant(d: [u32; 4]) -> Result<VariantMatch> {
    check_adjacent(&d)?;
    Ok(variant_shape(&d))
}

/// Variant verdict with the 4-subset coloring supplied as a predicate on
/// sorted quadruples.
#[inline]
pub fn variant_rule_red(d: [u32; 4], red: impl Fn([u32; 4]) -> bool) -> bool {
    match variant_shape(&d) {
        VariantMatch::Monotone => {
            let mut s = d;
            s.sort_unstable();
            red(s)
        }
        VariantMatch::Zigzag => true,
        VariantMatch::NoRule => false,
    }
}

/// Deltas of the 5-tuple left after dropping vertex `omit` (0-based) from a
/// sorted 6-tuple with consecutive deltas `d`.
pub fn induced_deltas(d: &[u32; 5], omit: usize) -> [u32; 4] {
    match omit {
        0 => [d[1], d[2], d[3], d[4]],
        5 => [d[0], d[1], d[2], d[3]],
        i => {
            let mut out = [0; 4];
            let mut k = 0;
            let mut j = 0;
            while j < 5 {
                if j == i - 1 {
                    out[k] = d[j].max(d[j + 1]);
                    j += 2;
                } else {
                    out[k] = d[j];
                    j += 1;
                }
                k += 1;
            }
            out
        }
    }
}

/// Red/blue coloring of the 4-subsets of `{0,..,M-1}`, packed by colex rank.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadColoring {
    ground_size: u32,
    bits: Vec<u64>,
}

impl fmt::Debug for QuadColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadColoring")
            .field("ground_size", &self.ground_size)
            .field("red_quads", &self.red_count())
            .finish()
    }
}

fn quad_rank(q: [u32; 4]) -> usize {
    colex_rank(&q.map(|x| x as usize)) as usize
}

impl QuadColoring {
    fn blank(ground_size: u32) -> Result<Self> {
        if ground_size < 4 {
            return Err(Error::Size(format!(
                "4-subset coloring needs at least 4 points, got {ground_size}"
            )));
        }
        let count = binomial(u64::from(ground_size), 4);
        if count > 1 << 32 {
            return Err(Error::Resource(format!(
                "C({ground_size}, 4) quads is too many"
            )));
        }
        Ok(Self {
            ground_size,
            bits: vec![0; (count as usize).div_ceil(64)],
        })
    }

    pub fn quad_count(&self) -> u64 {
        binomial(u64::from(self.ground_size), 4) as u64
    }

    pub fn ground_size(&self) -> u32 {
        self.ground_size
    }

    /// Evaluates `f` once per sorted 4-subset.
    pub fn from_fn(ground_size: u32, mut f: impl FnMut([u32; 4]) -> Color) -> Result<Self> {
        let mut out = Self::blank(ground_size)?;
        let m = ground_size;
        for d in 3..m {
            for c in 2..d {
                for b in 1..c {
                    for a in 0..b {
                        if f([a, b, c, d]).is_red() {
                            out.set([a, b, c, d], Color::Red);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn uniform(ground_size: u32, color: Color) -> Result<Self> {
        Self::from_fn(ground_size, |_| color)
    }

    /// Random coloring that keeps at most 3 red quads inside every 5-set.
    ///
    /// Quads are visited in colex order and each is made red with probability
    /// one half unless that would put a fourth red quad into some 5-set.
    pub fn random_sparse(ground_size: u32, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Self::blank(ground_size)?;
        let m = ground_size;
        for d in 3..m {
            for c in 2..d {
                for b in 1..c {
                    for a in 0..b {
                        let q = [a, b, c, d];
                        if rng.random::<bool>() {
                            out.set(q, Color::Red);
                            if !out.hypothesis_holds_around(q) {
                                out.set(q, Color::Blue);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Fair coin per quad, no hypothesis enforced.
    pub fn random(ground_size: u32, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(ground_size, |_| Color::from_red(rng.random::<bool>()))
    }

    /// Color of a sorted, in-range quadruple.
    #[inline]
    pub fn color(&self, q: [u32; 4]) -> Color {
        debug_assert!(q.windows(2).all(|w| w[0] < w[1]) && q[3] < self.ground_size);
        let k = quad_rank(q);
        Color::from_red(self.bits[k / 64] >> (k % 64) & 1 == 1)
    }

    #[inline]
    pub fn is_red(&self, q: [u32; 4]) -> bool {
        self.color(q).is_red()
    }

    pub fn try_color(&self, q: [u32; 4]) -> Result<Color> {
        if q.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Order(format!(
                "quad {q:?} must be strictly increasing"
            )));
        }
        if q[3] >= self.ground_size {
            return Err(Error::BaseRange {
                value: q[3],
                ground_size: self.ground_size,
            });
        }
        Ok(self.color(q))
    }

    pub fn set(&mut self, q: [u32; 4], color: Color) {
        assert!(q.windows(2).all(|w| w[0] < w[1]) && q[3] < self.ground_size);
        let k = quad_rank(q);
        if color.is_red() {
            self.bits[k / 64] |= 1 << (k % 64);
        } else {
            self.bits[k / 64] &= !(1 << (k % 64));
        }
    }

    pub fn red_count(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    fn red_in_five(&self, s: [u32; 5]) -> u32 {
        (0..5)
            .map(|skip| {
                let mut q = [0; 4];
                let mut k = 0;
                for (i, &x) in s.iter().enumerate() {
                    if i != skip {
                        q[k] = x;
                        k += 1;
                    }
                }
                u32::from(self.is_red(q))
            })
            .sum()
    }

    fn hypothesis_holds_around(&self, q: [u32; 4]) -> bool {
        (0..self.ground_size).filter(|x| !q.contains(x)).all(|x| {
            let mut s = [q[0], q[1], q[2], q[3], x];
            s.sort_unstable();
            self.red_in_five(s) <= 3
        })
    }

    /// First 5-set (lexicographic) holding 4 or more red quads.
    pub fn hypothesis_violation(&self) -> Option<[u32; 5]> {
        let m = self.ground_size;
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    for d in c + 1..m {
                        for e in d + 1..m {
                            if self.red_in_five([a, b, c, d, e]) > 3 {
                                return Some([a, b, c, d, e]);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// PSI1 encoding: magic, `M` as u32 little-endian, then one bit per quad
    /// in colex order, least significant bit first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let payload = self.quad_count().div_ceil(8) as usize;
        let mut out = Vec::with_capacity(8 + payload);
        out.extend_from_slice(PSI_MAGIC);
        out.extend_from_slice(&self.ground_size.to_le_bytes());
        for i in 0..payload {
            out.push((self.bits[i / 8] >> (8 * (i % 8))) as u8);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 || &bytes[..4] != PSI_MAGIC {
            return Err(Error::Format("missing PSI1 header".into()));
        }
        let ground_size = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
        let mut out = Self::blank(ground_size).map_err(|e| Error::Format(e.to_string()))?;
        let quads = out.quad_count();
        let payload = &bytes[8..];
        if payload.len() as u64 != quads.div_ceil(8) {
            return Err(Error::Format(format!(
                "expected {} payload bytes for M = {ground_size}, found {}",
                quads.div_ceil(8),
                payload.len()
            )));
        }
        for (i, &byte) in payload.iter().enumerate() {
            out.bits[i / 8] |= u64::from(byte) << (8 * (i % 8));
        }
        if quads % 8 != 0 && payload[payload.len() - 1] >> (quads % 8) != 0 {
            return Err(Error::Format("nonzero padding bits".into()));
        }
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

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleSet {
    Main64,
    Variant65,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Base {
    Pair(PairColoring),
    Quad(QuadColoring),
}

/// A 5-uniform coloring of `{0,..,2^N-1}` stepped up from a base coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepColoring {
    base: Base,
    bit_width: u32,
}

fn check_width(bit_width: u32, ground_size: u32) -> Result<()> {
    if bit_width == 0 {
        return Err(Error::Size("bit width must be positive".into()));
    }
    if ground_size < bit_width {
        return Err(Error::Size(format!(
            "base ground set of size {ground_size} cannot hold every delta below bit width {bit_width}"
        )));
    }
    Ok(())
}

impl StepColoring {
    pub fn main(phi: PairColoring, bit_width: u32) -> Result<Self> {
        check_width(bit_width, phi.ground_size())?;
        Ok(Self {
            base: Base::Pair(phi),
            bit_width,
        })
    }

    pub fn variant(psi: QuadColoring, bit_width: u32) -> Result<Self> {
        check_width(bit_width, psi.ground_size())?;
        Ok(Self {
            base: Base::Quad(psi),
            bit_width,
        })
    }

    pub fn rule_set(&self) -> RuleSet {
        match self.base {
            Base::Pair(_) => RuleSet::Main64,
            Base::Quad(_) => RuleSet::Variant65,
        }
    }

    pub fn bit_width(&self) -> u32 {
        self.bit_width
    }

    pub fn base_ground_size(&self) -> u32 {
        match &self.base {
            Base::Pair(p) => p.ground_size(),
            Base::Quad(q) => q.ground_size(),
        }
    }

    pub fn phi(&self) -> Option<&PairColoring> {
        match &self.base {
            Base::Pair(p) => Some(p),
            Base::Quad(_) => None,
        }
    }

    pub fn psi(&self) -> Option<&QuadColoring> {
        match &self.base {
            Base::Quad(q) => Some(q),
            Base::Pair(_) => None,
        }
    }

    /// Color determined by the consecutive deltas of a sorted 5-tuple.
    pub fn color_deltas(&self, d: [u32; 4]) -> Result<Color> {
        check_adjacent(&d)?;
        let m = self.base_ground_size();
        if let Some(&value) = d.iter().find(|&&x| x >= m) {
            return Err(Error::BaseRange {
                value,
                ground_size: m,
            });
        }
        Ok(self.color_deltas_unchecked(d))
    }

    #[inline]
    pub(crate) fn color_deltas_unchecked(&self, d: [u32; 4]) -> Color {
        Color::from_red(match &self.base {
            Base::Pair(phi) => match shape(&d) {
                RuleMatch::Monotone => {
                    let mut s = d;
                    s.sort_unstable();
                    is_bad_unchecked(phi, s[0], s[1], s[2], s[3])
                }
                _ => main_rule_red(d, |x, y| phi.is_red(x, y)),
            },
            Base::Quad(psi) => variant_rule_red(d, |q| psi.is_red(q)),
        })
    }

    fn check_vertices<V: DeltaVertex>(&self, vs: &[V], len: usize) -> Result<Vec<u32>> {
        if vs.len() != len {
            return Err(Error::Precondition(format!(
                "expected {len} vertices, got {}",
                vs.len()
            )));
        }
        let raw = raw_deltas(vs)?;
        if let Some(v) = vs
            .iter()
            .find(|v| v.bit_length() > u64::from(self.bit_width))
        {
            return Err(Error::Precondition(format!(
                "vertex {v:?} is not below 2^{}",
                self.bit_width
            )));
        }
        Ok(raw)
    }

    /// Color of a sorted 5-tuple under whichever rule set this coloring carries.
    pub fn color_of<V: DeltaVertex>(&self, vs: &[V]) -> Result<Color> {
        let raw = self.check_vertices(vs, 5)?;
        self.color_deltas([raw[0], raw[1], raw[2], raw[3]])
    }

    /// Color of the 5-tuple obtained by dropping position `omit` (0-based) from
    /// a sorted 6-tuple.
    pub fn color_on_subset<V: DeltaVertex>(&self, six: &[V], omit: usize) -> Result<Color> {
        let raw = self.check_vertices(six, 6)?;
        if omit >= 6 {
            return Err(Error::Precondition(format!(
                "omit index {omit} outside 0..6"
            )));
        }
        let d = [raw[0], raw[1], raw[2], raw[3], raw[4]];
        self.color_deltas(induced_deltas(&d, omit))
    }
}

/// Main coloring on a sorted 5-tuple.
pub fn chi<V: DeltaVertex>(sc: &StepColoring, vs: &[V]) -> Result<Color> {
    if sc.rule_set() != RuleSet::Main64 {
        return Err(Error::Precondition("chi needs the main rule set".into()));
    }
    sc.color_of(vs)
}

/// Variant coloring on a sorted 5-tuple.
pub fn chi_variant_665<V: DeltaVertex>(sc: &StepColoring, vs: &[V]) -> Result<Color> {
    if sc.rule_set() != RuleSet::Variant65 {
        return Err(Error::Precondition(
            "chi_variant_665 needs the variant rule set".into(),
        ));
    }
    sc.color_of(vs)
}

pub fn chi_on_subset<V: DeltaVertex>(sc: &StepColoring, six: &[V], omit: usize) -> Result<Color> {
    sc.color_on_subset(six, omit)
}

/// Any coloring of sorted 5-tuples of small vertices.
pub trait FiveColoring: Sync {
    fn color5(&self, five: &[u64; 5]) -> Result<Color>;
}

impl FiveColoring for StepColoring {
    fn color5(&self, five: &[u64; 5]) -> Result<Color> {
        self.color_of(five)
    }
}

/// Colors every 5-tuple the same way.
#[derive(Clone, Copy, Debug)]
pub struct ConstantColoring(pub Color);

impl FiveColoring for ConstantColoring {
    fn color5(&self, _: &[u64; 5]) -> Result<Color> {
        Ok(self.0)
    }
}
