use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::base::{count_bad_4tuples, is_bad_4tuple, AbcWitness, PairColoring};
use crate::delta::{raw_deltas, DeltaVertex, Direction};
use crate::error::{Error, Result};
use crate::stepup::{classify_pattern, RuleMatch, RuleSet, StepColoring};

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// Pipeline stage a certificate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    DeltaRun,
    EqualMaxima,
    MaximaRun,
    PeakChain,
    Peak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Minima left of the peak form `A`.
    Left,
    /// Minima right of the peak form `A`.
    Right,
}

/// A 5-tuple of clique vertices (hex) realizing a quadruple of delta values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleRealization {
    pub deltas: [u32; 4],
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbcRealization {
    pub a: u32,
    pub b: u32,
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Delta values on which the base coloring has no bad 4-tuple.
    MonotoneNSet {
        direction: Direction,
        values: Vec<u32>,
        /// One entry per 4-subset of `values`, in lexicographic order.
        realizations: Vec<TupleRealization>,
    },
    AbcStructure {
        branch: Branch,
        peak_delta: u32,
        a: Vec<u32>,
        b: Vec<u32>,
        c: Vec<u32>,
        f: Vec<(u32, u32)>,
        /// One entry per `(a, b)`, row-major over `a` then `b`.
        realizations: Vec<AbcRealization>,
    },
    /// A red 5-subset of the purported clique.
    NotABlueClique {
        vertices: Vec<String>,
        deltas: [u32; 4],
        rule: RuleMatch,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationCertificate {
    pub schema_version: u32,
    pub n: usize,
    pub bit_width: u32,
    pub origin: Origin,
    pub witness: Witness,
}

impl ViolationCertificate {
    pub fn kind(&self) -> &'static str {
        match self.witness {
            Witness::MonotoneNSet { .. } => "monotone_n_set",
            Witness::AbcStructure { .. } => "abc_structure",
            Witness::NotABlueClique { .. } => "not_a_blue_clique",
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub(crate) fn to_hex<V: DeltaVertex>(v: &V) -> String {
    v.to_wide().to_str_radix(16)
}

fn parse_hex(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::Certificate(format!("bad vertex encoding {s:?}")));
    }
    BigUint::parse_bytes(s.as_bytes(), 16)
        .ok_or_else(|| Error::Certificate(format!("bad vertex encoding {s:?}")))
}

fn members(tuple: &[String], vs: &BTreeSet<BigUint>) -> Result<Vec<BigUint>> {
    if tuple.len() != 5 {
        return Err(Error::Certificate(format!(
            "expected 5 vertices, got {}",
            tuple.len()
        )));
    }
    tuple
        .iter()
        .map(|s| {
            let v = parse_hex(s)?;
            if vs.contains(&v) {
                Ok(v)
            } else {
                Err(Error::Certificate(format!(
                    "vertex {s} is not in the vertex set"
                )))
            }
        })
        .collect()
}

/// Deltas of a realized tuple, or `None` when it is not strictly increasing.
fn tuple_deltas(vs: &[BigUint]) -> Option<[u32; 4]> {
    let raw = raw_deltas(vs).ok()?;
    raw.try_into().ok()
}

fn is_blue(sc: &StepColoring, vs: &[BigUint]) -> bool {
    matches!(sc.color_of(vs), Ok(c) if !c.is_red())
}

fn check_monotone(
    sc: &StepColoring,
    phi: &PairColoring,
    n: usize,
    direction: Direction,
    values: &[u32],
    realizations: &[TupleRealization],
    vs: &BTreeSet<BigUint>,
) -> Result<bool> {
    let mut tuples = Vec::with_capacity(realizations.len());
    for r in realizations {
        tuples.push(members(&r.vertices, vs)?);
    }
    if values.len() < n.max(4) {
        return Ok(false);
    }
    let ordered = match direction {
        Direction::Increasing => values.windows(2).all(|w| w[0] < w[1]),
        Direction::Decreasing => values.windows(2).all(|w| w[0] > w[1]),
    };
    if !ordered || values.iter().any(|&x| x >= phi.ground_size()) {
        return Ok(false);
    }
    let mut expected = Vec::new();
    crate::combinatorics::for_each_lex_subset(values.len(), 4, |q| {
        expected.push([values[q[0]], values[q[1]], values[q[2]], values[q[3]]]);
    });
    if expected.len() != realizations.len() {
        return Ok(false);
    }
    for ((want, r), tuple) in expected.iter().zip(realizations).zip(&tuples) {
        if r.deltas != *want || tuple_deltas(tuple) != Some(*want) || !is_blue(sc, tuple) {
            return Ok(false);
        }
        let mut q = *want;
        q.sort_unstable();
        if is_bad_4tuple(phi, q)? {
            return Ok(false);
        }
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let sub = PairColoring::from_fn(sorted.len() as u32, |i, j| {
        phi.color(sorted[i as usize], sorted[j as usize])
    })?;
    Ok(count_bad_4tuples(&sub) == 0)
}

#[allow(clippy::too_many_arguments)]
fn check_abc(
    sc: &StepColoring,
    phi: &PairColoring,
    n: usize,
    branch: Branch,
    peak: u32,
    w: &AbcWitness,
    realizations: &[AbcRealization],
    vs: &BTreeSet<BigUint>,
) -> Result<bool> {
    let mut tuples = Vec::with_capacity(realizations.len());
    for r in realizations {
        tuples.push(members(&r.vertices, vs)?);
    }
    if w.check_structure(n).is_err() {
        return Ok(false);
    }
    let m = phi.ground_size();
    if w.a.iter().chain(&w.b).chain(&w.c).any(|&x| x >= m) || peak >= m {
        return Ok(false);
    }
    let mut want = Vec::new();
    for &a in &w.a {
        for &(b, _) in &w.f {
            want.push((a, b));
        }
    }
    if want.len() != realizations.len() {
        return Ok(false);
    }
    for (((a, b), r), tuple) in want.iter().zip(realizations).zip(&tuples) {
        if (r.a, r.b) != (*a, *b) {
            return Ok(false);
        }
        let fb =
            w.f.iter()
                .find(|p| p.0 == *b)
                .map(|p| p.1)
                .expect("b in domain");
        let (expect, rule) = match branch {
            Branch::Left => ([*a, peak, *b, fb], RuleMatch::ZigzagRule3),
            Branch::Right => ([fb, *b, peak, *a], RuleMatch::ZigzagRule2),
        };
        let Some(d) = tuple_deltas(tuple) else {
            return Ok(false);
        };
        if d != expect || classify_pattern(d).ok() != Some(rule) || !is_blue(sc, tuple) {
            return Ok(false);
        }
    }
    Ok(w.satisfies_disjunction(phi))
}

/// Replays every claim in a certificate against the coloring and vertex set.
///
/// Returns `Ok(false)` when some claim fails and an error when the certificate
/// names vertices outside `vs`.
pub fn verify_certificate<V: DeltaVertex>(
    cert: &ViolationCertificate,
    sc: &StepColoring,
    vs: &[V],
) -> Result<bool> {
    let set: BTreeSet<BigUint> = vs.iter().map(DeltaVertex::to_wide).collect();
    let Some(phi) = sc.phi() else {
        return Err(Error::Precondition(
            "certificates replay against the main coloring".into(),
        ));
    };
    debug_assert_eq!(sc.rule_set(), RuleSet::Main64);
    let header_ok = cert.schema_version == CERTIFICATE_SCHEMA_VERSION
        && cert.bit_width == sc.bit_width()
        && cert.n >= 1;
    let body_ok = match &cert.witness {
        Witness::NotABlueClique {
            vertices,
            deltas,
            rule,
        } => {
            let tuple = members(vertices, &set)?;
            let d = tuple_deltas(&tuple);
            d == Some(*deltas)
                && classify_pattern(*deltas).ok() == Some(*rule)
                && matches!(sc.color_of(&tuple), Ok(c) if c.is_red())
        }
        Witness::MonotoneNSet {
            direction,
            values,
            realizations,
        } => check_monotone(sc, phi, cert.n, *direction, values, realizations, &set)?,
        Witness::AbcStructure {
            branch,
            peak_delta,
            a,
            b,
            c,
            f,
            realizations,
        } => {
            let w = AbcWitness {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
                f: f.clone(),
            };
            check_abc(
                sc,
                phi,
                cert.n,
                *branch,
                *peak_delta,
                &w,
                realizations,
                &set,
            )?
        }
    };
    Ok(header_ok && body_ok)
}
