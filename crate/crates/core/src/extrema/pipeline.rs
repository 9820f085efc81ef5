use serde::{Deserialize, Serialize};

use super::certificate::{
    to_hex, AbcRealization, Branch, Origin, TupleRealization, ViolationCertificate, Witness,
    CERTIFICATE_SCHEMA_VERSION,
};
use super::{find_dominant_peak_with, find_monotone_run, local_extrema, PeakOutcome};
use crate::base::AbcWitness;
use crate::combinatorics::for_each_lex_subset;
use crate::delta::{monotone_direction, raw_deltas, subsequence_indices, DeltaVertex, Direction};
use crate::error::{Error, Result};
use crate::stepup::{classify_pattern, RuleSet, StepColoring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub n: usize,
    /// Length of the monotone runs and chains that end the pipeline early.
    pub run_len: usize,
}

impl PipelineParams {
    /// Runs of length `max(n, 4)`: a run shorter than four carries no 4-subset.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            run_len: n.max(4),
        }
    }

    pub fn with_run_len(mut self, run_len: usize) -> Self {
        self.run_len = run_len;
        self
    }

    pub fn min_vertices(&self) -> usize {
        128 * self.n.pow(4)
    }

    pub fn maxima_needed(&self) -> usize {
        32 * self.n.pow(3)
    }

    pub fn extrema_needed(&self) -> usize {
        16 * self.n.pow(2)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        if self.run_len < self.n.max(4) {
            return Err(Error::Precondition(format!(
                "run length {} is below max(n, 4) = {}",
                self.run_len,
                self.n.max(4)
            )));
        }
        Ok(())
    }
}

struct Ctx<'a, V> {
    vs: &'a [V],
    sc: &'a StepColoring,
    params: PipelineParams,
}

enum Inspect {
    Blue(Vec<String>),
    Red(ViolationCertificate),
}

impl<V: DeltaVertex> Ctx<'_, V> {
    fn cert(&self, origin: Origin, witness: Witness) -> ViolationCertificate {
        ViolationCertificate {
            schema_version: CERTIFICATE_SCHEMA_VERSION,
            n: self.params.n,
            bit_width: self.sc.bit_width(),
            origin,
            witness,
        }
    }

    /// Colors the 5-tuple at `idx` after confirming its deltas are `expect`.
    fn inspect(&self, origin: Origin, idx: [usize; 5], expect: [u32; 4]) -> Result<Inspect> {
        let tuple: Vec<V> = idx.iter().map(|&i| self.vs[i].clone()).collect();
        let d: [u32; 4] = raw_deltas(&tuple)
            .map_err(|e| Error::Pipeline(format!("{origin:?}: tuple at {idx:?}: {e}")))?
            .try_into()
            .expect("five vertices");
        if d != expect {
            return Err(Error::Pipeline(format!(
                "{origin:?}: tuple at {idx:?} has deltas {d:?}, expected {expect:?}"
            )));
        }
        let hex: Vec<String> = tuple.iter().map(to_hex).collect();
        if self.sc.color_of(&tuple)?.is_red() {
            return Ok(Inspect::Red(self.cert(
                origin,
                Witness::NotABlueClique {
                    vertices: hex,
                    deltas: d,
                    rule: classify_pattern(d)?,
                },
            )));
        }
        Ok(Inspect::Blue(hex))
    }

    /// Realizes every 4-subset of a monotone run of delta values.
    fn monotone(
        &self,
        origin: Origin,
        direction: Direction,
        values: Vec<u32>,
        tuple_at: impl Fn([usize; 4]) -> [usize; 5],
    ) -> Result<ViolationCertificate> {
        let mut quads = Vec::new();
        for_each_lex_subset(values.len(), 4, |q| quads.push([q[0], q[1], q[2], q[3]]));
        let mut realizations = Vec::with_capacity(quads.len());
        for q in quads {
            let deltas = q.map(|i| values[i]);
            match self.inspect(origin, tuple_at(q), deltas)? {
                Inspect::Red(cert) => return Ok(cert),
                Inspect::Blue(vertices) => realizations.push(TupleRealization { deltas, vertices }),
            }
        }
        Ok(self.cert(
            origin,
            Witness::MonotoneNSet {
                direction,
                values,
                realizations,
            },
        ))
    }
}

/// Runs the blue-clique refutation on `vs` and returns whichever certificate
/// it reaches first.
pub fn build_abc_witness<V: DeltaVertex>(
    vs: &[V],
    sc: &StepColoring,
    params: PipelineParams,
) -> Result<ViolationCertificate> {
    params.validate()?;
    if sc.rule_set() != RuleSet::Main64 {
        return Err(Error::Precondition(
            "the pipeline runs on the main coloring".into(),
        ));
    }
    if vs.len() < params.min_vertices() {
        return Err(Error::Size(format!(
            "need at least 128n^4 = {} vertices, got {}",
            params.min_vertices(),
            vs.len()
        )));
    }
    let n = params.n;
    let len = params.run_len;
    let ctx = Ctx { vs, sc, params };
    let raw = raw_deltas(vs)?;

    // monotone stretch of the raw deltas
    if let Some(j) = find_monotone_run(&raw, len) {
        let run = &raw[j..j + len];
        let direction = monotone_direction(run).expect("monotone run");
        return ctx.monotone(Origin::DeltaRun, direction, run.to_vec(), |q| {
            let idx = subsequence_indices(run, &q).expect("picks inside a monotone run");
            std::array::from_fn(|t| idx[t] + j)
        });
    }

    let (mut maxima, _) = local_extrema(&raw)?;
    if maxima.len() < params.maxima_needed() {
        return Err(Error::Size(format!(
            "found {} local maxima of the delta sequence, need 32n^3 = {}",
            maxima.len(),
            params.maxima_needed()
        )));
    }
    maxima.truncate(params.maxima_needed());
    let mvals: Vec<u32> = maxima.iter().map(|&i| raw[i]).collect();

    // two equal maxima force a red rule-4 tuple
    let equal = (0..mvals.len()).find_map(|j| {
        (j + 1..mvals.len())
            .find(|&k| mvals[k] == mvals[j])
            .map(|k| (j, k))
    });
    if let Some((j, k)) = equal {
        let (ij, ik) = (maxima[j], maxima[k]);
        let l = (ij + 1..ik)
            .max_by(|&x, &y| raw[x].cmp(&raw[y]).then(y.cmp(&x)))
            .ok_or_else(|| Error::Pipeline(format!("adjacent equal maxima at {ij}, {ik}")))?;
        if raw[l] <= mvals[j] || ij + 1 >= ik - 1 {
            return Err(Error::Pipeline(format!(
                "equal maxima {} at delta positions {ij} and {ik} with nothing larger between",
                mvals[j]
            )));
        }
        let expect = [mvals[j], raw[l], raw[ik - 1], mvals[k]];
        return match ctx.inspect(
            Origin::EqualMaxima,
            [ij, ij + 1, ik - 1, ik, ik + 1],
            expect,
        )? {
            Inspect::Red(cert) => Ok(cert),
            Inspect::Blue(_) => Err(Error::Pipeline(format!(
                "equal-ends tuple with deltas {expect:?} came out blue"
            ))),
        };
    }

    // monotone run among the maxima
    if let Some(j) = find_monotone_run(&mvals, len) {
        let run = mvals[j..j + len].to_vec();
        let direction = monotone_direction(&run).expect("monotone run");
        let at = |t: usize| maxima[j + t];
        return ctx.monotone(
            Origin::MaximaRun,
            direction,
            run,
            |[a, b, c, d]| match direction {
                Direction::Increasing => [at(a), at(a) + 1, at(b) + 1, at(c) + 1, at(d) + 1],
                Direction::Decreasing => [at(a), at(b), at(c), at(d), at(d) + 1],
            },
        );
    }

    // alternating extrema of the maxima, starting at a maximum
    let (emax, emin) = local_extrema(&mvals)?;
    let mut ext: Vec<(usize, bool)> = emax
        .iter()
        .map(|&p| (p, true))
        .chain(emin.iter().map(|&p| (p, false)))
        .collect();
    ext.sort_unstable();
    let first = ext.iter().position(|e| e.1).unwrap_or(ext.len());
    let need = params.extrema_needed();
    if ext.len() - first < need {
        return Err(Error::Size(format!(
            "found {} consecutive extrema among the maxima, need 16n^2 = {need}",
            ext.len() - first
        )));
    }
    let ext = &ext[first..first + need];
    if ext.iter().enumerate().any(|(t, e)| e.1 != (t % 2 == 0)) {
        return Err(Error::Pipeline(
            "extrema of the maxima do not alternate".into(),
        ));
    }
    // raw position and value of each extremum
    let jpos: Vec<usize> = ext.iter().map(|e| maxima[e.0]).collect();
    let evals: Vec<u32> = ext.iter().map(|e| mvals[e.0]).collect();

    let search = find_dominant_peak_with(&evals, n, len)?;
    let k = match search.outcome {
        PeakOutcome::DecreasingChain { indices } => {
            let values: Vec<u32> = indices.iter().map(|&s| evals[s]).collect();
            let at = |t: usize| jpos[indices[t]];
            return ctx.monotone(
                Origin::PeakChain,
                Direction::Decreasing,
                values,
                |[a, b, c, d]| [at(a), at(b), at(c), at(d), at(d) + 1],
            );
        }
        PeakOutcome::IncreasingChain { indices } => {
            let values: Vec<u32> = indices.iter().map(|&t| evals[t]).collect();
            let at = |t: usize| jpos[indices[t]];
            return ctx.monotone(
                Origin::PeakChain,
                Direction::Increasing,
                values,
                |[a, b, c, d]| [at(a), at(a) + 1, at(b) + 1, at(c) + 1, at(d) + 1],
            );
        }
        PeakOutcome::Peak { index } => index,
    };
    if k % 2 != 0 {
        return Err(Error::Pipeline(format!(
            "dominant peak at extremum {k} is a minimum"
        )));
    }
    let r = 4 * n;
    let left: Vec<usize> = (k + 1 - r..k).step_by(2).collect();
    let right: Vec<usize> = (k + 1..k + r).step_by(2).collect();
    let mut gamma: Vec<usize> = left.iter().chain(&right).copied().collect();
    gamma.sort_unstable_by_key(|&p| evals[p]);
    let low = &gamma[..2 * n];
    let in_low = |p: &usize| low.contains(p);
    let pick = |side: &[usize], want_low: bool| -> Vec<usize> {
        let mut out: Vec<usize> = side
            .iter()
            .copied()
            .filter(|p| in_low(p) == want_low)
            .collect();
        out.sort_unstable_by_key(|&p| evals[p]);
        out.truncate(n);
        out
    };
    let branch = if left.iter().filter(|p| in_low(p)).count() >= n {
        Branch::Left
    } else {
        Branch::Right
    };
    let (a_pos, b_pos) = match branch {
        Branch::Left => (pick(&left, true), pick(&right, false)),
        Branch::Right => (pick(&right, true), pick(&left, false)),
    };
    if a_pos.len() != n || b_pos.len() != n {
        return Err(Error::Pipeline(format!(
            "peak at extremum {k}: |A| = {}, |B| = {}, need {n}",
            a_pos.len(),
            b_pos.len()
        )));
    }
    let partner = |q: usize| match branch {
        Branch::Left => q + 1,
        Branch::Right => q - 1,
    };
    let peak = evals[k];
    let mut realizations = Vec::with_capacity(n * n);
    for &p in &a_pos {
        for &q in &b_pos {
            let c = partner(q);
            let (idx, expect) = match branch {
                Branch::Left => (
                    [jpos[p], jpos[p] + 1, jpos[q], jpos[q] + 1, jpos[c] + 1],
                    [evals[p], peak, evals[q], evals[c]],
                ),
                Branch::Right => (
                    [jpos[c], jpos[q], jpos[q] + 1, jpos[p], jpos[p] + 1],
                    [evals[c], evals[q], peak, evals[p]],
                ),
            };
            match ctx.inspect(Origin::Peak, idx, expect)? {
                Inspect::Red(cert) => return Ok(cert),
                Inspect::Blue(vertices) => realizations.push(AbcRealization {
                    a: evals[p],
                    b: evals[q],
                    vertices,
                }),
            }
        }
    }
    let mut c: Vec<u32> = b_pos.iter().map(|&q| evals[partner(q)]).collect();
    c.sort_unstable();
    let w = AbcWitness {
        a: a_pos.iter().map(|&p| evals[p]).collect(),
        b: b_pos.iter().map(|&q| evals[q]).collect(),
        c,
        f: b_pos
            .iter()
            .map(|&q| (evals[q], evals[partner(q)]))
            .collect(),
    };
    w.check_structure(n)
        .map_err(|e| Error::Pipeline(format!("peak at extremum {k}: {e}")))?;
    let phi = sc.phi().expect("main coloring");
    if !w.satisfies_disjunction(phi) {
        return Err(Error::Pipeline(format!(
            "all A x B tuples are blue but the disjunction fails: {w:?}"
        )));
    }
    Ok(ctx.cert(
        Origin::Peak,
        Witness::AbcStructure {
            branch,
            peak_delta: peak,
            a: w.a,
            b: w.b,
            c: w.c,
            f: w.f,
            realizations,
        },
    ))
}
