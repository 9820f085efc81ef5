use std::fs;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};
use stepup_core::base::{
    count_bad_4tuples, expected_counts, find_abc_structure, find_bad4_free_nset, generate_phi,
    greedy_partial_steiner,
};
use stepup_core::cliquesearch::{
    max_blue_clique, max_red_in_six, max_red_in_six_variant, SearchBudget,
};
use stepup_core::combinatorics::with_workers;
use stepup_core::delta::raw_deltas;
use stepup_core::extrema::planted::{self, Planted};
use stepup_core::extrema::{build_abc_witness, verify_certificate, Branch, PipelineParams};
use stepup_core::proofcheck::{
    check_six_point_claim, check_six_point_claim_variant, integer_cross_check, replay_case,
    CaseReport, ClaimSummary,
};
use stepup_core::stepup::{classify_pattern, induced_deltas};
use stepup_core::{Error, Result, RuleSet, StepColoring, ViolationCertificate};

use crate::args::{self, Cli, PlantedKind};
use crate::files::{load_phi, load_psi, load_vertices, parse_vertex_arg, save_vertices, to_u64s};

/// Exit status of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Violation = 1,
    Inconclusive = 2,
}

fn emit(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// JSON without the wall-clock field, so reruns print identical bytes.
fn without_seconds(value: &impl Serialize) -> Result<Value> {
    let mut v = serde_json::to_value(value)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("seconds");
    }
    Ok(v)
}

fn search_budget(cli: &Cli, max_seconds: Option<f64>) -> SearchBudget {
    SearchBudget {
        max_subsets: cli.budget,
        max_seconds,
        workers: cli.workers,
    }
}

pub fn gen_phi(cli: &Cli, a: &args::GenPhi, seed: u64) -> Result<Status> {
    let g = match with_workers(cli.workers, || {
        generate_phi(a.n, a.m, seed, a.attempts, cli.budget)
    }) {
        Ok(g) => g,
        Err(Error::SearchExhausted { attempts, note }) => {
            eprintln!("no coloring accepted after {attempts} attempts; this is inconclusive");
            emit(
                &json!({"status": "exhausted", "n": a.n, "m": a.m, "seed": seed, "attempts": attempts, "note": note}),
            )?;
            return Ok(Status::Inconclusive);
        }
        Err(e) => return Err(e),
    };
    g.phi.save(&a.out)?;
    eprintln!("accepted after {} attempts", g.log.attempts);
    emit(&json!({
        "status": "accepted",
        "n": a.n,
        "m": a.m,
        "seed": seed,
        "log": g.log,
        "red_pairs": g.phi.red_count(),
        "out": a.out,
    }))?;
    Ok(Status::Ok)
}

pub fn check_phi(cli: &Cli, a: &args::CheckPhi) -> Result<Status> {
    let phi = load_phi(&a.phi)?;
    let free = with_workers(cli.workers, || find_bad4_free_nset(&phi, a.n, cli.budget))?;
    let abc = with_workers(cli.workers, || find_abc_structure(&phi, a.n, cli.budget))?;
    let admissible = free.is_none() && abc.is_none();
    emit(&json!({
        "ground_size": phi.ground_size(),
        "seed": phi.seed(),
        "n": a.n,
        "bad_4tuples": count_bad_4tuples(&phi),
        "bad4_free_set": free,
        "abc_structure": abc,
        "admissible": admissible,
    }))?;
    Ok(if admissible {
        Status::Ok
    } else {
        Status::Violation
    })
}

fn print_case_table(s: &ClaimSummary) {
    eprintln!("case  signs  patterns  strict  assignments  max red");
    for (label, st) in &s.per_case {
        eprintln!(
            "{:<5} {:<6} {:>8}  {:>6}  {:>11}  {:>7}",
            label.to_string(),
            label.signs(),
            st.patterns,
            st.strict_patterns,
            st.assignments,
            st.max_red
        );
    }
    eprintln!("global max {} (bound {})", s.global_max, s.threshold);
}

pub fn proofcheck(a: &args::Proofcheck) -> Result<Status> {
    if let Some(path) = &a.replay {
        let report: CaseReport = serde_json::from_str(&fs::read_to_string(path)?)?;
        let out = replay_case(&report)?;
        let agrees = out.agrees;
        emit(&out)?;
        return Ok(if agrees {
            Status::Ok
        } else {
            Status::Violation
        });
    }
    let result = if a.variant {
        check_six_point_claim_variant(!a.no_hypothesis_filter)
    } else {
        check_six_point_claim()
    };
    match result {
        Ok(summary) => {
            print_case_table(&summary);
            emit(&summary)?;
            Ok(Status::Ok)
        }
        Err(Error::ClaimViolation(report)) => {
            eprintln!(
                "claim violated: {} red edges, case {}; replay with --replay",
                report.red_count, report.case_label
            );
            emit(&json!({"status": "violation", "report": report}))?;
            Ok(Status::Violation)
        }
        Err(e) => Err(e),
    }
}

fn coloring(phi: Option<&Path>, psi: Option<&Path>, bits: Option<u32>) -> Result<StepColoring> {
    match (phi, psi) {
        (Some(p), None) => {
            let phi = load_phi(p)?;
            let bits = bits.unwrap_or(phi.ground_size());
            StepColoring::main(phi, bits)
        }
        (None, Some(p)) => {
            let psi = load_psi(p)?;
            let bits = bits.unwrap_or(psi.ground_size());
            StepColoring::variant(psi, bits)
        }
        _ => Err(Error::Precondition(
            "give exactly one of --phi and --psi".into(),
        )),
    }
}

fn search_vertices(a: &args::Verify) -> Result<Vec<u64>> {
    match &a.vertices {
        Some(p) => to_u64s(&load_vertices(p)?),
        None if a.bits <= 24 => Ok((0..1u64 << a.bits).collect()),
        None => Err(Error::Resource(format!(
            "full range of 2^{} vertices is too large; pass --vertices",
            a.bits
        ))),
    }
}

pub fn verify(cli: &Cli, a: &args::Verify) -> Result<Status> {
    let sc = coloring(a.phi.as_deref(), a.psi.as_deref(), Some(a.bits))?;
    let vs = search_vertices(a)?;
    let budget = search_budget(cli, a.max_seconds);
    let scan = match sc.rule_set() {
        RuleSet::Main64 => max_red_in_six(&sc, &vs, &budget)?,
        RuleSet::Variant65 => max_red_in_six_variant(&sc, &vs, &budget)?,
    };
    eprintln!(
        "max red {} over {} subsets ({:.2}s){}",
        scan.max,
        scan.subsets_scanned,
        scan.seconds,
        if scan.exact { "" } else { ", truncated" }
    );
    let mut out = without_seconds(&scan)?;
    let mut mismatch = false;
    if a.cross_check {
        let phi = sc
            .phi()
            .ok_or_else(|| Error::Precondition("--cross-check needs --phi".into()))?;
        if a.vertices.is_some() {
            return Err(Error::Precondition(
                "--cross-check scans the full range only".into(),
            ));
        }
        let cross = integer_cross_check(a.bits, phi, cli.budget, cli.workers)?;
        mismatch = cross.mismatches > 0;
        out["cross_check"] = serde_json::to_value(cross)?;
    }
    emit(&out)?;
    Ok(if scan.exceeds_threshold || mismatch {
        Status::Violation
    } else if !scan.exact {
        Status::Inconclusive
    } else {
        Status::Ok
    })
}

pub fn clique(cli: &Cli, a: &args::Verify) -> Result<Status> {
    let sc = coloring(a.phi.as_deref(), a.psi.as_deref(), Some(a.bits))?;
    let vs = search_vertices(a)?;
    let res = max_blue_clique(&sc, &vs, &search_budget(cli, a.max_seconds))?;
    eprintln!(
        "blue clique of size {} after {} nodes ({:.2}s){}",
        res.size,
        res.nodes,
        res.seconds,
        if res.exact {
            ", exact"
        } else {
            ", lower bound only"
        }
    );
    emit(&without_seconds(&res)?)?;
    Ok(if res.exact {
        Status::Ok
    } else {
        Status::Inconclusive
    })
}

fn planted_input(kind: PlantedKind, n: usize, seed: u64) -> Result<Planted> {
    match kind {
        PlantedKind::Monotone => planted::monotone(n, seed),
        PlantedKind::EqualMaxima => planted::equal_maxima(n, seed),
        PlantedKind::AbcLeft => planted::abc(n, seed, Branch::Left),
        PlantedKind::AbcRight => planted::abc(n, seed, Branch::Right),
    }
}

fn params(a: &args::Witness) -> PipelineParams {
    let p = PipelineParams::new(a.n);
    match a.run_len {
        Some(r) => p.with_run_len(r),
        None => p,
    }
}

fn write_bundle(
    dir: &Path,
    sc: &StepColoring,
    vs: &[BigUint],
    cert: &ViolationCertificate,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    if let Some(phi) = sc.phi() {
        phi.save(dir.join("phi.bin"))?;
    }
    save_vertices(&dir.join("vertices.json"), vs)?;
    fs::write(dir.join("cert.json"), cert.to_json()? + "\n")?;
    Ok(())
}

pub fn witness(a: &args::Witness, seed: u64) -> Result<Status> {
    if let Some(path) = &a.replay {
        let cert = ViolationCertificate::from_json(&fs::read_to_string(path)?)?;
        let sc = coloring(a.phi.as_deref(), None, a.bits)?;
        let vs = load_vertices(a.vertices.as_deref().expect("required by clap"))?;
        let accepted = match verify_certificate(&cert, &sc, &vs) {
            Ok(ok) => ok,
            Err(Error::Certificate(msg)) => {
                eprintln!("rejected: {msg}");
                false
            }
            Err(e) => return Err(e),
        };
        eprintln!(
            "{} certificate {}",
            cert.kind(),
            if accepted { "accepted" } else { "rejected" }
        );
        emit(&json!({"kind": cert.kind(), "origin": cert.origin, "accepted": accepted}))?;
        return Ok(if accepted {
            Status::Ok
        } else {
            Status::Violation
        });
    }
    let (vs, sc, params) = match a.planted {
        Some(kind) => {
            let p = planted_input(kind, a.n, seed)?;
            let params = match a.run_len {
                Some(r) => p.params.with_run_len(r),
                None => p.params,
            };
            (p.vertices, p.coloring, params)
        }
        None => {
            let (Some(phi), Some(vpath)) = (&a.phi, &a.vertices) else {
                return Err(Error::Precondition(
                    "witness needs --replay, --planted, or both --phi and --vertices".into(),
                ));
            };
            let sc = coloring(Some(phi), None, a.bits)?;
            (load_vertices(vpath)?, sc, params(a))
        }
    };
    let cert = build_abc_witness(&vs, &sc, params)?;
    let accepted = verify_certificate(&cert, &sc, &vs)?;
    eprintln!(
        "{} certificate from {:?} over {} vertices; replay {}",
        cert.kind(),
        cert.origin,
        vs.len(),
        if accepted { "accepts" } else { "REJECTS" }
    );
    if let Some(dir) = &a.out_dir {
        write_bundle(dir, &sc, &vs, &cert)?;
    }
    emit(&cert)?;
    Ok(if accepted {
        Status::Ok
    } else {
        Status::Violation
    })
}

pub fn steiner(a: &args::Steiner) -> Result<Status> {
    let s = greedy_partial_steiner(a.n)?;
    eprintln!("{} blocks on {} points", s.block_count(), a.n);
    if a.count_only {
        emit(&json!({"n": a.n, "block_count": s.block_count()}))?;
    } else {
        emit(&json!({"n": a.n, "block_count": s.block_count(), "blocks": s.blocks}))?;
    }
    Ok(Status::Ok)
}

pub fn bounds(a: &args::Bounds) -> Result<Status> {
    let e = expected_counts(a.n, a.m);
    eprintln!(
        "abc expectation {:.6e}, good-set bound {:.6e}",
        e.abc_expectation, e.good_set_bound
    );
    emit(&e)?;
    Ok(Status::Ok)
}

pub fn chi_eval(a: &args::ChiEval) -> Result<Status> {
    let sc = coloring(a.phi.as_deref(), a.psi.as_deref(), a.bits)?;
    let vs: Vec<BigUint> = a
        .vertices
        .iter()
        .map(|s| parse_vertex_arg(s))
        .collect::<Result<_>>()?;
    let raw = raw_deltas(&vs)?;
    if vs.len() == 5 {
        let color = sc.color_of(&vs)?;
        let d = [raw[0], raw[1], raw[2], raw[3]];
        emit(&json!({"deltas": raw, "rule": classify_pattern(d)?, "color": color}))?;
    } else {
        let d = [raw[0], raw[1], raw[2], raw[3], raw[4]];
        let mut edges = Vec::new();
        let mut red = 0;
        for omit in 0..6 {
            let color = sc.color_on_subset(&vs, omit)?;
            red += u32::from(color.is_red());
            edges.push(json!({"omit": omit, "deltas": induced_deltas(&d, omit), "color": color}));
        }
        emit(&json!({"deltas": raw, "edges": edges, "red_count": red}))?;
    }
    Ok(Status::Ok)
}

/// Wall-clock note for the human-readable stream.
pub fn timed<T>(f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    eprintln!("done in {:.2}s", start.elapsed().as_secs_f64());
    out
}
