use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use serde_json::Value;
use stepup_core::{Error, PairColoring, QuadColoring, Result};

pub fn load_phi(path: &Path) -> Result<PairColoring> {
    PairColoring::load(path)
}

pub fn load_psi(path: &Path) -> Result<QuadColoring> {
    QuadColoring::load(path)
}

/// Decimal, or hex with a `0x` prefix.
pub fn parse_vertex_arg(s: &str) -> Result<BigUint> {
    let parsed = match s.strip_prefix("0x") {
        Some(hex) => BigUint::parse_bytes(hex.as_bytes(), 16),
        None => BigUint::parse_bytes(s.as_bytes(), 10),
    };
    parsed.ok_or_else(|| Error::Precondition(format!("cannot parse vertex {s:?}")))
}

/// JSON array whose entries are numbers or hex strings (with or without `0x`).
pub fn load_vertices(path: &Path) -> Result<Vec<BigUint>> {
    let text = fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    let Value::Array(items) = value else {
        return Err(Error::Format(format!(
            "{}: expected a JSON array",
            path.display()
        )));
    };
    items
        .iter()
        .map(|item| match item {
            Value::Number(n) => n
                .as_u64()
                .map(BigUint::from)
                .ok_or_else(|| Error::Format(format!("vertex {n} is not a non-negative integer"))),
            Value::String(s) => {
                let hex = s.strip_prefix("0x").unwrap_or(s);
                BigUint::parse_bytes(hex.as_bytes(), 16)
                    .ok_or_else(|| Error::Format(format!("bad hex vertex {s:?}")))
            }
            other => Err(Error::Format(format!("unexpected vertex entry {other}"))),
        })
        .collect()
}

pub fn save_vertices(path: &Path, vs: &[BigUint]) -> Result<()> {
    let hex: Vec<String> = vs.iter().map(|v| v.to_str_radix(16)).collect();
    fs::write(path, serde_json::to_string(&hex)? + "\n")?;
    Ok(())
}

pub fn to_u64s(vs: &[BigUint]) -> Result<Vec<u64>> {
    vs.iter()
        .map(|v| {
            u64::try_from(v)
                .map_err(|_| Error::Precondition(format!("vertex {v} does not fit in 64 bits")))
        })
        .collect()
}
