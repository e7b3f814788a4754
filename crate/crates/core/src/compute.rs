//! File-based computations behind the `fe`, `diamond` and
//! `optimize-recovery` commands. Outputs are JSON values that record the
//! SHA-256 of every input file and the seed used.

use crate::channel::{compose, QuantumChannel};
use crate::chi::chi00;
use crate::diamond::{diamond_lower_estimate, diamond_upper_choi, fe_lower_bound, DiamondOptions};
use crate::error::{Error, Result};
use crate::fidelity::{average_fidelity, entanglement_fidelity, error_angle};
use crate::recovery::{optimize_recovery, RecoveryOptions};
use crate::report::write_atomic;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

pub fn load_channel(path: &Path) -> Result<(QuantumChannel, InputRecord)> {
    let bytes = std::fs::read(path)?;
    let record = InputRecord { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) };
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((QuantumChannel::from_json_str(text)?, record))
}

/// Process exit status for a failed command: 2 for unreadable or invalid
/// input, 3 for dimension problems, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::Io(_)
        | Error::NotTracePreserving { .. }
        | Error::NotPositive { .. }
        | Error::NonFinite => 2,
        Error::DimensionMismatch(_) | Error::DimensionCap { .. } | Error::NonSquare { .. } => 3,
        _ => 1,
    }
}

pub fn compute_fe(path: &Path) -> Result<Value> {
    let (ch, rec) = load_channel(path)?;
    let mut out = json!({
        "command": "fe",
        "inputs": [rec],
        "d_in": ch.d_in(),
        "d_out": ch.d_out(),
    });
    if ch.is_square() {
        out["fe"] = json!(entanglement_fidelity(&ch)?);
        out["fe_avg"] = json!(average_fidelity(&ch)?);
        out["error_angle"] = json!(error_angle(&ch)?);
        out["chi00"] = json!(chi00(&ch)?);
    } else {
        return Err(Error::NonSquare { d_in: ch.d_in(), d_out: ch.d_out() });
    }
    Ok(out)
}

pub fn compute_diamond(a: &Path, b: &Path, opts: &DiamondOptions) -> Result<Value> {
    let (qa, ra) = load_channel(a)?;
    let (qb, rb) = load_channel(b)?;
    let est = diamond_lower_estimate(&qa, &qb, opts)?;
    let mut out = json!({
        "command": "diamond",
        "inputs": [ra, rb],
        "seed": opts.seed,
        "starts": est.starts_used,
        "value": est.value,
        "upper_choi": diamond_upper_choi(&qa, &qb)?,
        "converged": est.converged,
    });
    if qa.is_square() {
        out["fe_gap_lower"] = json!(fe_lower_bound(&qa, &qb)?);
    }
    Ok(out)
}

pub fn compute_recovery(path: &Path, opts: &RecoveryOptions, out_path: Option<&Path>) -> Result<Value> {
    let (noise, rec) = load_channel(path)?;
    let sol = optimize_recovery(&noise, opts)?;
    let mut out = json!({
        "command": "optimize-recovery",
        "inputs": [rec],
        "seed": sol.seed,
        "fe_achieved": sol.fe_achieved,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "recovery_kraus": sol.recovery.kraus().len(),
    });
    if noise.is_square() {
        out["fe_without_recovery"] = json!(entanglement_fidelity(&noise)?);
    }
    if !sol.converged {
        out["warning"] = json!("iteration limit reached before convergence");
    }
    let check = entanglement_fidelity(&compose(&sol.recovery, &noise)?)?;
    debug_assert!((check - sol.fe_achieved).abs() < 1e-10);
    if let Some(p) = out_path {
        write_atomic(p, &sol.recovery.to_json_string())?;
        out["recovery_path"] = json!(p.display().to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::depolarizing;

    fn write(dir: &Path, name: &str, ch: &QuantumChannel) -> std::path::PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, ch.to_json_string()).unwrap();
        p
    }

    #[test]
    fn fe_of_identity_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "id.json", &QuantumChannel::identity(2).unwrap());
        let v = compute_fe(&p).unwrap();
        assert_eq!(v["fe"].as_f64().unwrap(), 1.0);
        assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    }

    #[test]
    fn diamond_of_depolarizing_files() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a.json", &depolarizing(2, 0.0).unwrap());
        let b = write(dir.path(), "b.json", &depolarizing(2, 1.0).unwrap());
        let v = compute_diamond(&a, &b, &DiamondOptions::with_seed(1)).unwrap();
        assert!((v["value"].as_f64().unwrap() - 0.75).abs() < 1e-4);
        assert_eq!(v["seed"].as_u64().unwrap(), 1);
    }

    #[test]
    fn error_classes() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, "{not json").unwrap();
        assert_eq!(exit_code(&compute_fe(&bad).unwrap_err()), 2);
        let a = write(dir.path(), "a.json", &depolarizing(2, 0.1).unwrap());
        let b = write(dir.path(), "b.json", &depolarizing(3, 0.1).unwrap());
        let err = compute_diamond(&a, &b, &DiamondOptions::with_seed(1)).unwrap_err();
        assert_eq!(exit_code(&err), 3);
        assert_eq!(exit_code(&Error::InvalidParameter("x".into())), 1);
    }
}
