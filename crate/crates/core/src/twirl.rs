//! Channel twirling over finite unitary ensembles and the analytic Haar twirl.

use crate::channel::{depolarizing_extended, QuantumChannel};
use crate::diamond::{diamond_lower_estimate, DiamondOptions, TOL_REPORT};
use crate::error::{Error, Result};
use crate::fidelity::average_fidelity;
use crate::linalg::{c, max_abs_diff, unitarity_defect, CMat, C64};
use crate::operators::{hadamard, pauli_string, phase_s};
use serde::Serialize;

/// Kraus operators below this Frobenius norm are dropped after twirling.
const PRUNE_TOL: f64 = 1e-12;

/// Weighted set of unitaries `{p(x), U(x)}`.
#[derive(Debug, Clone)]
pub struct UnitaryEnsemble {
    unitaries: Vec<CMat>,
    weights: Vec<f64>,
}

impl UnitaryEnsemble {
    pub fn new(unitaries: Vec<CMat>, weights: Vec<f64>) -> Result<Self> {
        if unitaries.is_empty() {
            return Err(Error::InvalidParameter("empty ensemble".into()));
        }
        if unitaries.len() != weights.len() {
            return Err(Error::LengthMismatch { left: unitaries.len(), right: weights.len() });
        }
        let d = unitaries[0].nrows();
        for u in &unitaries {
            if u.nrows() != d || u.ncols() != d {
                return Err(Error::DimensionMismatch("ensemble elements differ in shape".into()));
            }
            if unitarity_defect(u) > 1e-10 {
                return Err(Error::InvalidParameter("ensemble element is not unitary".into()));
            }
        }
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidParameter("negative ensemble weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}")));
        }
        Ok(Self { unitaries, weights })
    }

    pub fn uniform(unitaries: Vec<CMat>) -> Result<Self> {
        let w = 1.0 / unitaries.len().max(1) as f64;
        let weights = vec![w; unitaries.len()];
        Self::new(unitaries, weights)
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn unitaries(&self) -> &[CMat] {
        &self.unitaries
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σₓ p(x) U(x) ρ U(x)†`.
    pub fn average_conjugation(&self, rho: &CMat) -> CMat {
        let mut acc = CMat::zeros(rho.nrows(), rho.ncols());
        for (u, w) in self.unitaries.iter().zip(&self.weights) {
            acc += u * rho * u.adjoint() * c(*w, 0.0);
        }
        acc
    }
}

/// `Σₓ p(x) U(x)† ∘ Q ∘ U(x)`.
pub fn twirl_discrete(ch: &QuantumChannel, ensemble: &UnitaryEnsemble) -> Result<QuantumChannel> {
    let d = ch.square_dim()?;
    if ensemble.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "ensemble acts on {} dims, channel on {d}",
            ensemble.dim()
        )));
    }
    let mut kraus = Vec::with_capacity(ensemble.len() * ch.kraus().len());
    for (u, w) in ensemble.unitaries.iter().zip(&ensemble.weights) {
        let sw = c(w.sqrt(), 0.0);
        for k in ch.kraus() {
            kraus.push(u.adjoint() * k * u * sw);
        }
    }
    Ok(QuantumChannel::new(d, d, kraus)?.pruned(PRUNE_TOL))
}

/// Uniform ensemble of all `4ⁿ` Pauli strings on `n ≤ 3` qubits.
pub fn pauli_ensemble(n_qubits: usize) -> Result<UnitaryEnsemble> {
    if n_qubits == 0 || n_qubits > 3 {
        return Err(Error::InvalidParameter(format!(
            "Pauli ensemble supports 1 to 3 qubits, got {n_qubits}"
        )));
    }
    let letters = ['I', 'X', 'Y', 'Z'];
    let mut ops = Vec::with_capacity(1 << (2 * n_qubits));
    for idx in 0..(1usize << (2 * n_qubits)) {
        let label: String = (0..n_qubits)
            .rev()
            .map(|q| letters[(idx >> (2 * q)) & 3])
            .collect();
        ops.push(pauli_string(&label).expect("valid Pauli label"));
    }
    UnitaryEnsemble::uniform(ops)
}

/// Fixes the global phase so the first entry of largest modulus is real positive.
fn canonical_phase(u: &CMat) -> CMat {
    let mut pivot = C64::new(0.0, 0.0);
    for z in u.iter() {
        if z.norm() > pivot.norm() + 1e-9 {
            pivot = *z;
        }
    }
    u * (pivot.conj() / pivot.norm())
}

/// The 24 single-qubit Clifford unitaries (modulo global phase), generated
/// from `H` and `S`.
pub fn clifford_ensemble_1q() -> UnitaryEnsemble {
    let generators = [hadamard(), phase_s()];
    let mut group = vec![canonical_phase(&crate::linalg::identity(2))];
    let mut frontier = group.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for h in &generators {
                let cand = canonical_phase(&(h * g));
                if !group.iter().any(|e| max_abs_diff(e, &cand) < 1e-9) {
                    group.push(cand.clone());
                    next.push(cand);
                }
            }
        }
        frontier = next;
    }
    UnitaryEnsemble::uniform(group).expect("Clifford elements are unitary")
}

/// Closed-form Haar twirl: the depolarizing channel with
/// `p = d(1 − F_avg)/(d − 1)`.
pub fn haar_twirl_analytic(ch: &QuantumChannel) -> Result<QuantumChannel> {
    let d = ch.square_dim()?;
    depolarizing_extended(d, haar_twirl_parameter(ch)?)
}

pub fn haar_twirl_parameter(ch: &QuantumChannel) -> Result<f64> {
    let d = ch.square_dim()? as f64;
    let f_avg = average_fidelity(ch)?;
    Ok((d * (1.0 - f_avg) / (d - 1.0)).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwirlDpiReport {
    /// Estimated distance between the untwirled channels.
    pub lhs: f64,
    /// Estimated distance between the twirled channels.
    pub rhs: f64,
    pub holds: bool,
}

/// Checks that twirling does not increase the estimated diamond distance.
pub fn check_twirl_dpi(
    q: &QuantumChannel,
    s: &QuantumChannel,
    ensemble: &UnitaryEnsemble,
    opts: &DiamondOptions,
) -> Result<TwirlDpiReport> {
    let lhs = diamond_lower_estimate(q, s, opts)?.value;
    let tq = twirl_discrete(q, ensemble)?;
    let ts = twirl_discrete(s, ensemble)?;
    let rhs = diamond_lower_estimate(&tq, &ts, opts)?.value;
    Ok(TwirlDpiReport { lhs, rhs, holds: lhs >= rhs - TOL_REPORT })
}
