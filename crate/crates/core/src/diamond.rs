//! Diamond-distance estimation and the entanglement-fidelity bounds built on it.
//!
//! All distances are normalized: `½‖Q − S‖◇ ∈ [0, 1]`.

use crate::channel::{QuantumChannel, DIM_CAP};
use crate::error::{Error, Result};
use crate::fidelity::entanglement_fidelity;
use crate::linalg::{c, eigh, gaussian_vector, identity, kron, trace_norm_hermitian, CMat, CVec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Slack used when asserting one bound against another.
pub const TOL_REPORT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiamondOptions {
    pub starts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl DiamondOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self { starts: 32, max_iters: 500, tol: 1e-8, seed }
    }
}

/// Best pure input found by the estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct DiamondEstimate {
    /// `½‖(id⊗Q)(ψ) − (id⊗S)(ψ)‖₁` at `achieving_state`; a lower bound on the
    /// diamond distance.
    pub value: f64,
    /// Normalized state on reference ⊗ input, reference index most significant.
    pub achieving_state: CVec,
    pub starts_used: usize,
    pub converged: bool,
}

fn check_pair(q: &QuantumChannel, s: &QuantumChannel) -> Result<()> {
    if q.d_in() != s.d_in() || q.d_out() != s.d_out() {
        return Err(Error::DimensionMismatch(format!(
            "channels {}->{} and {}->{}",
            q.d_in(),
            q.d_out(),
            s.d_in(),
            s.d_out()
        )));
    }
    let joint = q.d_in() * q.d_out();
    if joint > DIM_CAP {
        return Err(Error::DimensionCap { dim: joint, cap: DIM_CAP });
    }
    Ok(())
}

/// Kraus operators of `id_R ⊗ Q` with the reference as large as the input.
fn extended_kraus(ch: &QuantumChannel) -> Vec<CMat> {
    let id = identity(ch.d_in());
    ch.kraus().iter().map(|k| kron(&id, k)).collect()
}

/// `(id⊗Q)(ψψ†) − (id⊗S)(ψψ†)`.
fn output_difference(a: &[CMat], b: &[CMat], psi: &CVec) -> CMat {
    let n = a[0].nrows();
    let mut out = CMat::zeros(n, n);
    for k in a {
        let v = k * psi;
        out += &v * v.adjoint();
    }
    for k in b {
        let v = k * psi;
        out -= &v * v.adjoint();
    }
    out
}

struct Ascent {
    value: f64,
    psi: CVec,
    converged: bool,
}

/// Alternating maximization of `Tr[P Δ(ψ)]`: `P` is the sign projector of the
/// current output difference, `ψ` the top eigenvector of `Σ A†PA − Σ B†PB`.
/// The objective is nondecreasing across iterations.
fn ascend(a: &[CMat], b: &[CMat], mut psi: CVec, opts: &DiamondOptions) -> Ascent {
    psi /= c(psi.norm(), 0.0);
    let mut diff = output_difference(a, b, &psi);
    let mut value = 0.5 * trace_norm_hermitian(&diff);
    for _ in 0..opts.max_iters {
        let (vals, vecs) = eigh(&diff);
        let n = vals.len();
        let mut sign = CMat::zeros(n, n);
        for (k, &lambda) in vals.iter().enumerate() {
            let s = if lambda > 0.0 { 1.0 } else if lambda < 0.0 { -1.0 } else { 0.0 };
            let col = vecs.column(k);
            sign += col * col.adjoint() * c(s, 0.0);
        }
        let dim = psi.len();
        let mut lin = CMat::zeros(dim, dim);
        for k in a {
            lin += k.adjoint() * &sign * k;
        }
        for k in b {
            lin -= k.adjoint() * &sign * k;
        }
        let (lvals, lvecs) = eigh(&lin);
        let candidate: CVec = lvecs.column(lvals.len() - 1).into_owned();
        let cand_diff = output_difference(a, b, &candidate);
        let cand_value = 0.5 * trace_norm_hermitian(&cand_diff);
        if cand_value <= value + opts.tol {
            if cand_value > value {
                psi = candidate;
                value = cand_value;
            }
            return Ascent { value, psi, converged: true };
        }
        psi = candidate;
        diff = cand_diff;
        value = cand_value;
    }
    Ascent { value, psi, converged: false }
}

/// Maximally entangled `Σᵢ|i⟩|i⟩/√d`.
pub fn maximally_entangled(d: usize) -> CVec {
    let mut v = CVec::zeros(d * d);
    let amp = c(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

pub(crate) fn start_seed(seed: u64, start: usize) -> u64 {
    seed ^ (start as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Multistart lower estimate of `½‖Q − S‖◇`; start 0 is always the maximally
/// entangled state. Deterministic for a fixed seed.
pub fn diamond_lower_estimate(
    q: &QuantumChannel,
    s: &QuantumChannel,
    opts: &DiamondOptions,
) -> Result<DiamondEstimate> {
    check_pair(q, s)?;
    let d = q.d_in();
    let a = extended_kraus(q);
    let b = extended_kraus(s);
    let starts = opts.starts.max(1);
    let runs: Vec<Ascent> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let psi0 = if k == 0 {
                maximally_entangled(d)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(start_seed(opts.seed, k));
                gaussian_vector(d * d, &mut rng)
            };
            ascend(&a, &b, psi0, opts)
        })
        .collect();
    let mut best = 0;
    for (k, run) in runs.iter().enumerate() {
        if run.value > runs[best].value + 1e-12 {
            best = k;
        }
    }
    let converged = runs.iter().all(|r| r.converged);
    let Ascent { value, psi, .. } = runs.into_iter().nth(best).expect("at least one start");
    Ok(DiamondEstimate {
        value: value.clamp(0.0, 1.0),
        achieving_state: psi,
        starts_used: starts,
        converged,
    })
}

/// `½‖Γ^Q − Γ^S‖₁` with unnormalized Choi matrices, an upper bound on the
/// normalized diamond distance.
pub fn diamond_upper_choi(q: &QuantumChannel, s: &QuantumChannel) -> Result<f64> {
    check_pair(q, s)?;
    let diff = q.choi().matrix() - s.choi().matrix();
    Ok(0.5 * trace_norm_hermitian(&diff))
}

/// `(d² − 1)/d²`.
pub fn kappa(d: usize) -> f64 {
    let d2 = (d * d) as f64;
    (d2 - 1.0) / d2
}

/// Exact distance between two depolarizing channels, `κ(d)|p₁ − p₂|`.
pub fn diamond_depolarizing_exact(p1: f64, p2: f64, d: usize) -> f64 {
    kappa(d) * (p1 - p2).abs()
}

/// `|F_e(Q) − F_e(S)|`, a lower bound on `½‖Q − S‖◇` for square channels.
pub fn fe_lower_bound(q: &QuantumChannel, s: &QuantumChannel) -> Result<f64> {
    check_pair(q, s)?;
    q.square_dim()?;
    Ok((entanglement_fidelity(q)? - entanglement_fidelity(s)?).abs())
}

/// Bracket on the distance between an optimal and a best-guess recovery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectatorGapBound {
    pub estimate: f64,
    pub upper: f64,
}

impl SpectatorGapBound {
    /// Rigorous check of a fidelity gap against the Choi upper bound.
    pub fn admits(&self, delta_fe: f64) -> bool {
        delta_fe <= self.upper + TOL_REPORT
    }

    /// Empirical tightness check against the estimator.
    pub fn tight_for(&self, delta_fe: f64) -> bool {
        delta_fe <= self.estimate + TOL_REPORT
    }
}

pub fn spectator_gap_bound(
    r_opt: &QuantumChannel,
    r_guess: &QuantumChannel,
    opts: &DiamondOptions,
) -> Result<SpectatorGapBound> {
    let estimate = diamond_lower_estimate(r_opt, r_guess, opts)?.value;
    let upper = diamond_upper_choi(r_opt, r_guess)?;
    Ok(SpectatorGapBound { estimate, upper })
}

/// `D(N_θ, N_θ̂) + ε_θ̂`.
pub fn chaining_upper_single(noise_gap: f64, eps_guess: f64) -> Result<f64> {
    if noise_gap < 0.0 || eps_guess < 0.0 {
        return Err(Error::InvalidParameter("chaining terms must be nonnegative".into()));
    }
    Ok(noise_gap + eps_guess)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperBoundReport {
    /// Sum of the recovery-error terms.
    pub epsilon_theta: f64,
    /// Sum of the channel-distinguishability terms.
    pub channel_gap: f64,
    pub total: f64,
    pub per_cycle: Vec<f64>,
}

/// `Σᵢ (gapᵢ + εᵢ)` over all cycles.
pub fn chaining_upper_multi(gaps: &[f64], eps: &[f64]) -> Result<UpperBoundReport> {
    if gaps.len() != eps.len() {
        return Err(Error::LengthMismatch { left: gaps.len(), right: eps.len() });
    }
    let per_cycle = gaps
        .iter()
        .zip(eps)
        .map(|(&g, &e)| chaining_upper_single(g, e))
        .collect::<Result<Vec<_>>>()?;
    Ok(UpperBoundReport {
        epsilon_theta: eps.iter().sum(),
        channel_gap: gaps.iter().sum(),
        total: per_cycle.iter().sum(),
        per_cycle,
    })
}
