//! Numerical search for the recovery channel maximizing `F_e(R∘N)`.
//!
//! The recovery is held as a Stinespring isometry `V: D → d·env`, with Kraus
//! operator `R_k` occupying rows `k·d .. (k+1)·d`. The objective
//! `(1/d²) Σ_{i,k} |Tr R_k N_i|²` is a convex quadratic in `V`; each step moves
//! along the Euclidean gradient and retracts with the polar factor, so every
//! iterate is exactly CPTP.

use crate::channel::{compose, QuantumChannel, DIM_CAP};
use crate::diamond::start_seed;
use crate::error::{Error, Result};
use crate::fidelity::entanglement_fidelity;
use crate::linalg::{gaussian_matrix, inner, polar_isometry, CMat, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const ARMIJO: f64 = 1e-4;
const INITIAL_STEP: f64 = 1e6;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryOptions {
    /// Stinespring environment size; `None` means the full `d·D`.
    pub env_dim: Option<usize>,
    pub starts: usize,
    pub max_iters: usize,
    /// Stop once an iteration improves the objective by less than this.
    pub tol: f64,
    pub seed: u64,
}

impl RecoveryOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self { env_dim: None, starts: 8, max_iters: 500, tol: 1e-13, seed }
    }
}

#[derive(Debug, Clone)]
pub struct RecoverySolution {
    /// Maps the noise output space back to the logical space.
    pub recovery: QuantumChannel,
    pub fe_achieved: f64,
    /// Iterations used by the winning start.
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
}

/// The objective and its gradient for a fixed noise channel.
pub(crate) struct Objective {
    d: usize,
    big_d: usize,
    /// Transposed noise Kraus operators, `d × D` each.
    transposed: Vec<CMat>,
}

impl Objective {
    pub(crate) fn new(noise: &QuantumChannel) -> Self {
        Self {
            d: noise.d_in(),
            big_d: noise.d_out(),
            transposed: noise.kraus().iter().map(|k| k.transpose()).collect(),
        }
    }

    fn block<'a>(&self, v: &'a CMat, k: usize) -> nalgebra::DMatrixView<'a, C64> {
        v.view((k * self.d, 0), (self.d, self.big_d))
    }

    fn overlaps(&self, v: &CMat) -> Vec<Vec<C64>> {
        let env = v.nrows() / self.d;
        self.transposed
            .iter()
            .map(|t| (0..env).map(|k| self.block(v, k).component_mul(t).sum()).collect())
            .collect()
    }

    pub(crate) fn value(&self, v: &CMat) -> f64 {
        let norm = (self.d * self.d) as f64;
        self.overlaps(v).iter().flatten().map(|z| z.norm_sqr()).sum::<f64>() / norm
    }

    /// `G` with `df = Re⟨G, dV⟩`.
    pub(crate) fn gradient(&self, v: &CMat) -> CMat {
        let env = v.nrows() / self.d;
        let scale = 2.0 / (self.d * self.d) as f64;
        let overlaps = self.overlaps(v);
        let mut g = CMat::zeros(v.nrows(), v.ncols());
        for (t, row) in self.transposed.iter().zip(&overlaps) {
            let tc = t.map(|z| z.conj());
            for (k, &ov) in row.iter().enumerate().take(env) {
                let mut blk = g.view_mut((k * self.d, 0), (self.d, self.big_d));
                blk += &tc * (ov * scale);
            }
        }
        g
    }
}

pub(crate) struct Ascent {
    pub(crate) v: CMat,
    pub(crate) value: f64,
    pub(crate) history: Vec<f64>,
    pub(crate) converged: bool,
}

pub(crate) fn ascend(obj: &Objective, mut v: CMat, max_iters: usize, tol: f64) -> Ascent {
    let mut value = obj.value(&v);
    let mut history = vec![value];
    for _ in 0..max_iters {
        let g = obj.gradient(&v);
        let mut step = INITIAL_STEP;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand = polar_isometry(&(&v + &g * C64::new(step, 0.0)));
            let cand_value = obj.value(&cand);
            let predicted = inner(&g, &(&cand - &v)).re;
            if cand_value - value >= ARMIJO * predicted {
                accepted = Some((cand, cand_value));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, cand_value)) = accepted else {
            return Ascent { v, value, history, converged: true };
        };
        let gain = cand_value - value;
        if gain >= 0.0 {
            v = cand;
            value = cand_value;
        }
        history.push(value);
        if gain < tol {
            return Ascent { v, value, history, converged: true };
        }
    }
    Ascent { v, value, history, converged: false }
}

fn isometry_to_channel(v: &CMat, d: usize) -> Result<QuantumChannel> {
    let env = v.nrows() / d;
    let kraus = (0..env).map(|k| v.rows(k * d, d).into_owned()).collect();
    Ok(QuantumChannel::new(v.ncols(), d, kraus)?.pruned(1e-12))
}

/// Best recovery over `opts.starts` random isometric starts.
pub fn optimize_recovery(noise: &QuantumChannel, opts: &RecoveryOptions) -> Result<RecoverySolution> {
    let d = noise.d_in();
    let big_d = noise.d_out();
    if d * big_d > DIM_CAP {
        return Err(Error::DimensionCap { dim: d * big_d, cap: DIM_CAP });
    }
    let env = opts.env_dim.unwrap_or(d * big_d);
    if env == 0 || env > d * big_d {
        return Err(Error::InvalidParameter(format!("env_dim {env} outside 1..={}", d * big_d)));
    }
    if env * d < big_d {
        return Err(Error::InvalidParameter(format!(
            "env_dim {env} too small for an isometry from dimension {big_d}"
        )));
    }
    let obj = Objective::new(noise);
    let starts = opts.starts.max(1);
    let runs: Vec<Ascent> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(start_seed(opts.seed, k));
            let v0 = polar_isometry(&gaussian_matrix(env * d, big_d, &mut rng));
            ascend(&obj, v0, opts.max_iters, opts.tol)
        })
        .collect();
    let mut best = 0;
    for (k, run) in runs.iter().enumerate() {
        if run.value > runs[best].value + 1e-12 {
            best = k;
        }
    }
    let run = runs.into_iter().nth(best).expect("at least one start");
    let recovery = isometry_to_channel(&run.v, d)?;
    let fe_achieved = entanglement_fidelity(&compose(&recovery, noise)?)?;
    Ok(RecoverySolution {
        recovery,
        fe_achieved,
        iterations: run.history.len() - 1,
        converged: run.converged,
        seed: opts.seed,
    })
}

/// Recovery tuned to the estimate `θ̂`; evaluate it against the true noise by
/// composing with `family(θ)`.
pub fn recovery_for_estimate<F>(family: F, theta_hat: f64, opts: &RecoveryOptions) -> Result<RecoverySolution>
where
    F: Fn(f64) -> Result<QuantumChannel>,
{
    optimize_recovery(&family(theta_hat)?, opts)
}
