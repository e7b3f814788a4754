//! Spectator-qubit estimation model: dynamics `f_γ`, Fisher information,
//! Cramér–Rao-saturating estimate noise, and the resulting mean fidelity loss.

use crate::ad41::{fe_best_guess, fe_optimal, h_func};
use crate::error::{Error, Result};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

/// Figure defaults for the spectator speed-up ratio.
pub const DEFAULT_GAMMAS: [f64; 4] = [1.0, 2.0, 5.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectatorConfig {
    /// Ratio of memory to spectator relaxation times.
    pub gamma: f64,
    /// Number of spectator qubits.
    pub m_qubits: usize,
}

impl SpectatorConfig {
    pub fn new(gamma: f64, m_qubits: usize) -> Result<Self> {
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma {gamma} must be >= 1")));
        }
        if m_qubits == 0 {
            return Err(Error::InvalidParameter("at least one spectator qubit".into()));
        }
        Ok(Self { gamma, m_qubits })
    }
}

/// `1 − (1 − θ)^γ`.
pub fn f_gamma(theta: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!("theta {theta} outside [0, 1]")));
    }
    if !(gamma >= 1.0) {
        return Err(Error::InvalidParameter(format!("gamma {gamma} must be >= 1")));
    }
    Ok(1.0 - (1.0 - theta).powf(gamma))
}

/// `M / (f(1 − f))`; diverges where the spectator is fully relaxed or untouched.
pub fn qfi_spectator(theta: f64, cfg: &SpectatorConfig) -> Result<f64> {
    let f = f_gamma(theta, cfg.gamma)?;
    // 1 − f computed directly so large γ keeps its precision near θ = 1.
    let denom = f * (1.0 - theta).powf(cfg.gamma);
    if !(denom > 0.0) {
        return Err(Error::FisherDivergence { theta });
    }
    Ok(cfg.m_qubits as f64 / denom)
}

/// Variance of an estimator saturating the quantum Cramér–Rao bound.
pub fn qcrb_variance(theta: f64, cfg: &SpectatorConfig) -> Result<f64> {
    Ok(1.0 / qfi_spectator(theta, cfg)?)
}

/// `−½ ∂²/∂θ̂² fe(θ, θ̂)` at `θ̂ = θ` by central differences.
pub fn g_numeric<F>(fe: F, theta: f64, step: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::OutOfDomain(format!("theta {theta} must be interior")));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!("step {step} must be positive")));
    }
    let up = fe(theta, theta + step)?;
    let mid = fe(theta, theta)?;
    let down = fe(theta, theta - step)?;
    let g = -0.5 * (up - 2.0 * mid + down) / (step * step);
    if !g.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(g)
}

/// Mean fidelity loss of the code when the spectator saturates the QCRB.
pub fn mean_delta_fe(theta: f64, cfg: &SpectatorConfig) -> Result<f64> {
    Ok(h_func(theta)? * qcrb_variance(theta, cfg)?)
}

/// Normal with mean `theta` and variance `variance`, truncated to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateModel {
    pub theta: f64,
    /// Pre-truncation variance; the truncated law has a smaller one.
    pub variance: f64,
}

impl EstimateModel {
    pub fn new(theta: f64, variance: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::OutOfDomain(format!("theta {theta} must be interior")));
        }
        if !(variance > 0.0) || !variance.is_finite() {
            return Err(Error::InvalidParameter(format!("variance {variance} must be positive")));
        }
        Ok(Self { theta, variance })
    }

    /// Estimate noise at the Cramér–Rao floor.
    pub fn saturating(theta: f64, cfg: &SpectatorConfig) -> Result<Self> {
        Self::new(theta, qcrb_variance(theta, cfg)?)
    }

    /// Inverse-CDF draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let std = Normal::standard();
        let sigma = self.variance.sqrt();
        let lo = std.cdf(-self.theta / sigma);
        let hi = std.cdf((1.0 - self.theta) / sigma);
        let u = lo + (hi - lo) * rng.random::<f64>();
        if !(u > 0.0 && u < 1.0) {
            return self.theta;
        }
        (self.theta + sigma * std.inverse_cdf(u)).clamp(0.0, 1.0)
    }
}

pub fn sample_estimate<R: Rng + ?Sized>(model: &EstimateModel, rng: &mut R) -> f64 {
    model.sample(rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig3Row {
    pub theta: f64,
    pub gamma: f64,
    pub m: usize,
    pub fe_perfect: f64,
    pub gap: f64,
    pub fe_incomplete: f64,
}

/// Rows ordered by γ, then θ.
pub fn fig3_data(gammas: &[f64], theta_grid: &[f64], m: usize) -> Result<Vec<Fig3Row>> {
    let mut rows = Vec::with_capacity(gammas.len() * theta_grid.len());
    for &gamma in gammas {
        let cfg = SpectatorConfig::new(gamma, m)?;
        let chunk = theta_grid
            .par_iter()
            .map(|&theta| {
                let fe_perfect = fe_optimal(theta)?;
                let gap = mean_delta_fe(theta, &cfg)?;
                Ok(Fig3Row { theta, gamma, m, fe_perfect, gap, fe_incomplete: fe_perfect - gap })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(chunk);
    }
    Ok(rows)
}

/// Sampled mean loss of the best-guess recovery against its second-order
/// prediction `g · Var`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub theta: f64,
    pub samples: usize,
    pub mean_gap: f64,
    pub std_error: f64,
    pub g: f64,
    pub empirical_variance: f64,
    /// `E[(θ̂ − θ)²]`, for reference.
    pub second_moment: f64,
    pub predicted: f64,
    pub allowance: f64,
    pub holds: bool,
}

pub fn fidelity_gap_monte_carlo<R: Rng + ?Sized>(
    theta: f64,
    cfg: &SpectatorConfig,
    samples: usize,
    rng: &mut R,
) -> Result<MonteCarloReport> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let model = EstimateModel::saturating(theta, cfg)?;
    let best = fe_optimal(theta)?;
    let mut hats = Vec::with_capacity(samples);
    let mut gaps = Vec::with_capacity(samples);
    for _ in 0..samples {
        let hat = model.sample(rng);
        hats.push(hat);
        gaps.push(best - fe_best_guess(theta, hat)?);
    }
    let n = samples as f64;
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / n;
    let var = |xs: &[f64], mu: f64| xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n - 1.0);
    let mean_gap = mean(&gaps);
    let std_error = (var(&gaps, mean_gap) / n).sqrt();
    let empirical_variance = var(&hats, mean(&hats));
    let second_moment = hats.iter().map(|h| (h - theta).powi(2)).sum::<f64>() / n;
    let g = g_numeric(fe_best_guess, theta, 1e-4)?;
    let predicted = g * empirical_variance;
    let allowance = 3.0 * std_error + empirical_variance.powf(1.5);
    Ok(MonteCarloReport {
        theta,
        samples,
        mean_gap,
        std_error,
        g,
        empirical_variance,
        second_moment,
        predicted,
        allowance,
        holds: (mean_gap - predicted).abs() <= allowance,
    })
}
