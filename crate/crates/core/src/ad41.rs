//! The four-qubit amplitude-damping code and its closed-form fidelities.
//!
//! Basis states are ordered with qubit 0 as the most significant bit, so
//! `|0011⟩` is index 3.

use crate::channel::{amplitude_damping, compose, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, identity, CMat};
use crate::operators::pauli_string;
use serde::Serialize;
use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

/// Stabilizer generators of the code.
pub const STABILIZERS: [&str; 3] = ["XXXX", "ZZII", "IIZZ"];

/// `[|0_L⟩ |1_L⟩]` with `|0_L⟩ = (|0000⟩+|1111⟩)/√2`, `|1_L⟩ = (|0011⟩+|1100⟩)/√2`.
pub fn encode_isometry() -> CMat {
    let amp = c(1.0 / SQRT_2, 0.0);
    let mut m = CMat::zeros(16, 2);
    m[(0b0000, 0)] = amp;
    m[(0b1111, 0)] = amp;
    m[(0b0011, 1)] = amp;
    m[(0b1100, 1)] = amp;
    m
}

/// Projector onto the joint +1 eigenspace of the stabilizer generators.
pub fn stabilizer_projector() -> CMat {
    let id = identity(16);
    STABILIZERS.iter().fold(id.clone(), |acc, s| {
        let g = pauli_string(s).expect("valid Pauli label");
        acc * (&id + g) * c(0.5, 0.0)
    })
}

/// Encoding followed by independent amplitude damping on each physical qubit.
pub fn logical_noise(theta: f64) -> Result<QuantumChannel> {
    let physical = amplitude_damping(theta)?.tensor_power(4)?;
    let encode = QuantumChannel::isometry(encode_isometry())?;
    compose(&physical, &encode)
}

/// Parameters of the channel-adapted recovery family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoveryParams {
    pub alpha_abs: f64,
    pub psi: f64,
    pub phi: f64,
}

impl RecoveryParams {
    pub fn new(alpha_abs: f64, psi: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha_abs) || !psi.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "recovery parameters ({alpha_abs}, {psi}, {phi})"
            )));
        }
        Ok(Self { alpha_abs, psi, phi })
    }

    pub fn beta_abs(&self) -> f64 {
        (1.0 - self.alpha_abs * self.alpha_abs).max(0.0).sqrt()
    }
}

/// Damping strength with `τ = 1 − θ` cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AD41Context {
    theta: f64,
    tau: f64,
}

impl AD41Context {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!("theta {theta} outside [0, 1]")));
        }
        Ok(Self { theta, tau: 1.0 - theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Entanglement fidelity of the recovery family. Not clamped: far from
    /// the optimum the expression is only an objective, not a fidelity.
    pub fn fe_family(&self, p: &RecoveryParams) -> f64 {
        let t = self.tau;
        let t3 = t * t * t;
        0.25 + 2.0 * t * t - 2.0 * t3 + t3 * t / 4.0 + self.fe_family_coherent(p)
    }

    /// The part of `fe_family` that depends on the recovery parameters.
    pub fn fe_family_coherent(&self, p: &RecoveryParams) -> f64 {
        let t = self.tau;
        SQRT_2 / 4.0 * p.alpha_abs * t * p.psi.cos()
            + (2.0 * (1.0 - p.alpha_abs * p.alpha_abs)).max(0.0).sqrt() * p.phi.cos() * t * t * t / 4.0
    }

    pub fn alpha_opt(&self) -> f64 {
        1.0 / (1.0 + self.tau.powi(4)).sqrt()
    }

    pub fn optimal_params(&self) -> RecoveryParams {
        RecoveryParams { alpha_abs: self.alpha_opt(), psi: 0.0, phi: 0.0 }
    }

    pub fn fe_optimal(&self) -> f64 {
        let t = self.tau;
        0.25 * (1.0 + t * (2.0 * (1.0 + t.powi(4))).sqrt() + t * t * (8.0 - 8.0 * t + t * t))
    }

    /// Curvature of the fidelity loss from a mis-estimated damping strength.
    pub fn h(&self) -> f64 {
        let t = self.tau;
        t.powi(3) / (SQRT_2 * (1.0 + t.powi(4)).powf(1.5))
    }
}

pub fn fe_family(params: &RecoveryParams, theta: f64) -> Result<f64> {
    Ok(AD41Context::new(theta)?.fe_family(params))
}

pub fn alpha_opt(theta: f64) -> Result<f64> {
    Ok(AD41Context::new(theta)?.alpha_opt())
}

pub fn fe_optimal(theta: f64) -> Result<f64> {
    Ok(AD41Context::new(theta)?.fe_optimal())
}

/// Fidelity under true damping `theta` of the recovery tuned for `theta_hat`.
pub fn fe_best_guess(theta: f64, theta_hat: f64) -> Result<f64> {
    let tuned = AD41Context::new(theta_hat)?.optimal_params();
    fe_family(&tuned, theta)
}

pub fn h_func(theta: f64) -> Result<f64> {
    Ok(AD41Context::new(theta)?.h())
}

/// Published small-θ expansions of the code's entanglement fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesName {
    Leung,
    ChannelAdapted,
    Sdp,
    Incomplete,
}

impl SeriesName {
    pub const ALL: [SeriesName; 4] =
        [SeriesName::Leung, SeriesName::ChannelAdapted, SeriesName::Sdp, SeriesName::Incomplete];

    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesName::Leung => "leung",
            SeriesName::ChannelAdapted => "channel_adapted",
            SeriesName::Sdp => "sdp",
            SeriesName::Incomplete => "incomplete",
        }
    }

    /// Coefficients `[c₀, c₁, c₂]` of `c₀ + c₁θ + c₂θ²`.
    pub fn coefficients(&self) -> [f64; 3] {
        match self {
            SeriesName::Leung => [1.0, 0.0, -2.75],
            SeriesName::ChannelAdapted => [1.0, 0.0, -1.5],
            SeriesName::Sdp => [1.0, 0.0, -1.25],
            SeriesName::Incomplete => [1.0, -0.25, -1.25],
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let [a, b, q] = self.coefficients();
        a + theta * (b + theta * q)
    }
}

impl fmt::Display for SeriesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeriesName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeriesName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown series '{s}'")))
    }
}

pub fn series_reference(name: &str) -> Result<[f64; 3]> {
    Ok(name.parse::<SeriesName>()?.coefficients())
}
