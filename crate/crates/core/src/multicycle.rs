//! Error-angle recurrences for repeated noise-and-recovery cycles.
//!
//! A channel with entanglement fidelity `F` has error angle `δ = arccos √F`;
//! composing two channels can at best cancel their angles, which gives
//! `F(S∘Q) ≤ cos²(δ_S − δ_Q)`.

use crate::ad41::{fe_optimal, h_func};
use crate::channel::{compose, QuantumChannel};
use crate::error::{Error, Result};
use crate::fidelity::{entanglement_fidelity, error_angle_from_fe};
use crate::spectator::{qcrb_variance, SpectatorConfig};
use serde::Serialize;

/// Fidelities of the preceding cycles used for the region plot.
pub const DEFAULT_FE_PREV: [f64; 3] = [0.99, 0.97, 0.95];

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

fn check_open(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfDomain(format!("{name} = {x} must lie in (0, 1)")));
    }
    Ok(())
}

/// `cos²(arccos√fe_prev − arccos√fe_n)`.
pub fn recurrence_upper(fe_prev: f64, fe_n: f64) -> Result<f64> {
    check_unit("fe_prev", fe_prev)?;
    check_unit("fe_n", fe_n)?;
    let diff = (error_angle_from_fe(fe_prev) - error_angle_from_fe(fe_n)).abs();
    Ok(diff.cos().powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositeCheck {
    pub bound: f64,
    pub actual: f64,
    pub holds: bool,
}

/// Compares `F_e(S∘Q)` with the angle bound built from `F_e(Q)` and `F_e(S)`.
pub fn composite_chi00_check(q: &QuantumChannel, s: &QuantumChannel) -> Result<CompositeCheck> {
    let dq = q.square_dim()?;
    let ds = s.square_dim()?;
    if dq != ds {
        return Err(Error::DimensionMismatch(format!("dimensions {dq} and {ds}")));
    }
    let actual = entanglement_fidelity(&compose(s, q)?)?;
    let bound = recurrence_upper(entanglement_fidelity(q)?, entanglement_fidelity(s)?)?;
    Ok(CompositeCheck { bound, actual, holds: actual <= bound + 1e-10 })
}

/// First-order change of the error angle when `F_e` drops by `delta_fe`.
pub fn delta_shift(fe: f64, delta_fe: f64) -> Result<f64> {
    check_open("fe", fe)?;
    if !(delta_fe >= 0.0) {
        return Err(Error::InvalidParameter(format!("delta_fe {delta_fe} must be nonnegative")));
    }
    Ok(delta_fe / (2.0 * (fe * (1.0 - fe)).sqrt()))
}

/// First-order correction to the n-cycle bound from imperfect knowledge of
/// `θₙ`. Positive values mean the estimate noise can push the bound up.
pub fn spectator_multicycle_term(theta_n: f64, fe_prev: f64, cfg: &SpectatorConfig) -> Result<f64> {
    check_open("theta_n", theta_n)?;
    check_open("fe_prev", fe_prev)?;
    let fe_n = fe_optimal(theta_n)?;
    check_open("fe_n", fe_n)?;
    let delta_prev = error_angle_from_fe(fe_prev);
    let delta_n = error_angle_from_fe(fe_n);
    let g = h_func(theta_n)?;
    let var = qcrb_variance(theta_n, cfg)?;
    Ok(g * (2.0 * delta_prev - 2.0 * delta_n).sin() / (2.0 * (fe_n * (1.0 - fe_n)).sqrt()) * var)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig4Row {
    pub fe_prev: f64,
    pub theta_n: f64,
    pub bound_perfect: f64,
    /// Clipped to at most 1.
    pub bound_incomplete: f64,
    pub bound_incomplete_preclip: f64,
    pub advantage_flag: bool,
}

/// Rows ordered by `fe_prev`, then `θₙ`.
pub fn fig4_data(fe_prev_list: &[f64], theta_grid: &[f64], cfg: &SpectatorConfig) -> Result<Vec<Fig4Row>> {
    let mut rows = Vec::with_capacity(fe_prev_list.len() * theta_grid.len());
    for &fe_prev in fe_prev_list {
        for &theta_n in theta_grid {
            let bound_perfect = recurrence_upper(fe_prev, fe_optimal(theta_n)?)?;
            let pre = bound_perfect + spectator_multicycle_term(theta_n, fe_prev, cfg)?;
            let bound_incomplete = pre.min(1.0);
            rows.push(Fig4Row {
                fe_prev,
                theta_n,
                bound_perfect,
                bound_incomplete,
                bound_incomplete_preclip: pre,
                advantage_flag: bound_incomplete > bound_perfect,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleTrace {
    thetas: Vec<f64>,
    theta_hats: Vec<f64>,
}

impl CycleTrace {
    pub fn new(thetas: Vec<f64>, theta_hats: Vec<f64>) -> Result<Self> {
        if thetas.len() != theta_hats.len() {
            return Err(Error::LengthMismatch { left: thetas.len(), right: theta_hats.len() });
        }
        if thetas.is_empty() {
            return Err(Error::InvalidParameter("a trace needs at least one cycle".into()));
        }
        for &t in thetas.iter().chain(&theta_hats) {
            check_unit("theta", t)?;
        }
        Ok(Self { thetas, theta_hats })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn theta_hats(&self) -> &[f64] {
        &self.theta_hats
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSeries {
    pub fe_upper: Vec<f64>,
    pub delta_lower: Vec<f64>,
}

/// Runs the recurrence over per-cycle fidelities.
pub fn iterate_recurrence(per_cycle: &[f64]) -> Result<BoundSeries> {
    let mut delta_lower: Vec<f64> = Vec::with_capacity(per_cycle.len());
    for (k, &fe) in per_cycle.iter().enumerate() {
        check_unit("cycle fidelity", fe)?;
        let delta = error_angle_from_fe(fe);
        delta_lower.push(if k == 0 { delta } else { (delta_lower[k - 1] - delta).abs() });
    }
    let fe_upper = delta_lower.iter().map(|d| d.cos().powi(2)).collect();
    Ok(BoundSeries { fe_upper, delta_lower })
}

/// Upper bounds that stay valid along a whole chain. The plain recurrence
/// feeds a lower bound on the previous angle into `|x − δ|`, which is not
/// monotone in `x`; here the previous angle is tracked as an interval, using
/// `δ(S∘Q) ≤ δ_S + δ_Q` for the upper end.
pub fn chain_upper_rigorous(per_cycle: &[f64]) -> Result<Vec<f64>> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut out = Vec::with_capacity(per_cycle.len());
    let (mut lo, mut hi) = (0.0, 0.0);
    for (k, &fe) in per_cycle.iter().enumerate() {
        check_unit("cycle fidelity", fe)?;
        let delta = error_angle_from_fe(fe);
        if k == 0 {
            (lo, hi) = (delta, delta);
        } else {
            let nearest = delta.clamp(lo, hi);
            (lo, hi) = ((nearest - delta).abs(), (hi + delta).min(half_pi));
        }
        out.push(lo.cos().powi(2));
    }
    Ok(out)
}

/// Each cycle contributes its single-cycle fidelity less the loss from
/// mis-estimation.
pub fn iterate_bounds<F, G>(trace: &CycleTrace, fe_single: F, gap: G) -> Result<BoundSeries>
where
    F: Fn(f64) -> Result<f64>,
    G: Fn(f64, f64) -> Result<f64>,
{
    let per_cycle = trace
        .thetas
        .iter()
        .zip(&trace.theta_hats)
        .map(|(&t, &th)| Ok(fe_single(t)? - gap(t, th)?))
        .collect::<Result<Vec<_>>>()?;
    iterate_recurrence(&per_cycle)
}
