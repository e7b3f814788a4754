//! Figure and table data: CSV emission, polynomial fits and the crossing of
//! the incomplete-knowledge curve with the Leung series.

use crate::ad41::{fe_optimal, logical_noise, SeriesName};
use crate::error::{Error, Result};
use crate::multicycle::Fig4Row;
use crate::recovery::{optimize_recovery, RecoveryOptions};
use crate::spectator::{mean_delta_fe, Fig3Row, SpectatorConfig};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// Default figure grid spacing.
pub const GRID_STEP: f64 = 0.005;

/// Fit window for the small-θ expansions.
pub const FIT_WINDOW: (f64, f64) = (0.0, 0.05);

/// C's `%.10g`.
pub fn format_g10(x: f64) -> String {
    format_g(x, 10)
}

pub fn format_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = precision.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `k·step` for `k = 1, 2, …` while `≤ hi`; `include_zero` prepends 0.
pub fn theta_grid(step: f64, hi: f64, include_zero: bool) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= hi) {
        return Err(Error::InvalidParameter(format!("grid step {step} must lie in (0, {hi}]")));
    }
    let n = (hi / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (1..=n).map(|k| k as f64 * step).collect();
    if include_zero {
        grid.insert(0, 0.0);
    }
    Ok(grid)
}

/// Default interior grid `(0, 0.995]`.
pub fn default_interior_grid(step: f64) -> Result<Vec<f64>> {
    theta_grid(step, 0.995, false)
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn csv<I>(header: &str, rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn fig3_csv(rows: &[Fig3Row]) -> String {
    csv(
        "theta,gamma,m,fe_perfect,gap,fe_incomplete",
        rows.iter().map(|r| {
            vec![
                format_g10(r.theta),
                format_g10(r.gamma),
                r.m.to_string(),
                format_g10(r.fe_perfect),
                format_g10(r.gap),
                format_g10(r.fe_incomplete),
            ]
        }),
    )
}

pub fn fig4_csv(rows: &[Fig4Row]) -> String {
    csv(
        "fe_prev,theta_n,bound_perfect,bound_incomplete,advantage_flag,bound_incomplete_preclip",
        rows.iter().map(|r| {
            vec![
                format_g10(r.fe_prev),
                format_g10(r.theta_n),
                format_g10(r.bound_perfect),
                format_g10(r.bound_incomplete),
                u8::from(r.advantage_flag).to_string(),
                format_g10(r.bound_incomplete_preclip),
            ]
        }),
    )
}

/// Comparison of recovery strategies at one damping strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig5Row {
    pub theta: f64,
    pub leung: f64,
    pub channel_adapted: f64,
    pub sdp: f64,
    pub incomplete: f64,
}

/// Exact incomplete-knowledge fidelity with a single, unaccelerated spectator.
pub fn incomplete_curve(theta: f64) -> Result<f64> {
    let fe = fe_optimal(theta)?;
    if theta == 0.0 || theta == 1.0 {
        return Ok(fe);
    }
    Ok(fe - mean_delta_fe(theta, &SpectatorConfig::new(1.0, 1)?)?)
}

pub fn fig5_data(theta_grid: &[f64]) -> Result<Vec<Fig5Row>> {
    for &t in theta_grid {
        if !(0.0..=0.5).contains(&t) {
            return Err(Error::InvalidParameter(format!("fig5 grid point {t} outside [0, 0.5]")));
        }
    }
    theta_grid
        .iter()
        .map(|&theta| {
            Ok(Fig5Row {
                theta,
                leung: SeriesName::Leung.eval(theta),
                channel_adapted: fe_optimal(theta)?,
                sdp: SeriesName::Sdp.eval(theta),
                incomplete: incomplete_curve(theta)?,
            })
        })
        .collect()
}

pub fn fig5_csv(rows: &[Fig5Row]) -> String {
    csv(
        "theta,leung,channel_adapted,sdp,incomplete,incomplete_below_leung",
        rows.iter().map(|r| {
            vec![
                format_g10(r.theta),
                format_g10(r.leung),
                format_g10(r.channel_adapted),
                format_g10(r.sdp),
                format_g10(r.incomplete),
                u8::from(r.incomplete < r.leung).to_string(),
            ]
        }),
    )
}

/// Bisection root of `f` on `[a, b]` given a sign change.
fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = f(a)?;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 || (b - a) < 1e-15 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Where the incomplete curve climbs back above the Leung series: the first
/// sign change of `incomplete − leung` on the positive grid points, refined
/// on the exact curves.
pub fn crossing_threshold(rows: &[Fig5Row]) -> Result<Option<f64>> {
    let diff = |t: f64| Ok(incomplete_curve(t)? - SeriesName::Leung.eval(t));
    let pts: Vec<&Fig5Row> = rows.iter().filter(|r| r.theta > 0.0).collect();
    for w in pts.windows(2) {
        let (d0, d1) = (w[0].incomplete - w[0].leung, w[1].incomplete - w[1].leung);
        if d0 < 0.0 && d1 >= 0.0 {
            return Ok(Some(bisect(diff, w[0].theta, w[1].theta)?));
        }
    }
    Ok(None)
}

/// Crossing of the printed incomplete and Leung expansions, `0.25/1.5`.
pub fn series_crossing() -> f64 {
    let [_, b_inc, c_inc] = SeriesName::Incomplete.coefficients();
    let [_, b_l, c_l] = SeriesName::Leung.coefficients();
    (b_l - b_inc) / (c_inc - c_l)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyFit {
    pub curve: String,
    pub window: (f64, f64),
    pub points: usize,
    /// Ascending powers of θ.
    pub coefficients: Vec<f64>,
    pub max_residual: f64,
}

/// Least-squares polynomial fit of the given degree.
pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Result<(Vec<f64>, f64)> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch { left: xs.len(), right: ys.len() });
    }
    if xs.len() <= degree {
        return Err(Error::InvalidParameter("not enough points for the fit degree".into()));
    }
    let a = DMatrix::from_fn(xs.len(), degree + 1, |i, j| xs[i].powi(j as i32));
    let b = DVector::from_column_slice(ys);
    let coef = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let resid = (&a * &coef - &b).amax();
    Ok((coef.iter().copied().collect(), resid))
}

fn window_points(points: usize) -> Vec<f64> {
    let (lo, hi) = FIT_WINDOW;
    (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect()
}

fn fit_curve<F: Fn(f64) -> Result<f64>>(name: &str, f: F, points: usize) -> Result<PolyFit> {
    let xs = window_points(points);
    let ys = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let (coefficients, max_residual) = polyfit(&xs, &ys, 2)?;
    Ok(PolyFit { curve: name.into(), window: FIT_WINDOW, points, coefficients, max_residual })
}

pub fn fit_channel_adapted() -> Result<PolyFit> {
    fit_curve("channel_adapted", fe_optimal, 51)
}

pub fn fit_incomplete() -> Result<PolyFit> {
    fit_curve("incomplete", incomplete_curve, 51)
}

/// Quadratic fit of the numerically optimal recovery on the [4,1] code.
pub fn fit_numerical_optimum(points: usize, opts: &RecoveryOptions) -> Result<PolyFit> {
    let xs = window_points(points);
    let ys = xs
        .par_iter()
        .map(|&t| Ok(optimize_recovery(&logical_noise(t)?, opts)?.fe_achieved))
        .collect::<Result<Vec<_>>>()?;
    let (coefficients, max_residual) = polyfit(&xs, &ys, 2)?;
    Ok(PolyFit { curve: "sdp".into(), window: FIT_WINDOW, points, coefficients, max_residual })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRow {
    pub name: SeriesName,
    pub printed: String,
    pub coefficients: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub series: Vec<SeriesRow>,
    pub fits: Vec<PolyFit>,
}

fn printed_series(c: [f64; 3]) -> String {
    let mut s = format_g10(c[0]);
    for (power, &coef) in c.iter().enumerate().skip(1) {
        if coef == 0.0 {
            continue;
        }
        let sign = if coef < 0.0 { '−' } else { '+' };
        let var = if power == 1 { "θ".to_string() } else { "θ²".to_string() };
        s.push_str(&format!("{sign}{}{var}", format_g10(coef.abs())));
    }
    s
}

/// Printed expansions plus fits of the exact curves; the numerical optimum
/// is fitted too when recovery options are supplied.
pub fn run_table(numerical: Option<&RecoveryOptions>) -> Result<TableReport> {
    let series = SeriesName::ALL
        .iter()
        .map(|&name| SeriesRow { name, printed: printed_series(name.coefficients()), coefficients: name.coefficients() })
        .collect();
    let mut fits = vec![fit_channel_adapted()?, fit_incomplete()?];
    if let Some(opts) = numerical {
        fits.push(fit_numerical_optimum(11, opts)?);
    }
    Ok(TableReport { series, fits })
}

impl TableReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("series            F_e to second order\n");
        for row in &self.series {
            out.push_str(&format!("{:<17} {}\n", row.name.as_str(), row.printed));
        }
        out.push_str("\nfit               window         c0            c1            c2            max_resid\n");
        for f in &self.fits {
            out.push_str(&format!(
                "{:<17} [{}, {}]  {:<13} {:<13} {:<13} {}\n",
                f.curve,
                format_g(f.window.0, 3),
                format_g(f.window.1, 3),
                format_g(f.coefficients[0], 8),
                format_g(f.coefficients[1], 8),
                format_g(f.coefficients[2], 8),
                format_g(f.max_residual, 3),
            ));
        }
        out
    }
}
