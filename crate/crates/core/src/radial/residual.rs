//! Discrete residuals of the radial operators on log-uniform grids, with
//! fourth-order central stencils in `y = ln t` (so `t∂t = ∂y`).
//!
//! Residuals are relative: the sup-norm of the operator applied to `h` divided
//! by the sup-norm of the sum of the absolute values of its individual terms.
//! This keeps one tolerance meaningful for functions like `K_ν` that span many
//! orders of magnitude.

use super::grid::Grid;
use super::{OperatorForm, RadialOperatorSpec};
use crate::error::{Error, Result};

/// Coarsest log step accepted by the stencils.
pub const MAX_LOG_STEP: f64 = 0.1;

/// Log step used for the fourth-order composite: the doubled stencil amplifies
/// rounding like `h⁻⁴`, so fine grids are subsampled towards this step.
pub const COMPOSITE_LOG_STEP: f64 = 0.0075;

fn check(grid: &Grid, len: usize, min_points: usize) -> Result<f64> {
    if len != grid.len() {
        return Err(Error::Grid(format!(
            "{len} samples for a grid of {} points",
            grid.len()
        )));
    }
    let h = grid.log_step()?;
    if grid.len() < min_points {
        return Err(Error::Grid(format!(
            "{} points is too few for the stencil (need {min_points})",
            grid.len()
        )));
    }
    if h > MAX_LOG_STEP {
        return Err(Error::Grid(format!(
            "log step {h:.3e} is too coarse for the fourth-order stencil (max {MAX_LOG_STEP})"
        )));
    }
    Ok(h)
}

/// `∂²f/∂y²` at interior points `2..n-2`; other entries are NaN.
fn d2(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![f64::NAN; n];
    let s = 12.0 * h * h;
    for i in 2..n.saturating_sub(2) {
        out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / s;
    }
    out
}

/// `∂f/∂y` at interior points `2..n-2`.
fn d1(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![f64::NAN; n];
    for i in 2..n.saturating_sub(2) {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    out
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// Relative residual of a scalar radial operator applied to samples `h`.
pub fn radial_residual(spec: &RadialOperatorSpec, grid: &Grid, h: &[f64]) -> Result<f64> {
    let s = spec.potential_shift;
    let t = &grid.points;
    match spec.form {
        OperatorForm::SecondOrderScalar { nu } => {
            let step = check(grid, h.len(), 5)?;
            let dd = d2(h, step);
            let (mut num, mut den) = (0.0f64, 0.0f64);
            for i in 2..h.len() - 2 {
                let pot = s * t[i] * t[i] * h[i];
                let ord = nu * nu * h[i];
                num = num.max((dd[i] - pot - ord).abs());
                den = den.max(dd[i].abs() + pot.abs() + ord.abs());
            }
            Ok(ratio(num, den))
        }
        OperatorForm::FactorizedFourthOrder { nu_plus, nu_minus } => {
            let step = check(grid, h.len(), 9)?;
            let stride = ((COMPOSITE_LOG_STEP / step).round() as usize).clamp(1, (h.len() - 1) / 8);
            let t: Vec<f64> = t.iter().step_by(stride).copied().collect();
            let h: Vec<f64> = h.iter().step_by(stride).copied().collect();
            let step = step * stride as f64;
            let n = h.len();
            let q = |nu: f64, i: usize| s * t[i] * t[i] + nu * nu;
            // L₊L₋h = D⁴h − D²(q₋h) − q₊D²h + q₊q₋h with D = ∂y.
            let d2h = d2(&h, step);
            let d4h = d2(&d2h, step);
            let qh: Vec<f64> = (0..n).map(|i| q(nu_minus, i) * h[i]).collect();
            let d2qh = d2(&qh, step);
            let (mut num, mut den) = (0.0f64, 0.0f64);
            for i in 4..n - 4 {
                let terms = [
                    d4h[i],
                    -d2qh[i],
                    -q(nu_plus, i) * d2h[i],
                    q(nu_plus, i) * qh[i],
                ];
                num = num.max(terms.iter().sum::<f64>().abs());
                den = den.max(terms.iter().map(|x| x.abs()).sum());
            }
            Ok(ratio(num, den))
        }
        OperatorForm::FirstOrder2x2 { .. } => Err(Error::Domain(
            "the first-order form acts on pairs; use first_order_residual".into(),
        )),
    }
}

/// Relative residual of the first-order indicial system of a harmonic mode in
/// degree `k`:
///
/// ```text
/// r₁ = −t∂t h₂ − (f0 − k + a + ½) h₂
/// r₂ =  t∂t h₁ + (k + a + ½) h₁
/// ```
pub fn first_order_residual(spec: &RadialOperatorSpec, grid: &Grid, h1: &[f64], h2: &[f64]) -> Result<f64> {
    let OperatorForm::FirstOrder2x2 { k } = spec.form else {
        return Err(Error::Domain("first_order_residual needs a first-order spec".into()));
    };
    if spec.potential_shift != 0.0 {
        return Err(Error::Domain(
            "the first-order form is only available for the indicial operator".into(),
        ));
    }
    let step = check(grid, h1.len(), 5)?;
    check(grid, h2.len(), 5)?;
    let c1 = spec.f0 as f64 - k as f64 + spec.a + 0.5;
    let c2 = k as f64 + spec.a + 0.5;
    let (dh1, dh2) = (d1(h1, step), d1(h2, step));
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for i in 2..h1.len() - 2 {
        let r1 = [-dh2[i], -c1 * h2[i]];
        let r2 = [dh1[i], c2 * h1[i]];
        num = num.max((r1[0] + r1[1]).abs()).max((r2[0] + r2[1]).abs());
        den = den.max(r1[0].abs() + r1[1].abs()).max(r2[0].abs() + r2[1].abs());
    }
    Ok(ratio(num, den))
}
