//! Closed-form weights, Bessel orders and indicial roots of the mode-reduced
//! de Rham operator near a stratum with link of dimension `f0`.
//!
//! For a non-harmonic link mode of eigenvalue `λ` the Bessel orders are the square
//! roots of
//!
//! ```text
//! μ±(λ, N, f0) = λ² + ½(N − 1 − f0/2)² + ½(N − f0/2)² ± √((N − (f0+1)/2)² + λ²)
//! μ̃±(λ, N, f0) = λ² + ½(N + 1 − f0/2)² + ½(N − f0/2)² ± √((N − (f0−1)/2)² + λ²)
//! ```
//!
//! and harmonic modes in degree `k` give `ν = |k − f0/2|`. Because the constant
//! part exceeds the radicand by exactly ¼, `√μ± = √B ± ½` with `B` the radicand,
//! which keeps everything inside `Q(√B)` for rational `λ²`.

pub mod exact;
pub mod roots;
pub mod spectrum;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use exact::{int, rat, Surd};

pub use roots::{gap_window, indicial_roots, ExactRoot, Root, RootSet, RootSource};
pub use spectrum::{
    analytic, check_gap, check_middle_vanishing, required_scaling, rescale_for_gap, HodgeKind,
    LinkMode, LinkSpectrum, Provenance,
};

/// Weight and dimensions at a stratum: the operator acts on `x^a L²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicialParams {
    pub a: f64,
    /// `a` when it is known exactly.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "exact::serde_rational::option")]
    pub a_exact: Option<BigRational>,
    /// Link dimension.
    pub f0: usize,
    /// Dimension of the stratum.
    pub b: usize,
}

impl IndicialParams {
    pub fn new(a: f64, f0: usize, b: usize) -> Self {
        Self {
            a,
            a_exact: None,
            f0,
            b,
        }
    }

    pub fn exact(a: BigRational, f0: usize, b: usize) -> Self {
        Self {
            a: exact::to_f64(&a),
            a_exact: Some(a),
            f0,
            b,
        }
    }

    /// Parses `a` as a rational when possible, otherwise as a float.
    pub fn parse_weight(text: &str, f0: usize, b: usize) -> Result<Self> {
        if let Some(q) = exact::parse_rational(text) {
            return Ok(Self::exact(q, f0, b));
        }
        match text.trim().parse::<f64>() {
            Ok(a) if a.is_finite() => Ok(Self::new(a, f0, b)),
            _ => Err(Error::Domain(format!("weight `{text}` is not a real number"))),
        }
    }

    /// The centre `−(f0 + 2a + 1)/2` of the root set.
    pub fn center(&self) -> f64 {
        -(self.f0 as f64 + 2.0 * self.a + 1.0) / 2.0
    }

    pub fn center_exact(&self) -> Option<BigRational> {
        self.a_exact
            .as_ref()
            .map(|a| -(int(self.f0 as i64) + int(2) * a + int(1)) / int(2))
    }
}

fn require_positive(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "λ = {lambda}: the μ formulas need λ > 0; use nu_harmonic for harmonic modes"
        )))
    }
}

/// `(A, B)` with `μ± = A ± √B` for the α-branch.
fn mu_parts(lambda_sq: f64, n: i64, f0: usize) -> (f64, f64) {
    let x = n as f64 - f0 as f64 / 2.0;
    let a = lambda_sq + 0.5 * (x - 1.0).powi(2) + 0.5 * x * x;
    let b = (x - 0.5).powi(2) + lambda_sq;
    (a, b)
}

/// `(μ₊, μ₋)` for a non-harmonic mode in the α-branch.
pub fn mu_pm(lambda: f64, n: i64, f0: usize) -> Result<(f64, f64)> {
    require_positive(lambda)?;
    let (a, b) = mu_parts(lambda * lambda, n, f0);
    Ok((a + b.sqrt(), a - b.sqrt()))
}

/// `(μ̃₊, μ̃₋)` for a non-harmonic mode in the β-branch.
pub fn mu_tilde_pm(lambda: f64, n: i64, f0: usize) -> Result<(f64, f64)> {
    require_positive(lambda)?;
    let x = n as f64 - f0 as f64 / 2.0;
    let l2 = lambda * lambda;
    let a = l2 + 0.5 * (x + 1.0).powi(2) + 0.5 * x * x;
    let b = (x + 0.5).powi(2) + l2;
    Ok((a + b.sqrt(), a - b.sqrt()))
}

fn require_positive_exact(lambda_sq: &BigRational) -> Result<()> {
    if lambda_sq.is_positive() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "λ² = {lambda_sq}: the μ formulas need λ > 0; use nu_harmonic for harmonic modes"
        )))
    }
}

/// Exact `(μ₊, μ₋)` from an exact `λ²`.
pub fn mu_pm_exact(lambda_sq: &BigRational, n: i64, f0: usize) -> Result<(Surd, Surd)> {
    require_positive_exact(lambda_sq)?;
    let x = int(n) - rat(f0 as i64, 2);
    let a = lambda_sq + (&x - int(1)) * (&x - int(1)) / int(2) + &x * &x / int(2);
    let b = (&x - rat(1, 2)) * (&x - rat(1, 2)) + lambda_sq;
    Ok((
        Surd::new(a.clone(), int(1), b.clone()),
        Surd::new(a, int(-1), b),
    ))
}

/// Exact `(μ̃₊, μ̃₋)` from an exact `λ²`.
pub fn mu_tilde_pm_exact(lambda_sq: &BigRational, n: i64, f0: usize) -> Result<(Surd, Surd)> {
    require_positive_exact(lambda_sq)?;
    let x = int(n) - rat(f0 as i64, 2);
    let a = lambda_sq + (&x + int(1)) * (&x + int(1)) / int(2) + &x * &x / int(2);
    let b = (&x + rat(1, 2)) * (&x + rat(1, 2)) + lambda_sq;
    Ok((
        Surd::new(a.clone(), int(1), b.clone()),
        Surd::new(a, int(-1), b),
    ))
}

/// Exact `(√μ₊, √μ₋)` using `√μ± = |√B ± ½|`.
pub fn sqrt_mu_pm_exact(lambda_sq: &BigRational, n: i64, f0: usize) -> Result<(Surd, Surd)> {
    require_positive_exact(lambda_sq)?;
    let x = int(n) - rat(f0 as i64, 2);
    let b = (&x - rat(1, 2)) * (&x - rat(1, 2)) + lambda_sq;
    Ok(sqrt_pair(b))
}

/// Exact `(√μ̃₊, √μ̃₋)`.
pub fn sqrt_mu_tilde_pm_exact(lambda_sq: &BigRational, n: i64, f0: usize) -> Result<(Surd, Surd)> {
    require_positive_exact(lambda_sq)?;
    let x = int(n) - rat(f0 as i64, 2);
    let b = (&x + rat(1, 2)) * (&x + rat(1, 2)) + lambda_sq;
    Ok(sqrt_pair(b))
}

fn sqrt_pair(b: BigRational) -> (Surd, Surd) {
    let root = Surd::sqrt_of(b);
    (
        root.add_rational(&rat(1, 2)),
        root.sub_rational(&rat(1, 2)).abs(),
    )
}

/// Bessel order `|k − f0/2|` of a harmonic mode in degree `k`.
pub fn nu_harmonic(k: usize, f0: usize) -> Result<f64> {
    if k > f0 {
        return Err(Error::Domain(format!("degree {k} is outside 0..={f0}")));
    }
    Ok((k as f64 - f0 as f64 / 2.0).abs())
}

pub fn nu_harmonic_exact(k: usize, f0: usize) -> Result<BigRational> {
    if k > f0 {
        return Err(Error::Domain(format!("degree {k} is outside 0..={f0}")));
    }
    Ok((int(k as i64) - rat(f0 as i64, 2)).abs())
}

/// Whether `t^s` lies in `t^{-1/2} L²_loc(t^{f0} dt)` near 0: `2s + 1 + f0 > −1`.
pub fn l2_power_test(s_exp: f64, f0: usize) -> bool {
    2.0 * s_exp + 1.0 + f0 as f64 > -1.0
}

/// Whether the `K_ν` branch is excluded from the domain at weight `a`: `2a + 2ν ≥ 1`.
pub fn exclusion_test(a: f64, nu: f64) -> bool {
    2.0 * a + 2.0 * nu >= 1.0
}

/// The L² cut-off shift `δ₀(γ) = γ − (f0 + 1)/2`.
pub fn delta0(gamma: f64, f0: usize) -> f64 {
    gamma - (f0 as f64 + 1.0) / 2.0
}
