//! Mellin transform `𝓜u(ζ) = ∫₀^∞ u(x) x^{iζ−1} dx` on lines `Im ζ = η`.
//!
//! With `x = e^y` the transform on a line is the Fourier transform of
//! `G(y) = u(e^y) e^{−ηy}`, computed here by the trapezoid rule on a uniform
//! `y` grid. Parseval then reads
//!
//! ```text
//! ∫ g₁ g₂ x^{−2η} dx/x = C · ∫ 𝓜g₁(ξ + iη) 𝓜g₂(−ξ + iη) dξ,    C = 1/(2π).
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The Parseval constant for this normalization.
pub const PARSEVAL_CONSTANT: f64 = 1.0 / (2.0 * std::f64::consts::PI);

/// End values of `|G|` above this fraction of its maximum mean the integral on
/// the chosen line is not captured by the sampled range.
pub const TAIL_TOL: f64 = 1e-8;

/// Samples `u(e^{y_j})` on a uniform grid in `y = ln x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogSamples {
    pub y_min: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl LogSamples {
    pub fn sample(f: impl Fn(f64) -> f64, y_min: f64, y_max: f64, n: usize) -> Result<Self> {
        if n < 3 || !(y_max > y_min) {
            return Err(Error::Grid(format!("need y_min < y_max and n >= 3, got [{y_min}, {y_max}], n = {n}")));
        }
        let step = (y_max - y_min) / (n - 1) as f64;
        let values = (0..n).map(|j| f((y_min + step * j as f64).exp())).collect::<Vec<_>>();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("samples must be finite".into()));
        }
        Ok(Self { y_min, step, values })
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + self.step * j as f64
    }

    fn weighted(&self, eta: f64) -> Vec<f64> {
        self.values
            .iter()
            .enumerate()
            .map(|(j, u)| u * (-eta * self.y(j)).exp())
            .collect()
    }

    /// Estimated exponent `γ` with `u ~ x^γ` at the left end, from a least-squares
    /// fit of `ln|u|` against `y` over the first twentieth of the samples.
    pub fn decay_bound(&self) -> Option<f64> {
        let m = (self.values.len() / 20).max(3);
        let pts: Vec<(f64, f64)> = (0..m)
            .filter(|&j| self.values[j] != 0.0)
            .map(|j| (self.y(j), self.values[j].abs().ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let my = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - my) * (p.1 - ml)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - my).powi(2)).sum();
        Some(sxy / sxx)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MellinSample {
    pub eta: f64,
    pub xi: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// The line `η = α − (f0 + 1)/2` on which the transform is an isometry (up to
/// `C`) for `x^α L²(x^{f0} dx)`.
pub fn line_for_weight(alpha: f64, f0: usize) -> f64 {
    crate::indicial::delta0(alpha, f0)
}

fn check_tails(g: &[f64], eta: f64) -> Result<()> {
    let max = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Ok(());
    }
    let (first, last) = (g[0].abs(), g[g.len() - 1].abs());
    if first > TAIL_TOL * max {
        return Err(Error::QuadratureDivergence(format!(
            "line eta = {eta} lies outside the holomorphy half-plane: the integrand does not decay as x -> 0"
        )));
    }
    if last > TAIL_TOL * max {
        return Err(Error::QuadratureDivergence(format!(
            "line eta = {eta}: the integrand does not decay as x -> infinity"
        )));
    }
    Ok(())
}

/// Trapezoid Fourier sum `Σ w_j G_j e^{iξ y_j} Δy`, with a rotation recurrence.
fn fourier(g: &[f64], s: &LogSamples, xi: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, xi * s.step);
    let mut phase = Complex64::from_polar(1.0, xi * s.y_min);
    let mut acc = Complex64::new(0.0, 0.0);
    let n = g.len();
    for (j, &gj) in g.iter().enumerate() {
        let w = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
        acc += phase * (w * gj);
        phase *= rot;
        // Renormalize now and then to stop the modulus drifting.
        if j % 256 == 255 {
            phase /= phase.norm();
        }
    }
    acc * s.step
}

/// `𝓜u(ξ + iη)` for every `ξ` in `xi`.
pub fn mellin(samples: &LogSamples, eta: f64, xi: &[f64]) -> Result<MellinSample> {
    let g = samples.weighted(eta);
    check_tails(&g, eta)?;
    Ok(MellinSample {
        eta,
        xi: xi.to_vec(),
        values: xi.iter().map(|&x| fourier(&g, samples, x)).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parseval {
    /// `∫ g₁ g₂ x^{−2η} dx/x` by direct quadrature.
    pub lhs: f64,
    /// `∫ 𝓜g₁(ξ + iη) 𝓜g₂(−ξ + iη) dξ` (real part; the imaginary part is rounding).
    pub rhs: f64,
    pub rhs_imag: f64,
    /// `lhs / rhs`, which should equal [`PARSEVAL_CONSTANT`].
    pub ratio: f64,
}

/// Both sides of the Parseval identity on the line `η`, with the `ξ`-integral
/// taken by the trapezoid rule over `[−xi_max, xi_max]` in `n_xi` points.
pub fn parseval_check(g1: &LogSamples, g2: &LogSamples, eta: f64, xi_max: f64, n_xi: usize) -> Result<Parseval> {
    if g1.values.len() != g2.values.len() || g1.y_min != g2.y_min || g1.step != g2.step {
        return Err(Error::Grid("both functions must be sampled on the same log grid".into()));
    }
    if n_xi < 3 || !(xi_max > 0.0) {
        return Err(Error::Grid("the xi grid needs xi_max > 0 and at least 3 points".into()));
    }
    let w1 = g1.weighted(eta);
    let w2 = g2.weighted(eta);
    check_tails(&w1, eta)?;
    check_tails(&w2, eta)?;
    let n = w1.len();
    let lhs = (0..n)
        .map(|j| if j == 0 || j + 1 == n { 0.5 } else { 1.0 } * w1[j] * w2[j])
        .sum::<f64>()
        * g1.step;
    let dxi = 2.0 * xi_max / (n_xi - 1) as f64;
    let mut rhs = Complex64::new(0.0, 0.0);
    for i in 0..n_xi {
        let x = -xi_max + dxi * i as f64;
        let w = if i == 0 || i + 1 == n_xi { 0.5 } else { 1.0 };
        rhs += fourier(&w1, g1, x) * fourier(&w2, g2, -x) * w;
    }
    rhs *= dxi;
    Ok(Parseval {
        lhs,
        rhs: rhs.re,
        rhs_imag: rhs.im,
        ratio: lhs / rhs.re,
    })
}

/// Named test functions of `s`.
pub mod presets {
    pub fn s_exp(s: f64) -> f64 {
        s * (-s).exp()
    }

    pub fn s2_exp(s: f64) -> f64 {
        s * s * (-s).exp()
    }

    pub fn s_gauss(s: f64) -> f64 {
        s * (-s * s).exp()
    }

    pub fn s_rational(s: f64) -> f64 {
        s / (1.0 + s).powi(3)
    }

    pub fn s_exp2(s: f64) -> f64 {
        s * (-2.0 * s).exp()
    }

    pub const NAMES: [&str; 5] = ["s_exp", "s2_exp", "s_gauss", "s_rational", "s_exp2"];

    pub fn by_name(name: &str) -> Option<fn(f64) -> f64> {
        Some(match name {
            "s_exp" => s_exp,
            "s2_exp" => s2_exp,
            "s_gauss" => s_gauss,
            "s_rational" => s_rational,
            "s_exp2" => s_exp2,
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(f: fn(f64) -> f64) -> LogSamples {
        LogSamples::sample(f, -50.0, 50.0, 5001).unwrap()
    }

    #[test]
    fn zero_transforms_to_zero() {
        let s = samples(|_| 0.0);
        let m = mellin(&s, -0.5, &[-1.0, 0.0, 2.0]).unwrap();
        assert!(m.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn real_line_value_is_gamma() {
        // 𝓜(s e^{−s})(iη) at ξ = 0, η = −½ is Γ(3/2) = √π/2.
        let m = mellin(&samples(presets::s_exp), -0.5, &[0.0]).unwrap();
        assert!((m.values[0].re - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn line_beyond_decay_bound_diverges() {
        let s = samples(presets::s_exp);
        assert!(matches!(mellin(&s, 1.5, &[0.0]), Err(Error::QuadratureDivergence(_))));
        assert!((s.decay_bound().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn parseval_reference_pair() {
        let s = samples(presets::s_exp);
        let p = parseval_check(&s, &s, -0.5, 40.0, 1601).unwrap();
        assert!((p.lhs - 0.25).abs() < 1e-10);
        assert!((p.ratio / PARSEVAL_CONSTANT - 1.0).abs() < 1e-8);
    }
}
