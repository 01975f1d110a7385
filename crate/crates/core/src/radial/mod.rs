//! Radial model problems near a cone tip.
//!
//! After Fourier transform in the horizontal directions and the substitution
//! `t = s|η|`, each link mode of the normal operator reduces to Bessel-type
//! equations in `t`:
//!
//! ```text
//! ((t∂t)² − t² − ν²) h = 0                                  harmonic modes
//! ((t∂t)² − t² − ν₊²)((t∂t)² − t² − ν₋²) h = 0              Kodaira pairs
//! ```
//!
//! Dropping the `t²` terms gives the indicial equations with solutions `t^{±ν}`.

pub mod bessel;
pub mod eigen;
pub mod grid;
pub mod indicial_matrix;
pub mod mellin;
pub mod residual;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicial::{
    mu_pm, mu_tilde_pm, nu_harmonic, HodgeKind, IndicialParams, LinkMode, LinkSpectrum, Provenance,
};

pub use bessel::{bessel_i, bessel_ik, bessel_k, BesselIK};
pub use eigen::{bc_sensitivity, eigenvalues, BcSensitivity, EigenResult, InnerBc};
pub use grid::{Grid, GridKind};
pub use indicial_matrix::{indicial_family_matrix, singular_set, IndicialMatrix};
pub use mellin::{line_for_weight, mellin, parseval_check, LogSamples, MellinSample, Parseval, PARSEVAL_CONSTANT};
pub use residual::{first_order_residual, radial_residual};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum OperatorForm {
    /// `(t∂t)² − s·t² − ν²`.
    SecondOrderScalar { nu: f64 },
    /// Product of two second-order factors, `ν₊ >= ν₋`.
    FactorizedFourthOrder { nu_plus: f64, nu_minus: f64 },
    /// The indicial 2×2 system of a harmonic mode of degree `k`.
    FirstOrder2x2 { k: usize },
}

/// Which closed-form family produced the orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Harmonic,
    Alpha,
    Beta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialOperatorSpec {
    pub form: OperatorForm,
    /// Measure weight `t^{f0} dt`.
    pub f0: usize,
    pub a: f64,
    /// Coefficient `s` of the `t²` potential: 1 for normal-operator problems,
    /// 0 for pure-cone eigenproblems and indicial equations.
    pub potential_shift: f64,
    pub branch: Branch,
}

fn check_order(nu: f64) -> Result<()> {
    if nu.is_finite() && nu >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Bessel order {nu} must be finite and nonnegative")))
    }
}

impl RadialOperatorSpec {
    /// Scalar spec of order `ν` with the `t²` potential.
    pub fn scalar(nu: f64, f0: usize) -> Result<Self> {
        check_order(nu)?;
        Ok(Self {
            form: OperatorForm::SecondOrderScalar { nu },
            f0,
            a: 0.0,
            potential_shift: 1.0,
            branch: Branch::Harmonic,
        })
    }

    /// Scalar spec of order `ν` without potential: the pure-cone problem.
    pub fn pure_cone(nu: f64, f0: usize) -> Result<Self> {
        Ok(Self::scalar(nu, f0)?.indicial())
    }

    pub fn factorized(nu_1: f64, nu_2: f64, f0: usize, branch: Branch) -> Result<Self> {
        check_order(nu_1)?;
        check_order(nu_2)?;
        Ok(Self {
            form: OperatorForm::FactorizedFourthOrder {
                nu_plus: nu_1.max(nu_2),
                nu_minus: nu_1.min(nu_2),
            },
            f0,
            a: 0.0,
            potential_shift: 1.0,
            branch,
        })
    }

    /// The first-order indicial system for a harmonic mode of degree `k`.
    pub fn first_order(k: usize, f0: usize, a: f64) -> Result<Self> {
        nu_harmonic(k, f0)?;
        Ok(Self {
            form: OperatorForm::FirstOrder2x2 { k },
            f0,
            a,
            potential_shift: 0.0,
            branch: Branch::Harmonic,
        })
    }

    /// The same operator with the `t²` potential removed.
    pub fn indicial(&self) -> Self {
        Self {
            potential_shift: 0.0,
            ..self.clone()
        }
    }

    /// Bessel orders of the scalar factors.
    pub fn orders(&self) -> Vec<f64> {
        match self.form {
            OperatorForm::SecondOrderScalar { nu } => vec![nu],
            OperatorForm::FactorizedFourthOrder { nu_plus, nu_minus } => vec![nu_plus, nu_minus],
            OperatorForm::FirstOrder2x2 { k } => vec![(k as f64 - self.f0 as f64 / 2.0).abs()],
        }
    }
}

/// Radial operators for one link mode, one per branch the mode feeds (two for an
/// untagged non-harmonic mode).
pub fn mode_reduce(p: &IndicialParams, m: &LinkMode) -> Result<Vec<RadialOperatorSpec>> {
    LinkSpectrum::new("mode", p.f0, Provenance::User, vec![m.clone()]).validate()?;
    let with_weight = |mut s: RadialOperatorSpec| {
        s.a = p.a;
        s
    };
    if m.is_harmonic() {
        let nu = nu_harmonic(m.k, p.f0)?;
        return Ok(vec![with_weight(RadialOperatorSpec::scalar(nu, p.f0)?)]);
    }
    let n = m.k as i64;
    let mut out = Vec::new();
    if matches!(m.kind, HodgeKind::Exact | HodgeKind::Unspecified) {
        let (mp, mm) = mu_pm(m.lambda, n, p.f0)?;
        out.push(with_weight(RadialOperatorSpec::factorized(
            mp.max(0.0).sqrt(),
            mm.max(0.0).sqrt(),
            p.f0,
            Branch::Alpha,
        )?));
    }
    if matches!(m.kind, HodgeKind::Coexact | HodgeKind::Unspecified) {
        let (tp, tm) = mu_tilde_pm(m.lambda, n, p.f0)?;
        out.push(with_weight(RadialOperatorSpec::factorized(
            tp.max(0.0).sqrt(),
            tm.max(0.0).sqrt(),
            p.f0,
            Branch::Beta,
        )?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicial::exact::int;

    #[test]
    fn harmonic_mode_gives_scalar_spec() {
        let p = IndicialParams::new(0.0, 1, 0);
        let s = mode_reduce(&p, &LinkMode::harmonic(0, 1)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].form, OperatorForm::SecondOrderScalar { nu: 0.5 });
        assert_eq!(s[0].potential_shift, 1.0);
    }

    #[test]
    fn alpha_branch_orders() {
        let p = IndicialParams::new(0.0, 2, 0);
        let m = LinkMode::exact(int(1), 1, HodgeKind::Exact, 1);
        let s = mode_reduce(&p, &m).unwrap();
        let r5 = 5f64.sqrt();
        match s[0].form {
            OperatorForm::FactorizedFourthOrder { nu_plus, nu_minus } => {
                assert!((nu_plus - (1.5 + r5 / 2.0).sqrt()).abs() < 1e-14);
                assert!((nu_minus - (1.5 - r5 / 2.0).sqrt()).abs() < 1e-14);
            }
            other => panic!("unexpected form {other:?}"),
        }
        assert_eq!(s[0].branch, Branch::Alpha);
    }

    #[test]
    fn untagged_mode_feeds_both_branches() {
        let p = IndicialParams::new(0.0, 2, 0);
        let m = LinkMode::exact(int(2), 1, HodgeKind::Unspecified, 1);
        let s = mode_reduce(&p, &m).unwrap();
        assert_eq!(s.iter().map(|x| x.branch).collect::<Vec<_>>(), vec![Branch::Alpha, Branch::Beta]);
    }

    #[test]
    fn factorized_orders_are_sorted() {
        let s = RadialOperatorSpec::factorized(0.5, 2.0, 1, Branch::Beta).unwrap();
        assert_eq!(s.orders(), vec![2.0, 0.5]);
        assert!(RadialOperatorSpec::scalar(f64::NAN, 1).is_err());
    }
}
