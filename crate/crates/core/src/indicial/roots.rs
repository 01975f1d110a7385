use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::exact::{int, Surd};
use super::spectrum::{HodgeKind, LinkMode, LinkSpectrum};
use super::{mu_pm, mu_tilde_pm, nu_harmonic, nu_harmonic_exact, sqrt_mu_pm_exact, sqrt_mu_tilde_pm_exact, IndicialParams};
use crate::error::{Error, Result};

/// Slack allowed for rounding below zero under a square root.
const RADICAND_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RootSource {
    #[serde(rename = "mu+")]
    MuPlus,
    #[serde(rename = "mu-")]
    MuMinus,
    #[serde(rename = "mutilde+")]
    MuTildePlus,
    #[serde(rename = "mutilde-")]
    MuTildeMinus,
    #[serde(rename = "harmonic")]
    Harmonic,
}

impl RootSource {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::MuPlus => "mu+",
            Self::MuMinus => "mu-",
            Self::MuTildePlus => "mutilde+",
            Self::MuTildeMinus => "mutilde-",
            Self::Harmonic => "harmonic",
        }
    }
}

/// `center + sign · magnitude`, with `magnitude >= 0` in `Q(√r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactRoot {
    #[serde(with = "crate::indicial::exact::serde_rational")]
    pub center: BigRational,
    pub sign: i8,
    pub magnitude: Surd,
}

impl ExactRoot {
    fn new(center: BigRational, sign: i8, magnitude: Surd) -> Self {
        // A zero magnitude is recorded with sign +1 so equal values compare equal.
        let sign = if magnitude.is_rational() && magnitude.p == int(0) { 1 } else { sign };
        Self {
            center,
            sign,
            magnitude,
        }
    }

    pub fn value(&self) -> Surd {
        let m = if self.sign < 0 { self.magnitude.neg() } else { self.magnitude.clone() };
        m.add_rational(&self.center)
    }

    /// The root `−(f0 + 2a + 1) − ζ`; it shares the centre and flips the sign.
    pub fn reflected(&self) -> Self {
        Self::new(self.center.clone(), -self.sign, self.magnitude.clone())
    }

    pub fn shifted(&self, delta: &BigRational) -> Self {
        Self::new(&self.center + delta, self.sign, self.magnitude.clone())
    }
}

impl fmt::Display for ExactRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: f64,
    pub source: RootSource,
    /// Index of the originating mode in the spectrum.
    pub mode_index: usize,
    pub mode: LinkMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactRoot>,
}

/// Candidate indicial roots, tagged by the formula that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub f0: usize,
    pub a: f64,
    pub roots: Vec<Root>,
}

impl RootSet {
    /// Real parts, sorted ascending.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.roots.iter().map(|r| r.value).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn for_mode(&self, index: usize) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(move |r| r.mode_index == index)
    }

    /// The reflection axis value `−(f0 + 2a + 1)`.
    pub fn reflection_sum(&self) -> f64 {
        -(self.f0 as f64 + 2.0 * self.a + 1.0)
    }

    /// Whether every root carries an exact value.
    pub fn is_exact(&self) -> bool {
        self.roots.iter().all(|r| r.exact.is_some())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["value", "source", "mode", "lambda", "k", "kind", "exact"])?;
        for r in &self.roots {
            w.write_record([
                format!("{:?}", r.value),
                r.source.as_str().to_string(),
                r.mode_index.to_string(),
                r.mode.lambda_text(),
                r.mode.k.to_string(),
                r.mode.kind.as_str().to_string(),
                r.exact.as_ref().map(ToString::to_string).unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn sqrt_checked(mu: f64, what: &str) -> Result<f64> {
    if mu >= 0.0 {
        Ok(mu.sqrt())
    } else if mu > -RADICAND_SLACK {
        Ok(0.0)
    } else {
        Err(Error::Domain(format!("{what} = {mu} is negative under the radical")))
    }
}

/// Candidate indicial roots: for every mode, `c ± √μ±` (exact modes),
/// `c ± √μ̃±` (coexact modes), both for untagged modes, and `c ± (k − f0/2)` for
/// harmonic modes, where `c = −(f0 + 2a + 1)/2` and `N = k`.
pub fn indicial_roots(p: &IndicialParams, s: &LinkSpectrum) -> Result<RootSet> {
    if p.f0 != s.f0 {
        return Err(Error::Domain(format!(
            "parameters have f0 = {} but the spectrum `{}` has f0 = {}",
            p.f0, s.name, s.f0
        )));
    }
    let c = p.center();
    let c_exact = p.center_exact();
    let mut roots = Vec::new();
    for (i, m) in s.modes.iter().enumerate() {
        let mut push = |mag: f64, mag_exact: Option<Surd>, source: RootSource| {
            for sign in [1i8, -1] {
                let exact = match (&c_exact, &mag_exact) {
                    (Some(ce), Some(me)) => Some(ExactRoot::new(ce.clone(), sign, me.clone())),
                    _ => None,
                };
                roots.push(Root {
                    value: c + f64::from(sign) * mag,
                    source,
                    mode_index: i,
                    mode: m.clone(),
                    exact,
                });
            }
        };
        let n = m.k as i64;
        match m.kind {
            HodgeKind::Harmonic => {
                let nu = nu_harmonic(m.k, s.f0)?;
                let exact = Some(Surd::rational(nu_harmonic_exact(m.k, s.f0)?));
                push(nu, exact, RootSource::Harmonic);
            }
            kind => {
                if matches!(kind, HodgeKind::Exact | HodgeKind::Unspecified) {
                    let (mp, mm) = mu_pm(m.lambda, n, s.f0)?;
                    let exact = m.lambda_sq.as_ref().map(|q| sqrt_mu_pm_exact(q, n, s.f0)).transpose()?;
                    push(sqrt_checked(mp, "μ₊")?, exact.as_ref().map(|e| e.0.clone()), RootSource::MuPlus);
                    push(sqrt_checked(mm, "μ₋")?, exact.map(|e| e.1), RootSource::MuMinus);
                }
                if matches!(kind, HodgeKind::Coexact | HodgeKind::Unspecified) {
                    let (tp, tm) = mu_tilde_pm(m.lambda, n, s.f0)?;
                    let exact = m
                        .lambda_sq
                        .as_ref()
                        .map(|q| sqrt_mu_tilde_pm_exact(q, n, s.f0))
                        .transpose()?;
                    push(sqrt_checked(tp, "μ̃₊")?, exact.as_ref().map(|e| e.0.clone()), RootSource::MuTildePlus);
                    push(sqrt_checked(tm, "μ̃₋")?, exact.map(|e| e.1), RootSource::MuTildeMinus);
                }
            }
        }
    }
    Ok(RootSet {
        f0: s.f0,
        a: p.a,
        roots,
    })
}

/// Values closer than this to `α` count as `α` itself.
const WINDOW_TOL: f64 = 1e-12;

/// Half the distance from `α` to the nearest other shifted root `Re ζ + f0/2 + ½`,
/// capped so the result lies in `(0, ½]`.
pub fn gap_window(r: &RootSet, alpha: f64) -> f64 {
    let shift = r.f0 as f64 / 2.0 + 0.5;
    let nearest = r
        .roots
        .iter()
        .map(|root| (root.value + shift - alpha).abs())
        .filter(|d| *d > WINDOW_TOL)
        .fold(f64::INFINITY, f64::min);
    nearest.min(1.0) / 2.0
}

/// Exact shift `−a` applied to every exact root, for checking the weight law.
pub fn shift_exact(roots: &[ExactRoot], a: &BigRational) -> Vec<ExactRoot> {
    roots.iter().map(|r| r.shifted(&-a.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicial::exact::rat;
    use crate::indicial::spectrum::{analytic, LinkSpectrum, Provenance};

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn circle_harmonic_roots() {
        let s = LinkSpectrum::new(
            "h",
            1,
            Provenance::User,
            vec![LinkMode::harmonic(0, 1), LinkMode::harmonic(1, 1)],
        );
        let r = indicial_roots(&IndicialParams::new(0.0, 1, 0), &s).unwrap();
        let v = r.sorted_values();
        assert_eq!(v, vec![-1.5, -1.5, -0.5, -0.5]);
    }

    #[test]
    fn sphere_degree_zero_harmonic() {
        let s = LinkSpectrum::new("h", 2, Provenance::User, vec![LinkMode::harmonic(0, 1)]);
        let r = indicial_roots(&IndicialParams::new(0.0, 2, 0), &s).unwrap();
        assert_eq!(r.sorted_values(), vec![-2.5, -0.5]);
    }

    #[test]
    fn exact_values_agree_with_floats() {
        let s = analytic::sphere2(12);
        let r = indicial_roots(&IndicialParams::exact(rat(1, 3), 2, 1), &s).unwrap();
        assert!(r.is_exact());
        for root in &r.roots {
            let e = root.exact.as_ref().unwrap().value().to_f64();
            assert!((e - root.value).abs() < 1e-12, "{e} vs {}", root.value);
        }
    }

    #[test]
    fn untagged_mode_gets_both_branches() {
        let s = LinkSpectrum::new(
            "u",
            1,
            Provenance::User,
            vec![LinkMode::exact(int(1), 0, HodgeKind::Unspecified, 1)],
        );
        let r = indicial_roots(&IndicialParams::new(0.0, 1, 0), &s).unwrap();
        assert_eq!(r.roots.len(), 8);
    }

    #[test]
    fn gap_window_examples() {
        let s = LinkSpectrum::new(
            "h",
            1,
            Provenance::User,
            vec![LinkMode::harmonic(0, 1), LinkMode::harmonic(1, 1)],
        );
        let r = indicial_roots(&IndicialParams::new(0.0, 1, 0), &s).unwrap();
        assert_eq!(sorted(r.roots.iter().map(|x| x.value + 1.0).collect())[0], -0.5);
        assert_eq!(gap_window(&r, -0.5), 0.5);
        let single = RootSet {
            f0: 1,
            a: 0.0,
            roots: vec![r.roots[0].clone()],
        };
        assert_eq!(gap_window(&single, single.roots[0].value + 1.0), 0.5);
        // α midway between shifted roots 1/2 and -1/2: nearest distance 1/2.
        assert_eq!(gap_window(&r, 0.0), 0.25);
    }

    #[test]
    fn mismatched_f0_is_rejected() {
        let s = analytic::circle(4);
        assert!(indicial_roots(&IndicialParams::new(0.0, 2, 0), &s).is_err());
    }
}
