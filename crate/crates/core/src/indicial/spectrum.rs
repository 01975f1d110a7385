use std::io::Read;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{int, parse_rational, rational_sqrt, to_f64};
use crate::error::{Error, Result};

/// Tolerance for floating-point comparisons of eigenvalues.
pub const FLOAT_TOL: f64 = 1e-12;

/// Kodaira type of a link eigenform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HodgeKind {
    Harmonic,
    /// In the image of `d`.
    Exact,
    /// In the image of `δ`.
    Coexact,
    /// Non-harmonic without a Kodaira tag; both branches are used.
    Unspecified,
}

impl HodgeKind {
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "harmonic" => Some(Self::Harmonic),
            "exact" => Some(Self::Exact),
            "coexact" => Some(Self::Coexact),
            "" | "unspecified" | "unknown" => Some(Self::Unspecified),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Harmonic => "harmonic",
            Self::Exact => "exact",
            Self::Coexact => "coexact",
            Self::Unspecified => "unspecified",
        }
    }
}

/// One eigenspace of the link de Rham operator in a fixed form degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkMode {
    /// Eigenvalue of `ð_dR` on the link; `λ²` is the Laplace eigenvalue.
    pub lambda: f64,
    /// `λ²` when it is known exactly.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "super::exact::serde_rational::option")]
    pub lambda_sq: Option<BigRational>,
    /// Vertical form degree.
    pub k: usize,
    pub kind: HodgeKind,
    pub mult: usize,
}

impl LinkMode {
    pub fn exact(lambda_sq: BigRational, k: usize, kind: HodgeKind, mult: usize) -> Self {
        Self {
            lambda: to_f64(&lambda_sq).sqrt(),
            lambda_sq: Some(lambda_sq),
            k,
            kind,
            mult,
        }
    }

    pub fn float(lambda: f64, k: usize, kind: HodgeKind, mult: usize) -> Self {
        Self {
            lambda,
            lambda_sq: None,
            k,
            kind,
            mult,
        }
    }

    pub fn harmonic(k: usize, mult: usize) -> Self {
        Self::exact(BigRational::zero(), k, HodgeKind::Harmonic, mult)
    }

    pub fn is_harmonic(&self) -> bool {
        self.kind == HodgeKind::Harmonic
    }

    /// `λ²` in floating point.
    pub fn lambda_sq_f64(&self) -> f64 {
        match &self.lambda_sq {
            Some(q) => to_f64(q),
            None => self.lambda * self.lambda,
        }
    }

    /// `λ` as written in spectrum files: rational, `sqrt(q)`, or a float.
    pub fn lambda_text(&self) -> String {
        match &self.lambda_sq {
            Some(q) => match rational_sqrt(q) {
                Some(r) => r.to_string(),
                None => format!("sqrt({q})"),
            },
            None => format!("{:?}", self.lambda),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Analytic,
    Numeric,
    User,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkSpectrum {
    pub name: String,
    /// Dimension of the link.
    pub f0: usize,
    pub provenance: Provenance,
    pub modes: Vec<LinkMode>,
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    lambda: String,
    k: usize,
    #[serde(default)]
    kind: String,
    mult: usize,
}

/// Parses `λ` as a rational, `sqrt(q)` or a float, returning `(λ, exact λ²)`.
pub fn parse_lambda(text: &str) -> Option<(f64, Option<BigRational>)> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let q = parse_rational(inner)?;
        if q.is_negative() {
            return None;
        }
        return Some((to_f64(&q).sqrt(), Some(q)));
    }
    if let Some(q) = parse_rational(t) {
        return Some((to_f64(&q), Some(&q * &q)));
    }
    let x: f64 = t.parse().ok()?;
    x.is_finite().then_some((x, None))
}

impl LinkSpectrum {
    pub fn new(name: impl Into<String>, f0: usize, provenance: Provenance, modes: Vec<LinkMode>) -> Self {
        Self {
            name: name.into(),
            f0,
            provenance,
            modes,
        }
    }

    /// Checks the per-mode invariants, and Hodge symmetry for analytic spectra.
    pub fn validate(&self) -> Result<()> {
        for (i, m) in self.modes.iter().enumerate() {
            let at = |msg: String| Error::Domain(format!("mode {i} of `{}`: {msg}", self.name));
            if !(m.lambda.is_finite() && m.lambda >= 0.0) {
                return Err(at(format!("lambda = {} must be finite and nonnegative", m.lambda)));
            }
            if let Some(q) = &m.lambda_sq {
                if q.is_negative() {
                    return Err(at("lambda^2 is negative".into()));
                }
            }
            if m.k > self.f0 {
                return Err(at(format!("degree {} exceeds the link dimension {}", m.k, self.f0)));
            }
            if m.mult == 0 {
                return Err(at("multiplicity must be positive".into()));
            }
            let zero = match &m.lambda_sq {
                Some(q) => q.is_zero(),
                None => m.lambda == 0.0,
            };
            if zero != m.is_harmonic() {
                return Err(at(format!(
                    "kind `{}` does not match lambda = {}",
                    m.kind.as_str(),
                    m.lambda_text()
                )));
            }
        }
        if self.provenance == Provenance::Analytic && !self.hodge_symmetric() {
            return Err(Error::Domain(format!(
                "harmonic counts of `{}` are not symmetric under k -> f0 - k",
                self.name
            )));
        }
        Ok(())
    }

    /// Number of harmonic forms in each degree `0..=f0`.
    pub fn harmonic_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.f0 + 1];
        for m in self.modes.iter().filter(|m| m.is_harmonic()) {
            if m.k <= self.f0 {
                counts[m.k] += m.mult;
            }
        }
        counts
    }

    pub fn hodge_symmetric(&self) -> bool {
        let c = self.harmonic_counts();
        c.iter().eq(c.iter().rev())
    }

    /// Whether every `λ²` is known exactly.
    pub fn is_exact(&self) -> bool {
        self.modes.iter().all(|m| m.lambda_sq.is_some())
    }

    /// Replaces the link metric `g` by `c²g`, so that `λ ↦ λ / c`.
    pub fn scaled(&self, c: f64, c_sq: Option<&BigRational>) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|m| {
                let lambda_sq = match (&m.lambda_sq, c_sq) {
                    (Some(q), Some(c2)) => Some(q / c2),
                    _ => None,
                };
                LinkMode {
                    lambda: m.lambda / c,
                    lambda_sq,
                    ..m.clone()
                }
            })
            .collect();
        Self {
            modes,
            ..self.clone()
        }
    }

    pub fn from_csv_reader<R: Read>(reader: R, name: &str, f0: usize) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        for col in ["lambda", "k", "mult"] {
            if !headers.iter().any(|h| h == col) {
                return Err(Error::schema(format!("{name}: header"), format!("missing column `{col}`")));
            }
        }
        let mut modes = Vec::new();
        for (i, row) in rdr.deserialize::<CsvRow>().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| Error::schema(format!("{name}: line {line}"), e.to_string()))?;
            let (lambda, lambda_sq) = parse_lambda(&row.lambda).ok_or_else(|| {
                Error::schema(
                    format!("{name}: line {line}, column lambda"),
                    format!("cannot parse `{}`", row.lambda),
                )
            })?;
            let mut kind = HodgeKind::parse(&row.kind).ok_or_else(|| {
                Error::schema(
                    format!("{name}: line {line}, column kind"),
                    format!("unknown kind `{}`", row.kind),
                )
            })?;
            if kind == HodgeKind::Unspecified && lambda == 0.0 {
                kind = HodgeKind::Harmonic;
            }
            modes.push(LinkMode {
                lambda,
                lambda_sq,
                k: row.k,
                kind,
                mult: row.mult,
            });
        }
        if modes.is_empty() {
            return Err(Error::schema(name, "spectrum has no modes"));
        }
        let spectrum = Self::new(name, f0, Provenance::User, modes);
        spectrum.validate()?;
        Ok(spectrum)
    }

    pub fn read_csv(path: &Path, f0: usize) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(file, &path.display().to_string(), f0)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["lambda", "k", "kind", "mult"])?;
        for m in &self.modes {
            w.write_record([
                m.lambda_text(),
                m.k.to_string(),
                m.kind.as_str().to_string(),
                m.mult.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Spectral gap: every nonzero `λ` is at least 1.
pub fn check_gap(s: &LinkSpectrum) -> bool {
    s.modes.iter().filter(|m| !m.is_harmonic()).all(|m| match &m.lambda_sq {
        Some(q) => *q >= BigRational::one(),
        None => m.lambda >= 1.0 - FLOAT_TOL,
    })
}

/// No harmonic forms in the middle degree `f0 / 2`.
pub fn check_middle_vanishing(s: &LinkSpectrum) -> bool {
    s.f0 % 2 == 1 || !s.modes.iter().any(|m| m.is_harmonic() && 2 * m.k == s.f0)
}

/// The factor `c` such that rescaling the link metric by `c²` produces a gap:
/// `min(1, smallest nonzero λ)`.
pub fn required_scaling(s: &LinkSpectrum) -> f64 {
    s.modes
        .iter()
        .filter(|m| !m.is_harmonic())
        .map(|m| m.lambda)
        .fold(1.0_f64, f64::min)
}

/// `c²` for [`required_scaling`], exactly when every nonzero `λ²` is exact.
pub fn required_scaling_sq_exact(s: &LinkSpectrum) -> Option<BigRational> {
    let mut c_sq = int(1);
    for m in s.modes.iter().filter(|m| !m.is_harmonic()) {
        let q = m.lambda_sq.as_ref()?;
        if *q < c_sq {
            c_sq = q.clone();
        }
    }
    Some(c_sq)
}

/// Rescales the link metric so that [`check_gap`] holds, returning the factor used.
pub fn rescale_for_gap(s: &LinkSpectrum) -> (LinkSpectrum, f64) {
    let c = required_scaling(s);
    if c >= 1.0 {
        return (s.clone(), 1.0);
    }
    let c_sq = required_scaling_sq_exact(s);
    let c = c_sq.as_ref().map_or(c, |q| to_f64(q).sqrt());
    (s.scaled(c, c_sq.as_ref()), c)
}

/// De Rham spectra of round and flat model links, truncated by `λ²`.
pub mod analytic {
    use super::*;

    /// The unit circle: `λ = n`, functions coexact and 1-forms exact, each twice.
    pub fn circle(max_lambda_sq: u64) -> LinkSpectrum {
        let mut modes = vec![LinkMode::harmonic(0, 1), LinkMode::harmonic(1, 1)];
        for n in 1u64.. {
            let q = n * n;
            if q > max_lambda_sq {
                break;
            }
            modes.push(LinkMode::exact(int(q as i64), 0, HodgeKind::Coexact, 2));
            modes.push(LinkMode::exact(int(q as i64), 1, HodgeKind::Exact, 2));
        }
        LinkSpectrum::new("S1", 1, Provenance::Analytic, modes)
    }

    /// The round unit 2-sphere: `λ² = l(l+1)` with multiplicity `2l+1` in each
    /// of the four Kodaira pieces.
    pub fn sphere2(max_lambda_sq: u64) -> LinkSpectrum {
        let mut modes = vec![LinkMode::harmonic(0, 1), LinkMode::harmonic(2, 1)];
        for l in 1u64.. {
            let q = l * (l + 1);
            if q > max_lambda_sq {
                break;
            }
            let m = (2 * l + 1) as usize;
            let q = int(q as i64);
            modes.push(LinkMode::exact(q.clone(), 0, HodgeKind::Coexact, m));
            modes.push(LinkMode::exact(q.clone(), 1, HodgeKind::Exact, m));
            modes.push(LinkMode::exact(q.clone(), 1, HodgeKind::Coexact, m));
            modes.push(LinkMode::exact(q, 2, HodgeKind::Exact, m));
        }
        LinkSpectrum::new("S2", 2, Provenance::Analytic, modes)
    }

    /// The flat square torus `R²/(2πZ)²`: `λ² = m² + n²`, counted by lattice points.
    pub fn torus2(max_lambda_sq: u64) -> LinkSpectrum {
        let mut modes = vec![
            LinkMode::harmonic(0, 1),
            LinkMode::harmonic(1, 2),
            LinkMode::harmonic(2, 1),
        ];
        let bound = (max_lambda_sq as f64).sqrt() as i64 + 1;
        for q in 1..=max_lambda_sq as i64 {
            let count = (-bound..=bound)
                .flat_map(|m| (-bound..=bound).map(move |n| (m, n)))
                .filter(|(m, n)| m * m + n * n == q)
                .count();
            if count == 0 {
                continue;
            }
            let q = int(q);
            modes.push(LinkMode::exact(q.clone(), 0, HodgeKind::Coexact, count));
            modes.push(LinkMode::exact(q.clone(), 1, HodgeKind::Exact, count));
            modes.push(LinkMode::exact(q.clone(), 1, HodgeKind::Coexact, count));
            modes.push(LinkMode::exact(q, 2, HodgeKind::Exact, count));
        }
        LinkSpectrum::new("T2", 2, Provenance::Analytic, modes)
    }

    /// Spectrum of a library link by name.
    pub fn by_name(name: &str, max_lambda_sq: u64) -> Option<LinkSpectrum> {
        match name {
            "S1" => Some(circle(max_lambda_sq)),
            "S2" => Some(sphere2(max_lambda_sq)),
            "T2" => Some(torus2(max_lambda_sq)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::analytic::*;
    use super::*;
    use crate::indicial::exact::rat;

    #[test]
    fn analytic_spectra_are_valid() {
        for s in [circle(25), sphere2(30), torus2(10)] {
            s.validate().unwrap();
            assert!(check_gap(&s));
        }
        assert_eq!(torus2(1).modes[3].mult, 4);
        assert_eq!(torus2(2).modes.last().unwrap().mult, 4);
    }

    #[test]
    fn middle_vanishing() {
        assert!(check_middle_vanishing(&circle(4)));
        assert!(check_middle_vanishing(&sphere2(6)));
        assert!(!check_middle_vanishing(&torus2(4)));
    }

    #[test]
    fn empty_nonzero_spectrum_has_gap() {
        let s = LinkSpectrum::new("h", 2, Provenance::User, vec![LinkMode::harmonic(0, 1)]);
        assert!(check_gap(&s));
        assert_eq!(required_scaling(&s), 1.0);
    }

    #[test]
    fn scaling_from_half() {
        let s = LinkSpectrum::new(
            "x",
            1,
            Provenance::User,
            vec![LinkMode::exact(rat(1, 4), 0, HodgeKind::Coexact, 1)],
        );
        assert!(!check_gap(&s));
        assert_eq!(required_scaling(&s), 0.5);
        let (scaled, c) = rescale_for_gap(&s);
        assert_eq!(c, 0.5);
        assert!(check_gap(&scaled));
        assert_eq!(scaled.modes[0].lambda_sq, Some(int(1)));
    }

    #[test]
    fn csv_round_trip() {
        let s = sphere2(6);
        let text = s.to_csv().unwrap();
        assert!(text.contains("sqrt(2),0,coexact,3"));
        let back = LinkSpectrum::from_csv_reader(text.as_bytes(), "S2", 2).unwrap();
        assert_eq!(back.modes, s.modes);
    }

    #[test]
    fn csv_errors_name_the_location() {
        let err = LinkSpectrum::from_csv_reader("lambda,k,kind,mult\nfoo,0,exact,1\n".as_bytes(), "f.csv", 1)
            .unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = LinkSpectrum::from_csv_reader("lambda,k\n1,0\n".as_bytes(), "f.csv", 1).unwrap_err();
        assert!(matches!(err, Error::Schema { .. }));
        let err = LinkSpectrum::from_csv_reader("lambda,k,kind,mult\n1,3,exact,1\n".as_bytes(), "f.csv", 1)
            .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn lambda_forms() {
        assert_eq!(parse_lambda("3/2").unwrap().1, Some(rat(9, 4)));
        assert_eq!(parse_lambda("sqrt(2)").unwrap().1, Some(int(2)));
        assert!(parse_lambda("sqrt(-2)").is_none());
        assert_eq!(parse_lambda("0.5").unwrap().0, 0.5);
    }
}
