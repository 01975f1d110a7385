//! Eigenvalues of truncated-cone Bessel problems.
//!
//! Each scalar factor of order `ν` is posed as
//!
//! ```text
//! −u'' − (f0/t) u' + (ν² − ((f0−1)/2)²)/t² u + s u = E u   on (ε, T),  u(T) = 0
//! ```
//!
//! with measure `t^{f0} dt`, whose solutions are `t^{−(f0−1)/2} J_ν(√(E−s) t)` and
//! `t^{−(f0−1)/2} Y_ν(√(E−s) t)`. The weak form is discretized with linear elements in
//! `y = ln t` and a lumped mass, giving a symmetric tridiagonal matrix whose
//! lowest eigenvalues are found by Sturm-sequence bisection.

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::{OperatorForm, RadialOperatorSpec};
use crate::error::{Error, Result};

/// Inner boundary condition at `t = ε`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum InnerBc {
    Dirichlet,
    Neumann,
    /// `u'(ε) = c · u(ε) / ε`.
    ScaledRobin { c: f64 },
}

impl InnerBc {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Dirichlet => "dirichlet",
            Self::Neumann => "neumann",
            Self::ScaledRobin { .. } => "scaled-robin",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    /// The lowest eigenvalues, ascending, repeated by multiplicity.
    pub eigenvalues: Vec<f64>,
    /// Distinct values (clustered) and their multiplicities.
    pub distinct: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub bc_used: InnerBc,
    pub eps: f64,
}

/// Relative gap below which eigenvalues are reported as one cluster.
pub const CLUSTER_TOL: f64 = 1e-9;
const BISECTION_MAX_ITER: usize = 200;

/// Symmetric tridiagonal matrix: diagonal `d`, off-diagonal `e`.
#[derive(Clone, Debug)]
struct Tridiagonal {
    d: Vec<f64>,
    e: Vec<f64>,
}

impl Tridiagonal {
    fn len(&self) -> usize {
        self.d.len()
    }

    fn pivmin(&self) -> f64 {
        let m = self.e.iter().map(|x| x * x).fold(1.0f64, f64::max);
        m * f64::MIN_POSITIVE / f64::EPSILON
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut q = self.d[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                q = self.d[i] - x - self.e[i - 1] * self.e[i - 1] / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.e[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    /// The `count` lowest eigenvalues by bisection.
    fn lowest(&self, count: usize) -> Result<Vec<f64>> {
        if count > self.len() {
            return Err(Error::Eigensolver(format!(
                "asked for {count} eigenvalues of a {}-dimensional discretization",
                self.len()
            )));
        }
        let pivmin = self.pivmin();
        let (glo, ghi) = self.gershgorin();
        let span = (ghi - glo).abs().max(ghi.abs()).max(glo.abs());
        let (glo, ghi) = (glo - 1e-14 * span - pivmin, ghi + 1e-14 * span + pivmin);
        let mut out = Vec::with_capacity(count);
        let mut lower = glo;
        for k in 0..count {
            let (mut lo, mut hi) = (lower, ghi);
            let mut done = false;
            for _ in 0..BISECTION_MAX_ITER {
                let mid = 0.5 * (lo + hi);
                if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + pivmin || mid == lo || mid == hi {
                    done = true;
                    break;
                }
                if self.count_below(mid, pivmin) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let value = 0.5 * (lo + hi);
            if !done || !value.is_finite() {
                return Err(Error::Eigensolver(format!("bisection for eigenvalue {k} did not converge")));
            }
            out.push(value);
            lower = lo;
        }
        Ok(out)
    }
}

/// Assembles the symmetrized tridiagonal matrix for one scalar factor.
fn assemble(nu: f64, f0: usize, shift: f64, grid: &Grid, bc: InnerBc) -> Result<Tridiagonal> {
    grid.validate()?;
    let n = grid.len();
    if n < 3 {
        return Err(Error::Grid(format!("{n} points cannot carry an eigenproblem")));
    }
    let y: Vec<f64> = grid.points.iter().map(|t| t.ln()).collect();
    let w = f0 as f64 - 1.0;
    let beta = w / 2.0;
    let q = nu * nu - beta * beta;
    let t = &grid.points;

    // Full (n-1)-node system: nodes 0..n-2, node n-1 carries the outer Dirichlet condition.
    let m = n - 1;
    let mut kd = vec![0.0; m];
    let mut ke = vec![0.0; m.saturating_sub(1)];
    let mut mass = vec![0.0; m];
    for i in 0..n - 1 {
        let h = y[i + 1] - y[i];
        if !(h > 0.0) {
            return Err(Error::Grid(format!("degenerate element between points {i} and {}", i + 1)));
        }
        let stiff = (w * 0.5 * (y[i] + y[i + 1])).exp() / h;
        for node in [i, i + 1] {
            if node < m {
                kd[node] += stiff + q * t[node].powf(w) * h / 2.0;
                mass[node] += t[node].powf(w + 2.0) * h / 2.0;
            }
        }
        if i + 1 < m {
            ke[i] = -stiff;
        }
    }
    if let InnerBc::ScaledRobin { c } = bc {
        kd[0] += c * t[0].powf(w);
    }
    let first = if bc == InnerBc::Dirichlet { 1 } else { 0 };
    if m <= first {
        return Err(Error::Grid("no interior unknowns".into()));
    }
    let d: Vec<f64> = (first..m).map(|i| kd[i] / mass[i] + shift).collect();
    let e: Vec<f64> = (first..m - 1).map(|i| ke[i] / (mass[i] * mass[i + 1]).sqrt()).collect();
    if d.iter().chain(e.iter()).any(|x| !x.is_finite()) {
        return Err(Error::Grid("matrix entries overflow on this grid".into()));
    }
    Ok(Tridiagonal { d, e })
}

fn cluster(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut distinct: Vec<f64> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    for &v in values {
        match distinct.last() {
            Some(&last) if (v - last).abs() <= CLUSTER_TOL * v.abs().max(last.abs()).max(1.0) => {
                *mult.last_mut().expect("nonempty") += 1;
            }
            _ => {
                distinct.push(v);
                mult.push(1);
            }
        }
    }
    (distinct, mult)
}

/// Lowest `count` eigenvalues of the truncated-cone problem with outer Dirichlet
/// condition. A factorized spec contributes the union of its two scalar factors.
pub fn eigenvalues(spec: &RadialOperatorSpec, grid: &Grid, inner_bc: InnerBc, count: usize) -> Result<EigenResult> {
    let orders = match spec.form {
        OperatorForm::FirstOrder2x2 { .. } => {
            return Err(Error::Domain(
                "eigenproblems are posed for the squared operator; use a second-order or factorized spec".into(),
            ))
        }
        _ => spec.orders(),
    };
    let mut all = Vec::new();
    for nu in orders {
        let m = assemble(nu, spec.f0, spec.potential_shift, grid, inner_bc)?;
        all.extend(m.lowest(count)?);
    }
    all.sort_by(f64::total_cmp);
    all.truncate(count);
    let (distinct, multiplicities) = cluster(&all);
    Ok(EigenResult {
        eigenvalues: all,
        distinct,
        multiplicities,
        bc_used: inner_bc,
        eps: grid.inner_cutoff(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcSensitivity {
    pub eps: f64,
    /// `max_n |E_n^D − E_n^N| / |E_n^D|` over the first `count` eigenvalues.
    pub discrepancy: f64,
    pub dirichlet: Vec<f64>,
    pub neumann: Vec<f64>,
}

/// Dirichlet/Neumann discrepancy at each inner cut-off, on log-uniform grids of
/// `points` points over `[ε, t_max]`.
pub fn bc_sensitivity(
    spec: &RadialOperatorSpec,
    eps_seq: &[f64],
    t_max: f64,
    points: usize,
    count: usize,
) -> Result<Vec<BcSensitivity>> {
    if eps_seq.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Domain("the cut-off sequence must be strictly decreasing".into()));
    }
    eps_seq
        .iter()
        .map(|&eps| {
            let grid = Grid::log_uniform(eps, t_max, points)?;
            let d = eigenvalues(spec, &grid, InnerBc::Dirichlet, count)?.eigenvalues;
            let n = eigenvalues(spec, &grid, InnerBc::Neumann, count)?.eigenvalues;
            let discrepancy = d
                .iter()
                .zip(&n)
                .map(|(a, b)| (a - b).abs() / a.abs())
                .fold(0.0, f64::max);
            Ok(BcSensitivity {
                eps,
                discrepancy,
                dirichlet: d,
                neumann: n,
            })
        })
        .collect()
}
