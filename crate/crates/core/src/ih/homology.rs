use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::complex::{face_closure, FilteredSimplicialComplex, Simplex};
use super::linalg::QMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerversityKind {
    LowerMiddle,
    UpperMiddle,
    Custom,
}

/// A Goresky–MacPherson perversity `p̄(c)` for codimensions `c >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perversity {
    pub kind: PerversityKind,
    /// `values[i] = p̄(i + 2)`; custom perversities are extended by their last value.
    values: Vec<i64>,
}

impl Perversity {
    pub const LOWER_MIDDLE: Perversity = Perversity {
        kind: PerversityKind::LowerMiddle,
        values: Vec::new(),
    };

    pub const UPPER_MIDDLE: Perversity = Perversity {
        kind: PerversityKind::UpperMiddle,
        values: Vec::new(),
    };

    /// A custom perversity from `p̄(2), p̄(3), ...`, checked against the growth condition.
    pub fn custom(values: Vec<i64>) -> Result<Self> {
        match values.first() {
            None => return Err(Error::InvalidPerversity("no values given".into())),
            Some(&v) if v != 0 => {
                return Err(Error::InvalidPerversity(format!("p(2) = {v}, expected 0")))
            }
            _ => {}
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[1] != w[0] && w[1] != w[0] + 1 {
                return Err(Error::InvalidPerversity(format!(
                    "p({}) = {} and p({}) = {} violate the growth condition",
                    i + 2,
                    w[0],
                    i + 3,
                    w[1]
                )));
            }
        }
        Ok(Self {
            kind: PerversityKind::Custom,
            values,
        })
    }

    pub fn value(&self, c: usize) -> i64 {
        let c = c.max(2) as i64;
        match self.kind {
            PerversityKind::LowerMiddle => (c - 2).div_euclid(2),
            PerversityKind::UpperMiddle => (c - 1).div_euclid(2),
            PerversityKind::Custom => {
                let i = (c - 2) as usize;
                *self.values.get(i).unwrap_or_else(|| self.values.last().unwrap())
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "lower" | "lower-middle" => Ok(Self::LOWER_MIDDLE),
            "upper" | "upper-middle" => Ok(Self::UPPER_MIDDLE),
            other => {
                let values = other
                    .split(',')
                    .map(|v| v.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| {
                        Error::InvalidPerversity(format!(
                            "`{other}` is neither lower, upper nor a list of integers"
                        ))
                    })?;
                Self::custom(values)
            }
        }
    }
}

/// A chain complex over `Q`: `boundaries[d]` maps degree `d` to degree `d - 1`.
#[derive(Clone, Debug)]
pub struct ChainComplexQ {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<QMatrix>,
}

impl ChainComplexQ {
    /// `∂_{d-1} ∘ ∂_d = 0` in every degree.
    pub fn is_complex(&self) -> bool {
        (2..self.boundaries.len()).all(|d| self.boundaries[d - 1].mul(&self.boundaries[d]).is_zero())
    }

    pub fn betti(&self, d: usize) -> usize {
        let Some(&dim) = self.ranks.get(d) else {
            return 0;
        };
        let out = if d == 0 { 0 } else { self.boundaries[d].rank() };
        let inc = self.boundaries.get(d + 1).map_or(0, QMatrix::rank);
        dim - out - inc
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..self.ranks.len()).map(|d| self.betti(d)).collect()
    }
}

fn sign(i: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(if i % 2 == 0 { 1 } else { -1 }))
}

/// Simplicial boundary from degree `d` to `d - 1` in the given bases.
fn boundary_matrix(rows: &[&Simplex], cols: &[&Simplex]) -> QMatrix {
    let index: BTreeMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut m = QMatrix::zeros(rows.len(), cols.len());
    for (c, s) in cols.iter().enumerate() {
        for i in 0..s.len() {
            let mut face = (*s).clone();
            face.remove(i);
            if let Some(&r) = index.get(&face) {
                m.set(r, c, sign(i));
            }
        }
    }
    m
}

/// Whether the `d`-simplex `s` is `p̄`-allowable: each face `τ` lying in a stratum
/// closure of codimension `c >= 2` satisfies `dim τ <= d - c + p̄(c)`.
fn allowable(
    s: &Simplex,
    n: usize,
    p: &Perversity,
    stratum_dim: &BTreeMap<Simplex, usize>,
) -> bool {
    let d = s.len() as i64 - 1;
    face_closure([s]).iter().all(|face| {
        let sd = stratum_dim[face];
        if sd + 2 > n {
            return true;
        }
        let c = n - sd;
        face.len() as i64 - 1 <= d - c as i64 + p.value(c)
    })
}

/// The complex of `p̄`-allowable chains whose boundaries are also allowable,
/// written in kernel coordinates.
pub fn intersection_chain_complex(
    cx: &FilteredSimplicialComplex,
    p: &Perversity,
) -> Result<ChainComplexQ> {
    cx.validate()?;
    let n = cx.dim();
    let stratum_dim = cx.stratum_dims();
    let by_dim: Vec<Vec<&Simplex>> = (0..=n).map(|d| cx.simplices_of_dim(d)).collect();
    let allow: Vec<Vec<bool>> = by_dim
        .iter()
        .map(|ss| ss.iter().map(|s| allowable(s, n, p, &stratum_dim)).collect())
        .collect();

    // bases[d]: columns over all d-simplices spanning the intersection chains.
    let mut bases: Vec<(Vec<usize>, QMatrix)> = Vec::new();
    for d in 0..=n {
        let cols: Vec<usize> = (0..by_dim[d].len()).filter(|&i| allow[d][i]).collect();
        let col_simplices: Vec<&Simplex> = cols.iter().map(|&i| by_dim[d][i]).collect();
        let kernel = if d == 0 {
            QMatrix::zeros(0, cols.len()).kernel()
        } else {
            let bad_rows: Vec<&Simplex> = (0..by_dim[d - 1].len())
                .filter(|&i| !allow[d - 1][i])
                .map(|i| by_dim[d - 1][i])
                .collect();
            boundary_matrix(&bad_rows, &col_simplices).kernel()
        };
        let mut basis = QMatrix::zeros(by_dim[d].len(), kernel.basis.len());
        for (j, v) in kernel.basis.iter().enumerate() {
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    basis.set(cols[k], j, x.clone());
                }
            }
        }
        let free: Vec<usize> = kernel.free.iter().map(|&k| cols[k]).collect();
        bases.push((free, basis));
    }

    let mut boundaries = vec![QMatrix::zeros(0, bases[0].1.cols())];
    for d in 1..=n {
        let full = boundary_matrix(&by_dim[d - 1], &by_dim[d]).mul(&bases[d].1);
        let (free, _) = &bases[d - 1];
        let mut coords = QMatrix::zeros(free.len(), full.cols());
        for (r, &f) in free.iter().enumerate() {
            for c in 0..full.cols() {
                coords.set(r, c, full.get(f, c).clone());
            }
        }
        boundaries.push(coords);
    }
    Ok(ChainComplexQ {
        ranks: bases.iter().map(|(_, b)| b.cols()).collect(),
        boundaries,
    })
}

/// Simplicial chain complex over `Q`, ignoring the filtration.
pub fn chain_complex(cx: &FilteredSimplicialComplex) -> Result<ChainComplexQ> {
    let mut plain = cx.clone();
    plain.filtration.clear();
    intersection_chain_complex(&plain, &Perversity::LOWER_MIDDLE)
}

/// Rational Betti number `b_d` of the underlying simplicial complex.
pub fn homology(cx: &FilteredSimplicialComplex, d: usize) -> Result<usize> {
    Ok(chain_complex(cx)?.betti(d))
}

/// Rank of `IH_d^{p̄}` over `Q`.
pub fn ih_betti(cx: &FilteredSimplicialComplex, p: &Perversity, d: usize) -> Result<usize> {
    Ok(intersection_chain_complex(cx, p)?.betti(d))
}
