use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::complex::FilteredSimplicialComplex;
use super::homology::{ih_betti, Perversity};
use crate::error::{Error, Result};
use crate::strata::{self, StratifiedSpace};

/// What was decided for one singular stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumVerdict {
    pub stratum_id: String,
    pub link_dim: usize,
    /// Middle-degree IH Betti number of the link; `None` for odd-dimensional links.
    pub middle_betti: Option<usize>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittVerdict {
    pub is_witt: bool,
    pub strata: Vec<StratumVerdict>,
    /// The first failing stratum, with the nonvanishing group.
    pub witness: Option<String>,
    /// Flag-like compatibility warnings from the supplied triangulations.
    pub warnings: Vec<String>,
}

/// Decides the Witt condition: every even-dimensional link `L` of dimension `f`
/// has `IH_{f/2}(L) = 0` for the middle perversity `p`.
///
/// `links` maps singular stratum ids to filtered triangulations of their links;
/// odd-dimensional links need none.
pub fn witt_check(
    space: &StratifiedSpace,
    links: &BTreeMap<String, FilteredSimplicialComplex>,
    p: &Perversity,
) -> Result<WittVerdict> {
    let report = strata::validate(space);
    if !report.passed() {
        return Err(Error::InvalidSpace {
            name: space.name.clone(),
            report,
        });
    }
    let mut verdicts = Vec::new();
    let mut warnings = Vec::new();
    let mut witness = None;
    for s in space.singular_strata() {
        let f = s.link.as_ref().unwrap().total_dim;
        if f % 2 == 1 {
            verdicts.push(StratumVerdict {
                stratum_id: s.id.clone(),
                link_dim: f,
                middle_betti: None,
                passed: true,
            });
            continue;
        }
        let cx = links
            .get(&s.id)
            .ok_or_else(|| Error::MissingTriangulation(s.id.clone()))?;
        if cx.dim() != f {
            return Err(Error::FiltrationMismatch(format!(
                "triangulation for the link of `{}` has dimension {}, the link has dimension {f}",
                s.id,
                cx.dim()
            )));
        }
        warnings.extend(
            cx.flaglike_warnings()
                .into_iter()
                .map(|w| format!("link of {}: {w}", s.id)),
        );
        let b = ih_betti(cx, p, f / 2)?;
        if b != 0 && witness.is_none() {
            witness = Some(format!(
                "stratum `{}`: IH_{}({}) has rank {b}",
                s.id,
                f / 2,
                s.link.as_ref().unwrap().name
            ));
        }
        verdicts.push(StratumVerdict {
            stratum_id: s.id.clone(),
            link_dim: f,
            middle_betti: Some(b),
            passed: b == 0,
        });
    }
    Ok(WittVerdict {
        is_witt: witness.is_none(),
        strata: verdicts,
        witness,
        warnings,
    })
}

