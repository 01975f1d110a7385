use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA: &str = "fscx.v1";

/// A simplex as a strictly increasing list of vertex indices.
pub type Simplex = Vec<usize>;

/// Closure of one singular stratum, `X_j` restricted to that stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationPiece {
    pub stratum_id: String,
    /// Dimension of the stratum; defaults to the largest simplex in the piece.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub simplices: Vec<Simplex>,
}

impl FiltrationPiece {
    pub fn stratum_dim(&self) -> usize {
        self.dim.unwrap_or_else(|| {
            self.simplices
                .iter()
                .map(|s| s.len().saturating_sub(1))
                .max()
                .unwrap_or(0)
        })
    }
}

/// A simplicial complex with the closures of its singular strata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredSimplicialComplex {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    #[serde(rename = "vertices")]
    pub vertex_count: usize,
    /// Dimension `n` of the pseudomanifold; defaults to the largest simplex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub simplices: Vec<Simplex>,
    #[serde(default)]
    pub filtration: Vec<FiltrationPiece>,
}

#[derive(Serialize, Deserialize)]
struct Document {
    #[serde(default)]
    schema: Option<String>,
    #[serde(flatten)]
    complex: FilteredSimplicialComplex,
}

/// All nonempty faces of the given simplices, sorted by dimension then lexicographically.
pub fn face_closure<'a>(simplices: impl IntoIterator<Item = &'a Simplex>) -> Vec<Simplex> {
    let mut set = BTreeSet::new();
    for s in simplices {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        for mask in 1u64..(1u64 << s.len()) {
            let face: Simplex = s
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            set.insert(face);
        }
    }
    let mut out: Vec<Simplex> = set.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

impl FilteredSimplicialComplex {
    /// Builds the complex generated by `facets` with no singular strata.
    pub fn from_facets(name: impl Into<String>, facets: &[Simplex]) -> Self {
        let simplices = face_closure(facets);
        let vertex_count = simplices.iter().flatten().max().map_or(0, |v| v + 1);
        Self {
            name: name.into(),
            vertex_count,
            dim: None,
            simplices,
            filtration: Vec::new(),
        }
    }

    /// Adds the closure of a singular stratum generated by `facets`.
    pub fn with_stratum(mut self, id: impl Into<String>, dim: usize, facets: &[Simplex]) -> Self {
        self.filtration.push(FiltrationPiece {
            stratum_id: id.into(),
            dim: Some(dim),
            simplices: face_closure(facets),
        });
        self
    }

    pub fn dim(&self) -> usize {
        self.dim.unwrap_or_else(|| self.max_simplex_dim())
    }

    fn max_simplex_dim(&self) -> usize {
        self.simplices
            .iter()
            .map(|s| s.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Simplices of dimension `d`, in a fixed order.
    pub fn simplices_of_dim(&self, d: usize) -> Vec<&Simplex> {
        let mut out: Vec<&Simplex> = self.simplices.iter().filter(|s| s.len() == d + 1).collect();
        out.sort();
        out
    }

    /// Checks the simplicial and filtration invariants.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for s in &self.simplices {
            if s.is_empty() {
                return Err(Error::MalformedComplex("empty simplex".into()));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::MalformedComplex(format!(
                    "simplex {s:?} is not a strictly increasing vertex list"
                )));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= self.vertex_count) {
                return Err(Error::MalformedComplex(format!(
                    "vertex {v} of {s:?} exceeds the vertex count {}",
                    self.vertex_count
                )));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::MalformedComplex(format!("simplex {s:?} listed twice")));
            }
        }
        for s in &self.simplices {
            for face in face_closure([s]) {
                if !seen.contains(&face) {
                    return Err(Error::MalformedComplex(format!(
                        "face {face:?} of {s:?} is missing"
                    )));
                }
            }
        }
        if let Some(d) = self.dim {
            if d < self.max_simplex_dim() {
                return Err(Error::MalformedComplex(format!(
                    "declared dimension {d} is below the largest simplex"
                )));
            }
        }

        let n = self.dim();
        let mut ids = BTreeSet::new();
        for piece in &self.filtration {
            if !ids.insert(piece.stratum_id.as_str()) {
                return Err(Error::FiltrationMismatch(format!(
                    "stratum `{}` listed twice",
                    piece.stratum_id
                )));
            }
            let members: BTreeSet<&Simplex> = piece.simplices.iter().collect();
            for s in &piece.simplices {
                if !seen.contains(s) {
                    return Err(Error::FiltrationMismatch(format!(
                        "simplex {s:?} of stratum `{}` is not in the complex",
                        piece.stratum_id
                    )));
                }
                if s.len() > piece.stratum_dim() + 1 {
                    return Err(Error::FiltrationMismatch(format!(
                        "simplex {s:?} exceeds the dimension of stratum `{}`",
                        piece.stratum_id
                    )));
                }
                for face in face_closure([s]) {
                    if !members.contains(&face) {
                        return Err(Error::FiltrationMismatch(format!(
                            "stratum `{}` is not a subcomplex: face {face:?} of {s:?} is missing",
                            piece.stratum_id
                        )));
                    }
                }
            }
            if piece.stratum_dim() >= n {
                return Err(Error::FiltrationMismatch(format!(
                    "stratum `{}` has dimension {} but singular strata must have dimension < {n}",
                    piece.stratum_id,
                    piece.stratum_dim()
                )));
            }
        }

        for s in &self.simplices {
            let containing: Vec<&FiltrationPiece> = self
                .filtration
                .iter()
                .filter(|p| p.simplices.contains(s))
                .collect();
            if let Some(min) = containing.iter().map(|p| p.stratum_dim()).min() {
                let owners: Vec<&str> = containing
                    .iter()
                    .filter(|p| p.stratum_dim() == min)
                    .map(|p| p.stratum_id.as_str())
                    .collect();
                if owners.len() > 1 {
                    return Err(Error::FiltrationMismatch(format!(
                        "simplex {s:?} has no unique minimal stratum: {}",
                        owners.join(", ")
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dimension of the smallest filtration piece containing each simplex;
    /// `n` for simplices in no piece.
    pub fn stratum_dims(&self) -> BTreeMap<Simplex, usize> {
        let n = self.dim();
        let mut out: BTreeMap<Simplex, usize> = self.simplices.iter().map(|s| (s.clone(), n)).collect();
        for piece in &self.filtration {
            let d = piece.stratum_dim();
            for s in &piece.simplices {
                if let Some(slot) = out.get_mut(s) {
                    *slot = (*slot).min(d);
                }
            }
        }
        out
    }

    /// Simplices whose vertices all lie in a filtration piece without the simplex
    /// itself belonging to it. Allowability is only faithful when this is empty.
    pub fn flaglike_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for piece in &self.filtration {
            let vertices: BTreeSet<usize> = piece.simplices.iter().flatten().copied().collect();
            let members: BTreeSet<&Simplex> = piece.simplices.iter().collect();
            for s in &self.simplices {
                if s.len() > 1 && s.iter().all(|v| vertices.contains(v)) && !members.contains(s) {
                    out.push(format!(
                        "simplex {s:?} has all vertices in stratum `{}` but is not part of it",
                        piece.stratum_id
                    ));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = Document {
            schema: Some(SCHEMA.to_string()),
            complex: self.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text)?;
        if let Some(schema) = &doc.schema {
            if schema != SCHEMA {
                return Err(Error::schema(
                    "schema",
                    format!("expected `{SCHEMA}`, found `{schema}`"),
                ));
            }
        }
        if doc.complex.simplices.is_empty() {
            return Err(Error::schema("simplices", "at least one simplex is required"));
        }
        Ok(doc.complex)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
