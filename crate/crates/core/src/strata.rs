//! Combinatorial smoothly stratified pseudomanifolds.
//!
//! A [`StratifiedSpace`] is a finite poset of strata, each carrying a manifold
//! dimension and, for singular strata, the link as a nested stratified space.
//! Links are attached as global products, so the control data of a stratum is
//! implied by the product structure and never stored.
//!
//! The order is kept exactly as supplied (normally a Hasse diagram); every
//! consumer works on the transitive closure computed by [`StrataPoset`].

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::resolution::canonical_form;

pub const SCHEMA: &str = "stratspace.v1";

/// Id given to the regular stratum by [`StratifiedSpace::manifold`].
pub const REGULAR_ID: &str = "reg";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub id: String,
    pub dim: usize,
    /// Link of the stratum; `None` marks the regular (open, dense) stratum.
    #[serde(default)]
    pub link: Option<Box<StratifiedSpace>>,
}

impl Stratum {
    pub fn regular(id: impl Into<String>, dim: usize) -> Self {
        Self {
            id: id.into(),
            dim,
            link: None,
        }
    }

    pub fn singular(id: impl Into<String>, dim: usize, link: StratifiedSpace) -> Self {
        Self {
            id: id.into(),
            dim,
            link: Some(Box::new(link)),
        }
    }

    pub fn is_singular(&self) -> bool {
        self.link.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratifiedSpace {
    pub name: String,
    pub total_dim: usize,
    pub strata: Vec<Stratum>,
    /// Pairs `[lower, upper]`: `lower` lies in the closure of `upper`.
    #[serde(default)]
    pub order: Vec<(String, String)>,
}

/// On-disk envelope for the `stratspace.v1` schema.
#[derive(Serialize, Deserialize)]
struct Document {
    #[serde(default)]
    schema: Option<String>,
    #[serde(flatten)]
    space: StratifiedSpace,
}

impl StratifiedSpace {
    /// A closed smooth manifold: a single regular stratum, depth 0.
    ///
    /// The name acts as the manifold label when comparing depth-0 spaces.
    pub fn manifold(name: impl Into<String>, dim: usize) -> Self {
        Self {
            name: name.into(),
            total_dim: dim,
            strata: vec![Stratum::regular(REGULAR_ID, dim)],
            order: Vec::new(),
        }
    }

    pub fn stratum(&self, id: &str) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.id == id)
    }

    pub fn singular_strata(&self) -> impl Iterator<Item = &Stratum> {
        self.strata.iter().filter(|s| s.is_singular())
    }

    pub fn regular_strata(&self) -> impl Iterator<Item = &Stratum> {
        self.strata.iter().filter(|s| !s.is_singular())
    }

    pub fn is_smooth(&self) -> bool {
        self.strata.iter().all(|s| !s.is_singular())
    }

    /// Builds the transitive closure of the order, rejecting unknown ids and cycles.
    pub fn poset(&self) -> Result<StrataPoset, String> {
        StrataPoset::new(self)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = Document {
            schema: Some(SCHEMA.to_string()),
            space: self.clone(),
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
        check_nonempty(&doc.space, "strata")?;
        Ok(doc.space)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Schema { location, message } => Error::Schema {
                location: format!("{}: {location}", path.display()),
                message,
            },
            other => other,
        })
    }
}

fn check_nonempty(space: &StratifiedSpace, location: &str) -> Result<()> {
    if space.strata.is_empty() {
        return Err(Error::schema(location, "at least one stratum is required"));
    }
    for s in &space.strata {
        if let Some(link) = &s.link {
            check_nonempty(link, &format!("{location}[{}].link.strata", s.id))?;
        }
    }
    Ok(())
}

/// Transitively closed strata order, indexed like `StratifiedSpace::strata`.
#[derive(Clone, Debug)]
pub struct StrataPoset {
    less: Vec<Vec<bool>>,
}

impl StrataPoset {
    fn new(space: &StratifiedSpace) -> Result<Self, String> {
        let n = space.strata.len();
        let mut index = BTreeMap::new();
        for (i, s) in space.strata.iter().enumerate() {
            if index.insert(s.id.as_str(), i).is_some() {
                return Err(format!("duplicate stratum id `{}`", s.id));
            }
        }
        let mut less = vec![vec![false; n]; n];
        for (lo, hi) in &space.order {
            let i = *index
                .get(lo.as_str())
                .ok_or_else(|| format!("order refers to unknown stratum `{lo}`"))?;
            let j = *index
                .get(hi.as_str())
                .ok_or_else(|| format!("order refers to unknown stratum `{hi}`"))?;
            less[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    for j in 0..n {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| less[i][i]) {
            return Err(format!(
                "order is cyclic through stratum `{}`",
                space.strata[i].id
            ));
        }
        Ok(Self { less })
    }

    pub fn len(&self) -> usize {
        self.less.len()
    }

    pub fn is_empty(&self) -> bool {
        self.less.is_empty()
    }

    /// `i < j` in the closed order.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.less[i][j]
    }

    pub fn above(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.less[i][j])
    }

    pub fn below(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.less[j][i])
    }

    /// Length of the longest chain starting at `i` and going up.
    pub fn height(&self, i: usize) -> usize {
        let mut memo = vec![None; self.len()];
        self.height_memo(i, &mut memo)
    }

    fn height_memo(&self, i: usize, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(h) = memo[i] {
            return h;
        }
        let h = (0..self.len())
            .filter(|&j| self.less[i][j])
            .map(|j| 1 + self.height_memo(j, memo))
            .max()
            .unwrap_or(0);
        memo[i] = Some(h);
        h
    }

    /// Longest chain anywhere in the poset.
    pub fn longest_chain(&self) -> usize {
        let mut memo = vec![None; self.len()];
        (0..self.len())
            .map(|i| self.height_memo(i, &mut memo))
            .max()
            .unwrap_or(0)
    }

    /// Covering pairs of the closed order.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.less[i][j] && !(0..n).any(|k| self.less[i][k] && self.less[k][j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// All chains `i_1 < ... < i_r` with `r >= 1` among the indices accepted by `keep`.
    pub fn chains(&self, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
        let nodes: Vec<usize> = (0..self.len()).filter(|&i| keep(i)).collect();
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = nodes.iter().map(|&i| vec![i]).collect();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().unwrap();
            for &j in &nodes {
                if self.less[last][j] {
                    let mut next = chain.clone();
                    next.push(j);
                    stack.push(next);
                }
            }
            out.push(chain);
        }
        out.sort();
        out
    }
}

/// Checks whose failure makes the poset itself meaningless; `depth` needs these.
const STRUCTURAL: &[&str] = &[
    "nonempty",
    "partial-order",
    "frontier",
    "link-dimension",
    "link-depth",
    "links-valid",
];

/// Runs every combinatorial axiom check and reports each with a witness on failure.
pub fn validate(space: &StratifiedSpace) -> ValidationReport {
    let mut report = ValidationReport::new(format!("stratified space `{}`", space.name));
    let n = space.total_dim;

    if space.strata.is_empty() {
        report.fail("nonempty", "no strata");
        return report;
    }
    report.pass("nonempty");

    let poset = match space.poset() {
        Ok(p) => {
            report.pass("partial-order");
            p
        }
        Err(witness) => {
            report.fail("partial-order", witness);
            return report;
        }
    };

    // Axiom i): closure relations only go from lower to higher dimensional strata.
    let mut witnesses = Vec::new();
    for i in 0..poset.len() {
        for j in poset.above(i) {
            let (a, b) = (&space.strata[i], &space.strata[j]);
            if a.dim >= b.dim {
                witnesses.push(format!(
                    "{} (dim {}) < {} (dim {})",
                    a.id, a.dim, b.id, b.dim
                ));
            }
        }
    }
    report.record("frontier", witnesses);

    // Axiom vi): one dense regular stratum of top dimension, no codimension-one strata.
    let regular: Vec<usize> = (0..space.strata.len())
        .filter(|&i| !space.strata[i].is_singular())
        .collect();
    let mut witnesses = Vec::new();
    if regular.len() != 1 {
        witnesses.push(format!("{} regular strata, expected 1", regular.len()));
    }
    for &i in &regular {
        if space.strata[i].dim != n {
            witnesses.push(format!(
                "regular stratum {} has dim {} != {n}",
                space.strata[i].id, space.strata[i].dim
            ));
        }
    }
    for s in space.singular_strata() {
        if s.dim + 2 > n {
            witnesses.push(format!(
                "singular stratum {} has codimension {}",
                s.id,
                n as i64 - s.dim as i64
            ));
        }
    }
    report.record("pseudomanifold", witnesses);

    let mut witnesses = Vec::new();
    if let [r] = regular.as_slice() {
        for (i, s) in space.strata.iter().enumerate() {
            if s.is_singular() && !poset.lt(i, *r) {
                witnesses.push(format!("{} is not in the closure of the regular stratum", s.id));
            }
        }
    }
    report.record("density", witnesses);

    let mut dim_witnesses = Vec::new();
    let mut link_reports = Vec::new();
    for s in space.singular_strata() {
        let link = s.link.as_deref().unwrap();
        if link.total_dim + s.dim + 1 != n {
            dim_witnesses.push(format!(
                "link of {} has dim {}, expected {}",
                s.id,
                link.total_dim,
                n as i64 - s.dim as i64 - 1
            ));
        }
        link_reports.push((s.id.clone(), validate(link)));
    }
    report.record("link-dimension", dim_witnesses);

    let mut invalid = Vec::new();
    for (id, r) in &link_reports {
        if !r.passed() {
            invalid.push(format!("link of {id}: {}", r.failure_summary()));
        }
    }
    report.record("links-valid", invalid);

    let space_depth = poset.longest_chain();
    let mut witnesses = Vec::new();
    for s in &space.strata {
        if let Some(link) = &s.link {
            if let Ok(lp) = link.poset() {
                let link_depth = lp.longest_chain();
                if link_depth >= space_depth {
                    witnesses.push(format!(
                        "link of {} has depth {link_depth} >= {space_depth}",
                        s.id
                    ));
                }
            }
        }
    }
    report.record("link-depth", witnesses);

    // Axiom iv) analogue: every stratum Z > Y meets the link of Y in a stratum of
    // dimension dim Z - dim Y - 1 carrying the same link as Z.
    let mut witnesses = Vec::new();
    for (i, y) in space.strata.iter().enumerate() {
        let Some(link) = &y.link else { continue };
        if let Ok(lp) = link.poset() {
            let link_depth = lp.longest_chain();
            if poset.height(i) != link_depth + 1 {
                witnesses.push(format!(
                    "{} has chains of length {} above it but its link has depth {link_depth}",
                    y.id,
                    poset.height(i)
                ));
            }
        }
        for j in poset.above(i) {
            let z = &space.strata[j];
            let want = z.dim as i64 - y.dim as i64 - 1;
            let found = link.strata.iter().any(|s| {
                s.dim as i64 == want
                    && match (&s.link, &z.link) {
                        (None, None) => true,
                        (Some(a), Some(b)) => canonical_form(a) == canonical_form(b),
                        _ => false,
                    }
            });
            if !found {
                witnesses.push(format!(
                    "link of {} has no stratum matching {} (dim {want})",
                    y.id, z.id
                ));
            }
        }
    }
    report.record("link-consistency", witnesses);

    report.note(
        "local-triviality",
        "assumed: links are attached as global products, transition maps are not checked",
    );
    report
}

/// Depth of the space: the longest chain of strata.
///
/// Requires the structural checks of [`validate`]; the pseudomanifold axiom is not
/// required so that `cone(point)` keeps its depth.
pub fn depth(space: &StratifiedSpace) -> Result<usize> {
    let report = validate(space);
    let structural_ok = report
        .checks
        .iter()
        .filter(|c| STRUCTURAL.contains(&c.name.as_str()))
        .all(|c| c.passed);
    if !structural_ok || report.check("partial-order").is_none() {
        return Err(Error::InvalidSpace {
            name: space.name.clone(),
            report,
        });
    }
    Ok(space.poset().expect("checked above").longest_chain())
}

/// The depth of every stratum (longest chain going up from it), keyed by id.
pub fn stratum_depths(space: &StratifiedSpace) -> Result<BTreeMap<String, usize>> {
    let poset = space.poset().map_err(|w| {
        let mut report = ValidationReport::new(format!("stratified space `{}`", space.name));
        report.fail("partial-order", w);
        Error::InvalidSpace {
            name: space.name.clone(),
            report,
        }
    })?;
    Ok(space
        .strata
        .iter()
        .enumerate()
        .map(|(i, s)| (s.id.clone(), poset.height(i)))
        .collect())
}

/// The cone `C(X)`: a new vertex whose link is `X`, and an open cone over each
/// stratum of `X`.
pub fn cone(space: &StratifiedSpace) -> StratifiedSpace {
    let vertex = "v".to_string();
    let rename = |id: &str| format!("c:{id}");
    let mut strata = vec![Stratum::singular(vertex.clone(), 0, space.clone())];
    let mut order = Vec::new();
    for s in &space.strata {
        strata.push(Stratum {
            id: rename(&s.id),
            dim: s.dim + 1,
            link: s.link.clone(),
        });
        order.push((vertex.clone(), rename(&s.id)));
    }
    for (lo, hi) in &space.order {
        order.push((rename(lo), rename(hi)));
    }
    let order = hasse_order(&strata_ids(&strata), order);
    StratifiedSpace {
        name: format!("C({})", space.name),
        total_dim: space.total_dim + 1,
        strata,
        order,
    }
}

/// The suspension `ΣX`: two cone points glued along `X × (0, 1)`.
pub fn suspension(space: &StratifiedSpace) -> StratifiedSpace {
    let rename = |id: &str| format!("x:{id}");
    let poles = ["n".to_string(), "s".to_string()];
    let mut strata: Vec<Stratum> = poles
        .iter()
        .map(|p| Stratum::singular(p.clone(), 0, space.clone()))
        .collect();
    let mut order = Vec::new();
    for s in &space.strata {
        strata.push(Stratum {
            id: rename(&s.id),
            dim: s.dim + 1,
            link: s.link.clone(),
        });
        for p in &poles {
            order.push((p.clone(), rename(&s.id)));
        }
    }
    for (lo, hi) in &space.order {
        order.push((rename(lo), rename(hi)));
    }
    let order = hasse_order(&strata_ids(&strata), order);
    StratifiedSpace {
        name: format!("Susp({})", space.name),
        total_dim: space.total_dim + 1,
        strata,
        order,
    }
}

fn strata_ids(strata: &[Stratum]) -> Vec<String> {
    strata.iter().map(|s| s.id.clone()).collect()
}

/// Reduces an acyclic relation on `ids` to its covering pairs, in a stable order.
pub(crate) fn hasse_order(ids: &[String], pairs: Vec<(String, String)>) -> Vec<(String, String)> {
    let probe = StratifiedSpace {
        name: String::new(),
        total_dim: 0,
        strata: ids.iter().map(|id| Stratum::regular(id.clone(), 0)).collect(),
        order: pairs.clone(),
    };
    match probe.poset() {
        Ok(p) => {
            let mut out: Vec<(String, String)> = p
                .hasse()
                .into_iter()
                .map(|(i, j)| (ids[i].clone(), ids[j].clone()))
                .collect();
            out.sort();
            out
        }
        Err(_) => {
            let mut set: Vec<_> = pairs.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
            set.sort();
            set
        }
    }
}

/// Named spaces used throughout the tests, the CLI and the documentation.
pub mod library {
    use super::*;

    pub fn point() -> StratifiedSpace {
        StratifiedSpace::manifold("pt", 0)
    }

    pub fn circle() -> StratifiedSpace {
        StratifiedSpace::manifold("S1", 1)
    }

    pub fn sphere2() -> StratifiedSpace {
        StratifiedSpace::manifold("S2", 2)
    }

    pub fn torus2() -> StratifiedSpace {
        StratifiedSpace::manifold("T2", 2)
    }

    pub fn cone_circle() -> StratifiedSpace {
        cone(&circle())
    }

    pub fn cone_sphere2() -> StratifiedSpace {
        cone(&sphere2())
    }

    pub fn cone_torus2() -> StratifiedSpace {
        cone(&torus2())
    }

    pub fn susp_circle() -> StratifiedSpace {
        suspension(&circle())
    }

    pub fn susp_sphere2() -> StratifiedSpace {
        suspension(&sphere2())
    }

    pub fn susp_torus2() -> StratifiedSpace {
        suspension(&torus2())
    }

    pub fn cone_susp_circle() -> StratifiedSpace {
        cone(&suspension(&circle()))
    }

    /// Every named space, keyed by a short file-friendly name.
    pub fn all() -> Vec<(&'static str, StratifiedSpace)> {
        vec![
            ("S1", circle()),
            ("S2", sphere2()),
            ("T2", torus2()),
            ("C_S1", cone_circle()),
            ("C_S2", cone_sphere2()),
            ("C_T2", cone_torus2()),
            ("Susp_S1", susp_circle()),
            ("Susp_S2", susp_sphere2()),
            ("Susp_T2", susp_torus2()),
            ("C_Susp_S1", cone_susp_circle()),
        ]
    }
}
