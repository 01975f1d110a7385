//! Resolution of stratified spaces to manifolds with corners.
//!
//! Each singular stratum `Y` becomes a boundary hypersurface `H_Y` fibred over the
//! resolved closure of `Y` with fibre the resolved link. Strata are resolved
//! directly, deepest first. Boundary defining functions appear only as weight
//! slots, one per hypersurface.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::strata::{self, hasse_order, StratifiedSpace, Stratum};

pub const SCHEMA: &str = "cornercx.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypersurface {
    pub id: String,
    /// Resolved link: the typical fibre of `H → B`.
    pub fiber: Box<CornerComplex>,
    pub fiber_dim: usize,
    pub base_dim: usize,
    /// Whether the base is a closed manifold (the source stratum is closed).
    pub base_closed: bool,
    pub source_stratum: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerComplex {
    pub name: String,
    pub total_dim: usize,
    /// Id of the stratum whose closure is the whole resolved manifold.
    pub interior_id: String,
    #[serde(default)]
    pub hypersurfaces: Vec<Hypersurface>,
    /// Corners of codimension at least two, as sets of hypersurface ids.
    #[serde(default)]
    pub corners: Vec<Vec<String>>,
    /// Pairs `[lower, upper]` of intersecting hypersurfaces, lower = smaller fibre.
    #[serde(default)]
    pub order: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct Document {
    #[serde(default)]
    schema: Option<String>,
    #[serde(flatten)]
    complex: CornerComplex,
}

impl CornerComplex {
    pub fn hypersurface(&self, id: &str) -> Option<&Hypersurface> {
        self.hypersurfaces.iter().find(|h| h.id == id)
    }

    /// Codimension of the deepest corner: 0 without boundary, 1 with boundary
    /// but no corners.
    pub fn max_corner_codim(&self) -> usize {
        let listed = self.corners.iter().map(Vec::len).max().unwrap_or(0);
        listed.max(usize::from(!self.hypersurfaces.is_empty()))
    }

    /// Exponent vector of the total boundary defining function `ρ`.
    pub fn rho(&self) -> BTreeMap<String, i64> {
        self.hypersurfaces.iter().map(|h| (h.id.clone(), 1)).collect()
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
        Ok(doc.complex)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Closed order on hypersurfaces as index pairs, or a witness if it is cyclic
    /// or refers to unknown ids.
    fn closed_order(&self) -> Result<Vec<Vec<bool>>, String> {
        let probe = StratifiedSpace {
            name: self.name.clone(),
            total_dim: self.total_dim,
            strata: self
                .hypersurfaces
                .iter()
                .map(|h| Stratum::regular(h.id.clone(), 0))
                .collect(),
            order: self.order.clone(),
        };
        let poset = probe.poset()?;
        let n = self.hypersurfaces.len();
        Ok((0..n)
            .map(|i| (0..n).map(|j| poset.lt(i, j)).collect())
            .collect())
    }
}

/// Resolves a valid stratified space.
pub fn resolve(space: &StratifiedSpace) -> Result<CornerComplex> {
    let report = strata::validate(space);
    if !report.passed() {
        return Err(Error::InvalidSpace {
            name: space.name.clone(),
            report,
        });
    }
    Ok(resolve_valid(space))
}

fn resolve_valid(space: &StratifiedSpace) -> CornerComplex {
    let poset = space.poset().expect("validated");
    let interior_id = space
        .regular_strata()
        .next()
        .map(|s| s.id.clone())
        .expect("validated");
    let h_id = |i: usize| format!("H:{}", space.strata[i].id);

    let mut singular: Vec<usize> = (0..space.strata.len())
        .filter(|&i| space.strata[i].is_singular())
        .collect();
    // Deepest first: a larger link means a larger fibre.
    singular.sort_by(|&i, &j| {
        poset
            .height(j)
            .cmp(&poset.height(i))
            .then_with(|| space.strata[i].id.cmp(&space.strata[j].id))
    });

    let hypersurfaces = singular
        .iter()
        .map(|&i| {
            let s = &space.strata[i];
            let link = s.link.as_deref().unwrap();
            Hypersurface {
                id: h_id(i),
                fiber: Box::new(resolve_valid(link)),
                fiber_dim: link.total_dim,
                base_dim: s.dim,
                base_closed: poset.below(i).next().is_none(),
                source_stratum: s.id.clone(),
            }
        })
        .collect();

    // Y < Y' puts H_Y' below H_Y: the deeper stratum has the larger fibre.
    let mut pairs = Vec::new();
    for &i in &singular {
        for &j in &singular {
            if poset.lt(i, j) {
                pairs.push((h_id(j), h_id(i)));
            }
        }
    }
    let ids: Vec<String> = singular.iter().map(|&i| h_id(i)).collect();
    let order = hasse_order(&ids, pairs);

    let is_singular = |i: usize| space.strata[i].is_singular();
    let mut corners: Vec<Vec<String>> = poset
        .chains(is_singular)
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|c| c.into_iter().rev().map(h_id).collect())
        .collect();
    corners.sort();

    CornerComplex {
        name: space.name.clone(),
        total_dim: space.total_dim,
        interior_id,
        hypersurfaces,
        corners,
        order,
    }
}

/// Blows down every boundary fibre, recovering the stratified space.
pub fn blowdown(cc: &CornerComplex) -> Result<StratifiedSpace> {
    let report = check_ifs(cc);
    if !report.passed() {
        return Err(Error::InvalidCornerComplex {
            name: cc.name.clone(),
            report,
        });
    }
    Ok(blowdown_unchecked(cc))
}

fn blowdown_unchecked(cc: &CornerComplex) -> StratifiedSpace {
    let mut strata = vec![Stratum::regular(cc.interior_id.clone(), cc.total_dim)];
    let mut pairs = Vec::new();
    let source: BTreeMap<&str, &str> = cc
        .hypersurfaces
        .iter()
        .map(|h| (h.id.as_str(), h.source_stratum.as_str()))
        .collect();
    for h in &cc.hypersurfaces {
        strata.push(Stratum::singular(
            h.source_stratum.clone(),
            h.base_dim,
            blowdown_unchecked(&h.fiber),
        ));
        pairs.push((h.source_stratum.clone(), cc.interior_id.clone()));
    }
    for (lo, hi) in &cc.order {
        if let (Some(lo), Some(hi)) = (source.get(lo.as_str()), source.get(hi.as_str())) {
            pairs.push((hi.to_string(), lo.to_string()));
        }
    }
    let ids: Vec<String> = strata.iter().map(|s| s.id.clone()).collect();
    StratifiedSpace {
        name: cc.name.clone(),
        total_dim: cc.total_dim,
        strata,
        order: hasse_order(&ids, pairs),
    }
}

/// Checks the iterated fibration conditions and their immediate consequences.
pub fn check_ifs(cc: &CornerComplex) -> ValidationReport {
    let mut report = ValidationReport::new(format!("corner complex `{}`", cc.name));
    let hs = &cc.hypersurfaces;
    let index: BTreeMap<&str, usize> = hs.iter().enumerate().map(|(i, h)| (h.id.as_str(), i)).collect();

    let mut witnesses = Vec::new();
    if index.len() != hs.len() {
        witnesses.push("duplicate hypersurface ids".to_string());
    }
    for corner in &cc.corners {
        for id in corner {
            if !index.contains_key(id.as_str()) {
                witnesses.push(format!("corner refers to unknown hypersurface `{id}`"));
            }
        }
    }
    report.record("ids", witnesses);
    if !report.passed() {
        return report;
    }

    let less = match cc.closed_order() {
        Ok(l) => {
            report.pass("partial-order");
            l
        }
        Err(w) => {
            report.fail("partial-order", w);
            return report;
        }
    };

    let mut witnesses = Vec::new();
    for h in hs {
        if h.fiber_dim + h.base_dim + 1 != cc.total_dim {
            witnesses.push(format!(
                "{}: fibre {} + base {} + 1 != {}",
                h.id, h.fiber_dim, h.base_dim, cc.total_dim
            ));
        }
        if h.fiber.total_dim != h.fiber_dim {
            witnesses.push(format!(
                "{}: fibre complex has dim {} but fiber_dim is {}",
                h.id, h.fiber.total_dim, h.fiber_dim
            ));
        }
    }
    report.record("dimension-balance", witnesses);

    // Condition b): hypersurfaces meeting in a corner have distinct fibre dimensions.
    let mut witnesses = Vec::new();
    for corner in &cc.corners {
        let dims: BTreeSet<usize> = corner.iter().map(|id| hs[index[id.as_str()]].fiber_dim).collect();
        if dims.len() != corner.len() {
            witnesses.push(format!("corner {{{}}} repeats a fibre dimension", corner.join(", ")));
        }
    }
    report.record("distinct-fiber-dims", witnesses);

    let mut witnesses = Vec::new();
    for (i, row) in less.iter().enumerate() {
        for (j, &lt) in row.iter().enumerate() {
            if lt && hs[i].fiber_dim >= hs[j].fiber_dim {
                witnesses.push(format!(
                    "{} < {} but fibre dims are {} and {}",
                    hs[i].id, hs[j].id, hs[i].fiber_dim, hs[j].fiber_dim
                ));
            }
        }
    }
    report.record("order-law", witnesses);

    // Every corner, read in fibre-dimension order, must be a chain of the order.
    let mut witnesses = Vec::new();
    for corner in &cc.corners {
        let mut members: Vec<usize> = corner.iter().map(|id| index[id.as_str()]).collect();
        members.sort_by_key(|&i| hs[i].fiber_dim);
        if members.windows(2).any(|w| !less[w[0]][w[1]]) {
            witnesses.push(format!("corner {{{}}} is not an ordered chain", corner.join(", ")));
        }
    }
    report.record("corner-order", witnesses);

    let listed: BTreeSet<BTreeSet<usize>> = cc
        .corners
        .iter()
        .map(|c| c.iter().map(|id| index[id.as_str()]).collect())
        .collect();
    let chains: BTreeSet<BTreeSet<usize>> = chains_of(&less)
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|c| c.into_iter().collect())
        .collect();
    let mut witnesses = Vec::new();
    if listed.len() != cc.corners.len() {
        witnesses.push("a corner is listed twice".to_string());
    }
    let name = |set: &BTreeSet<usize>| {
        set.iter().map(|&i| hs[i].id.as_str()).collect::<Vec<_>>().join(", ")
    };
    for c in chains.difference(&listed) {
        witnesses.push(format!("chain {{{}}} has no corner", name(c)));
    }
    for c in listed.difference(&chains) {
        witnesses.push(format!("corner {{{}}} is not a chain", name(c)));
    }
    report.record("corner-chains", witnesses);

    // Condition c): the smaller fibre sits as a boundary fibre of the larger one.
    let canon: Vec<String> = hs.iter().map(|h| fiber_canonical(&h.fiber)).collect();
    let mut witnesses = Vec::new();
    for i in 0..hs.len() {
        for j in 0..hs.len() {
            if !less[i][j] {
                continue;
            }
            let nested = hs[j].fiber.hypersurfaces.iter().any(|g| {
                g.fiber_dim == hs[i].fiber_dim && fiber_canonical(&g.fiber) == canon[i]
            });
            if !nested {
                witnesses.push(format!(
                    "fibre of {} is not a boundary fibre of the fibre of {}",
                    hs[i].id, hs[j].id
                ));
            }
        }
    }
    report.record("nesting", witnesses);

    let mut witnesses = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        let minimal = (0..hs.len()).all(|k| !less[k][i]);
        if minimal && !h.fiber.hypersurfaces.is_empty() {
            witnesses.push(format!("{} is minimal but its fibre has boundary", h.id));
        }
    }
    report.record("closed-fibers", witnesses);

    let mut witnesses = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        let maximal = (0..hs.len()).all(|k| !less[i][k]);
        if maximal != h.base_closed {
            witnesses.push(if maximal {
                format!("{} is maximal but its base is not closed", h.id)
            } else {
                format!("{} meets a larger fibre but its base is marked closed", h.id)
            });
        }
    }
    report.record("base-closure", witnesses);

    let mut witnesses = Vec::new();
    for h in hs {
        let sub = check_ifs(&h.fiber);
        if !sub.passed() {
            witnesses.push(format!("fibre of {}: {}", h.id, sub.failure_summary()));
        }
    }
    report.record("fibers-valid", witnesses);

    let deepest = cc.corners.iter().map(Vec::len).max().unwrap_or(0);
    if deepest >= 3 {
        report.note(
            "higher-corners",
            format!("unchecked at depth >= 3: only pairwise nesting is tested on corners of codimension {deepest}"),
        );
    }
    report
}

fn chains_of(less: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = less.len();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        for j in 0..n {
            if less[last][j] {
                let mut next = chain.clone();
                next.push(j);
                stack.push(next);
            }
        }
        out.push(chain);
    }
    out
}

fn fiber_canonical(cc: &CornerComplex) -> String {
    canonical_form(&blowdown_unchecked(cc))
}

/// Structural isomorphism of stratified spaces by canonical-form comparison.
pub fn iso_check(a: &StratifiedSpace, b: &StratifiedSpace) -> bool {
    canonical_form(a) == canonical_form(b)
}

/// Canonical text form of a stratified space, invariant under renaming strata.
///
/// Smooth spaces are identified by dimension and name; singular spaces by their
/// labelled order, minimised over relabellings within each label class.
pub fn canonical_form(space: &StratifiedSpace) -> String {
    if space.is_smooth() && space.strata.len() == 1 {
        return format!("M{}:{}", space.total_dim, space.name);
    }
    let Ok(poset) = space.poset() else {
        return format!("invalid:{}", space.name);
    };
    let labels: Vec<String> = space
        .strata
        .iter()
        .map(|s| match &s.link {
            None => format!("R{}", s.dim),
            Some(link) => format!("S{}<{}>", s.dim, canonical_form(link)),
        })
        .collect();
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&i, &j| labels[i].cmp(&labels[j]));
    let groups: Vec<Vec<usize>> = order
        .chunk_by(|&i, &j| labels[i] == labels[j])
        .map(<[usize]>::to_vec)
        .collect();

    let mut best: Option<String> = None;
    let mut current: Vec<Vec<usize>> = groups.clone();
    permute_groups(&groups, 0, &mut current, &mut |perm: &[usize]| {
        let bits: String = perm
            .iter()
            .flat_map(|&i| perm.iter().map(move |&j| (i, j)))
            .map(|(i, j)| if poset.lt(i, j) { '1' } else { '0' })
            .collect();
        if best.as_ref().is_none_or(|b| bits < *b) {
            best = Some(bits);
        }
    });
    let sorted_labels: Vec<&str> = order.iter().map(|&i| labels[i].as_str()).collect();
    format!(
        "X{}[{}|{}]",
        space.total_dim,
        sorted_labels.join(","),
        best.unwrap_or_default()
    )
}

fn permute_groups(
    groups: &[Vec<usize>],
    g: usize,
    current: &mut Vec<Vec<usize>>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if g == groups.len() {
        let flat: Vec<usize> = current.iter().flatten().copied().collect();
        visit(&flat);
        return;
    }
    let mut items = groups[g].clone();
    heap_permutations(&mut items, groups[g].len(), &mut |perm| {
        current[g] = perm.to_vec();
        permute_groups(groups, g + 1, current, visit);
    });
}

fn heap_permutations(items: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        visit(items);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(items, k - 1, visit);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permutations(items, k - 1, visit);
}
