//! Standard filtered triangulations: circle, sphere, 7-vertex torus, and
//! cones and suspensions over filtered complexes.
//!
//! Stratum ids of cones and suspensions follow [`crate::strata::cone`] and
//! [`crate::strata::suspension`], so a triangulation of `cone(X)` can be matched
//! against the stratified space by id.

use std::collections::BTreeMap;

use super::complex::{face_closure, FilteredSimplicialComplex, FiltrationPiece, Simplex};
use crate::strata::StratifiedSpace;

/// Boundary of a triangle.
pub fn circle() -> FilteredSimplicialComplex {
    FilteredSimplicialComplex::from_facets("S1", &[vec![0, 1], vec![1, 2], vec![0, 2]])
}

/// Boundary of the tetrahedron.
pub fn sphere2() -> FilteredSimplicialComplex {
    FilteredSimplicialComplex::from_facets(
        "S2",
        &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
    )
}

/// Möbius' minimal 7-vertex torus.
pub fn torus2() -> FilteredSimplicialComplex {
    let facets: Vec<Simplex> = (0..7)
        .flat_map(|i| [[i, i + 1, i + 3], [i, i + 2, i + 3]])
        .map(|t| {
            let mut s: Simplex = t.iter().map(|v| v % 7).collect();
            s.sort_unstable();
            s
        })
        .collect();
    FilteredSimplicialComplex::from_facets("T2", &facets)
}

fn join_vertex(simplices: &[Simplex], apex: usize) -> Vec<Simplex> {
    simplices
        .iter()
        .map(|s| {
            let mut t = s.clone();
            t.push(apex);
            t
        })
        .collect()
}

/// Cone with apex stratum `v` and a stratum `c:<id>` over each stratum of `cx`.
pub fn cone(cx: &FilteredSimplicialComplex) -> FilteredSimplicialComplex {
    let apex = cx.vertex_count;
    let mut facets = cx.simplices.clone();
    facets.extend(join_vertex(&cx.simplices, apex));
    let mut filtration = vec![FiltrationPiece {
        stratum_id: "v".into(),
        dim: Some(0),
        simplices: vec![vec![apex]],
    }];
    for piece in &cx.filtration {
        let mut gen = piece.simplices.clone();
        gen.extend(join_vertex(&piece.simplices, apex));
        filtration.push(FiltrationPiece {
            stratum_id: format!("c:{}", piece.stratum_id),
            dim: Some(piece.stratum_dim() + 1),
            simplices: face_closure(&gen),
        });
    }
    FilteredSimplicialComplex {
        name: format!("C({})", cx.name),
        vertex_count: apex + 1,
        dim: Some(cx.dim() + 1),
        simplices: face_closure(&facets),
        filtration,
    }
}

/// Suspension with pole strata `n`, `s` and a stratum `x:<id>` over each stratum of `cx`.
pub fn suspension(cx: &FilteredSimplicialComplex) -> FilteredSimplicialComplex {
    let (north, south) = (cx.vertex_count, cx.vertex_count + 1);
    let mut facets = cx.simplices.clone();
    facets.extend(join_vertex(&cx.simplices, north));
    facets.extend(join_vertex(&cx.simplices, south));
    let mut filtration = vec![
        FiltrationPiece {
            stratum_id: "n".into(),
            dim: Some(0),
            simplices: vec![vec![north]],
        },
        FiltrationPiece {
            stratum_id: "s".into(),
            dim: Some(0),
            simplices: vec![vec![south]],
        },
    ];
    for piece in &cx.filtration {
        let mut gen = piece.simplices.clone();
        gen.extend(join_vertex(&piece.simplices, north));
        gen.extend(join_vertex(&piece.simplices, south));
        filtration.push(FiltrationPiece {
            stratum_id: format!("x:{}", piece.stratum_id),
            dim: Some(piece.stratum_dim() + 1),
            simplices: face_closure(&gen),
        });
    }
    FilteredSimplicialComplex {
        name: format!("Susp({})", cx.name),
        vertex_count: cx.vertex_count + 2,
        dim: Some(cx.dim() + 1),
        simplices: face_closure(&facets),
        filtration,
    }
}

/// Triangulations of the library links, keyed by the space name used in
/// [`crate::strata::library`].
pub fn by_name(name: &str) -> Option<FilteredSimplicialComplex> {
    match name {
        "S1" => Some(circle()),
        "S2" => Some(sphere2()),
        "T2" => Some(torus2()),
        _ => None,
    }
}

/// A triangulation of a space built from the library by cones and suspensions,
/// recognised by its name (`S1`, `C(X)`, `Susp(X)`, ...).
pub fn for_space_name(name: &str) -> Option<FilteredSimplicialComplex> {
    if let Some(inner) = name.strip_prefix("C(").and_then(|r| r.strip_suffix(')')) {
        return for_space_name(inner).map(|cx| cone(&cx));
    }
    if let Some(inner) = name.strip_prefix("Susp(").and_then(|r| r.strip_suffix(')')) {
        return for_space_name(inner).map(|cx| suspension(&cx));
    }
    by_name(name)
}

/// Triangulations for the even-dimensional links of `space` that
/// [`for_space_name`] recognises, keyed by stratum id.
pub fn link_triangulations(space: &StratifiedSpace) -> BTreeMap<String, FilteredSimplicialComplex> {
    space
        .singular_strata()
        .filter_map(|s| {
            let link = s.link.as_ref()?;
            if link.total_dim % 2 == 1 {
                return None;
            }
            for_space_name(&link.name).map(|cx| (s.id.clone(), cx))
        })
        .collect()
}
