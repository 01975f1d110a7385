//! Intersection homology against independent oracles: ordinary homology by an
//! integer Smith normal form, and the cone and suspension formulas
//!
//! IH_i(C̄L) = IH_i(L) for i < n−1−p(n), 0 otherwise;
//! IH_i(ΣL) = IH_i(L) for i < n−1−p(n), 0 at i = n−1−p(n), IH_{i−1}(L) above.

use std::collections::BTreeMap;

use proptest::prelude::*;
use wittkit::ih::triangulations::{self, cone, suspension};
use wittkit::ih::{chain_complex, homology, ih_betti, intersection_chain_complex, FilteredSimplicialComplex, Perversity};
use wittkit::ih::witt_check;
use wittkit::strata::library;

/// Number of nonzero invariant factors of an integer matrix (its rank), by
/// Smith-normal-form elimination.
fn snf_rank(mut a: Vec<Vec<i128>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        // Find a nonzero pivot of smallest absolute value in the remaining block.
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return rank;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for i in t..rows {
                        a[i][j] -= q * a[i][t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
        rank += 1;
    }
    rank
}

/// Ordinary Betti numbers from integer boundary matrices.
fn betti_oracle(cx: &FilteredSimplicialComplex) -> Vec<usize> {
    let n = cx.dim();
    let cells: Vec<Vec<Vec<usize>>> = (0..=n).map(|d| cx.simplices_of_dim(d).into_iter().cloned().collect()).collect();
    let index: Vec<BTreeMap<Vec<usize>, usize>> = cells
        .iter()
        .map(|c| c.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    // rank of ∂_d : C_d → C_{d−1}
    let ranks: Vec<usize> = (0..=n + 1)
        .map(|d| {
            if d == 0 || d > n {
                return 0;
            }
            let mut m = vec![vec![0i128; cells[d].len()]; cells[d - 1].len()];
            for (j, s) in cells[d].iter().enumerate() {
                for k in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(k);
                    m[index[d - 1][&face]][j] = if k % 2 == 0 { 1 } else { -1 };
                }
            }
            snf_rank(m)
        })
        .collect();
    (0..=n).map(|d| cells[d].len() - ranks[d] - ranks[d + 1]).collect()
}

fn manifolds() -> Vec<FilteredSimplicialComplex> {
    vec![triangulations::circle(), triangulations::sphere2(), triangulations::torus2()]
}

fn ih(cx: &FilteredSimplicialComplex, p: &Perversity) -> Vec<usize> {
    (0..=cx.dim()).map(|d| ih_betti(cx, p, d).unwrap()).collect()
}

#[test]
fn snf_oracle_on_known_matrices() {
    assert_eq!(snf_rank(vec![vec![2, 4], vec![1, 2]]), 1);
    assert_eq!(snf_rank(vec![vec![2, 0], vec![0, 3]]), 2);
    assert_eq!(snf_rank(vec![vec![0, 0]]), 0);
}

#[test]
fn ordinary_homology_matches_smith_normal_form() {
    let mut all = manifolds();
    all.extend(manifolds().iter().map(cone));
    all.extend(manifolds().iter().map(suspension));
    for cx in &all {
        let ours: Vec<usize> = (0..=cx.dim()).map(|d| homology(cx, d).unwrap()).collect();
        assert_eq!(ours, betti_oracle(cx), "{}", cx.name);
    }
    assert_eq!(betti_oracle(&triangulations::torus2()), vec![1, 2, 1]);
}

#[test]
fn manifold_intersection_homology_is_ordinary_homology() {
    for cx in manifolds() {
        for p in [Perversity::LOWER_MIDDLE, Perversity::UPPER_MIDDLE] {
            assert_eq!(ih(&cx, &p), betti_oracle(&cx), "{}", cx.name);
        }
    }
}

fn threshold(n: usize, p: &Perversity) -> usize {
    (n as i64 - 1 - p.value(n)) as usize
}

#[test]
fn cone_formula() {
    for l in manifolds() {
        let base = betti_oracle(&l);
        let c = cone(&l);
        let n = c.dim();
        for p in [Perversity::LOWER_MIDDLE, Perversity::UPPER_MIDDLE] {
            let th = threshold(n, &p);
            let expected: Vec<usize> = (0..=n).map(|i| if i < th { base[i] } else { 0 }).collect();
            assert_eq!(ih(&c, &p), expected, "C({}) with {:?}", l.name, p.kind);
        }
    }
}

#[test]
fn suspension_formula() {
    for l in manifolds() {
        let base = betti_oracle(&l);
        let s = suspension(&l);
        let n = s.dim();
        for p in [Perversity::LOWER_MIDDLE, Perversity::UPPER_MIDDLE] {
            let th = threshold(n, &p);
            let expected: Vec<usize> = (0..=n)
                .map(|i| match i.cmp(&th) {
                    std::cmp::Ordering::Less => base[i],
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Greater => base[i - 1],
                })
                .collect();
            assert_eq!(ih(&s, &p), expected, "Susp({}) with {:?}", l.name, p.kind);
        }
    }
}

#[test]
fn intersection_chains_form_a_complex() {
    for l in manifolds() {
        for cx in [cone(&l), suspension(&l), cone(&suspension(&l))] {
            for p in [Perversity::LOWER_MIDDLE, Perversity::UPPER_MIDDLE] {
                assert!(intersection_chain_complex(&cx, &p).unwrap().is_complex());
            }
            assert!(chain_complex(&cx).unwrap().is_complex());
        }
    }
}

#[test]
fn poincare_duality_for_complementary_perversities() {
    // On a Witt-free space IH^{m̄} and IH^{n̄} are dual: b_i^{m} = b_{n−i}^{n}.
    for l in manifolds() {
        for cx in [cone(&l), suspension(&l)] {
            if cx.name.starts_with("C(") {
                continue; // a cone has boundary
            }
            let lo = ih(&cx, &Perversity::LOWER_MIDDLE);
            let hi = ih(&cx, &Perversity::UPPER_MIDDLE);
            let n = cx.dim();
            for i in 0..=n {
                assert_eq!(lo[i], hi[n - i], "{} degree {i}", cx.name);
            }
        }
    }
}

#[test]
fn witt_verdicts_for_the_library() {
    let cases = [
        (library::cone_circle(), true),
        (library::cone_sphere2(), true),
        (library::susp_sphere2(), true),
        (library::cone_torus2(), false),
        (library::susp_torus2(), false),
        (library::susp_circle(), true),
        (library::cone_susp_circle(), true),
    ];
    for (x, expected) in cases {
        let links = triangulations::link_triangulations(&x);
        for p in [Perversity::LOWER_MIDDLE, Perversity::UPPER_MIDDLE] {
            let v = witt_check(&x, &links, &p).unwrap();
            assert_eq!(v.is_witt, expected, "{}", x.name);
            assert_eq!(v.witness.is_some(), !expected);
        }
    }
}

#[test]
fn missing_triangulation_is_an_error() {
    let x = library::cone_torus2();
    assert!(witt_check(&x, &BTreeMap::new(), &Perversity::LOWER_MIDDLE).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Relabelling vertices does not change intersection homology.
    #[test]
    fn ih_is_invariant_under_relabelling(which in 0usize..3, shift in 1usize..7, upper in any::<bool>()) {
        let l = &manifolds()[which];
        let s = suspension(l);
        let n = s.vertex_count;
        let relabel = |v: usize| (v + shift) % n;
        let mut t = s.clone();
        let fix = |simplices: &mut Vec<Vec<usize>>| {
            for simplex in simplices.iter_mut() {
                for v in simplex.iter_mut() {
                    *v = relabel(*v);
                }
                simplex.sort_unstable();
            }
            simplices.sort();
        };
        fix(&mut t.simplices);
        for piece in t.filtration.iter_mut() {
            fix(&mut piece.simplices);
        }
        let p = if upper { Perversity::UPPER_MIDDLE } else { Perversity::LOWER_MIDDLE };
        prop_assert_eq!(ih(&t, &p), ih(&s, &p));
    }
}
