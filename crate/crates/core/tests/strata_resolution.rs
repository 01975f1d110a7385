use proptest::prelude::*;
use wittkit::resolution::{blowdown, canonical_form, check_ifs, iso_check, resolve, CornerComplex};
use wittkit::strata::{self, cone, depth, library, suspension, validate, StratifiedSpace};

fn space() -> impl Strategy<Value = StratifiedSpace> {
    let leaf = prop_oneof![
        Just(library::circle()),
        Just(library::sphere2()),
        Just(library::torus2()),
    ];
    leaf.prop_recursive(3, 8, 1, |inner| {
        prop_oneof![inner.clone().prop_map(|x| cone(&x)), inner.prop_map(|x| suspension(&x))]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn built_spaces_validate(x in space()) {
        let r = validate(&x);
        prop_assert!(r.passed(), "{}", r.failure_summary());
    }

    #[test]
    fn cone_and_suspension_raise_depth_by_one(x in space()) {
        let d = depth(&x).unwrap();
        prop_assert_eq!(depth(&cone(&x)).unwrap(), d + 1);
        prop_assert_eq!(depth(&suspension(&x)).unwrap(), d + 1);
        prop_assert_eq!(cone(&x).total_dim, x.total_dim + 1);
    }

    #[test]
    fn json_round_trip(x in space()) {
        let back = StratifiedSpace::from_json(&x.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn resolution_round_trip(x in space()) {
        let cc = resolve(&x).unwrap();
        let r = check_ifs(&cc);
        prop_assert!(r.passed(), "{}", r.failure_summary());
        prop_assert_eq!(cc.hypersurfaces.len(), x.singular_strata().count());
        prop_assert!(cc.max_corner_codim() <= depth(&x).unwrap());
        let back = blowdown(&cc).unwrap();
        prop_assert!(iso_check(&back, &x));
        let cc2 = CornerComplex::from_json(&cc.to_json().unwrap()).unwrap();
        prop_assert_eq!(cc2, cc);
    }

    #[test]
    fn canonical_form_ignores_stratum_order(x in space(), seed in any::<u64>()) {
        let mut y = x.clone();
        let n = y.strata.len();
        y.strata.rotate_left((seed as usize) % n.max(1));
        y.order.reverse();
        prop_assert_eq!(canonical_form(&y), canonical_form(&x));
    }
}

#[test]
fn iso_check_separates_the_library() {
    let all = library::all();
    for (i, (_, a)) in all.iter().enumerate() {
        for (j, (_, b)) in all.iter().enumerate() {
            assert_eq!(iso_check(a, b), i == j, "{} vs {}", a.name, b.name);
        }
    }
}

#[test]
fn corner_order_violation_is_reported() {
    let cc = resolve(&library::cone_susp_circle()).unwrap();
    assert_eq!(cc.max_corner_codim(), 2);
    let mut bad = cc.clone();
    for pair in bad.order.iter_mut() {
        std::mem::swap(&mut pair.0, &mut pair.1);
    }
    assert!(!check_ifs(&bad).passed());
    assert!(blowdown(&bad).is_err());
}

#[test]
fn equal_fiber_dimensions_break_the_corner_order() {
    let mut cc = resolve(&library::cone_susp_circle()).unwrap();
    let d = cc.hypersurfaces[0].fiber_dim;
    for h in cc.hypersurfaces.iter_mut() {
        h.fiber_dim = d;
    }
    let r = check_ifs(&cc);
    assert!(!r.passed());
}

#[test]
fn depth_needs_a_structurally_valid_space() {
    let mut x = library::cone_torus2();
    x.strata[0].dim = 5;
    assert!(depth(&x).is_err());
    assert!(!strata::validate(&x).passed());
}
