mod common;

use std::collections::BTreeMap;

use common::{arb_rational, brute_force_lower_faces, q, subdivision_matches_oracle};
use num_traits::{One, Zero};
use proptest::prelude::*;

use parabolica::patchwork::{
    convex_hull, face_normal, flatten_face, level_restriction, lp, patchworking_polynomial, regular_subdivision,
    validate_inducing, Lifting, PatchworkError, Pt, Subdivision,
};
use parabolica::poly::{parse_param, parse_poly, LatticeSet, Poly, Rational, SparsePoly};

fn lifting(pts: &[(i64, i64, i64)]) -> Lifting {
    Lifting::new(pts.iter().map(|&(i, j, v)| ((i, j), v)).collect()).unwrap()
}

/// `max(0, i + j - 5)` on the support of `x^2 y^2 (1 + x + y + y^2)`.
fn example_lifting() -> Lifting {
    let pts = [(2, 2), (3, 2), (2, 3), (2, 4)];
    Lifting::new(pts.iter().map(|&(i, j)| ((i, j), (i + j - 5).max(0))).collect()).unwrap()
}

fn example_f() -> SparsePoly {
    parse_poly("x^2*y^2*(1+x+y+y^2)").unwrap()
}

#[test]
fn example_family_end_to_end() {
    let lift = example_lifting();
    let sub = regular_subdivision(&lift).unwrap();
    assert_eq!(sub.vertex_sets(), vec![vec![(2, 2), (3, 2), (2, 3)], vec![(2, 3), (3, 2), (2, 4)]]);

    let ft = patchworking_polynomial(&example_f(), &lift).unwrap();
    assert_eq!(ft.to_string(), "x^2*y^2*(1+x+y+t*y^2)");

    let n0 = face_normal(&sub, 0).unwrap();
    let n1 = face_normal(&sub, 1).unwrap();
    assert_eq!((n0.alpha, n0.beta, n0.level), (0, 0, 0));
    assert_eq!((n1.alpha, n1.beta), (-1, -1));
    // (3,2) lies on the face: -3 - 2 + 0
    assert_eq!(n1.level, -5);

    let (flat0, tile0) = flatten_face(&ft, &sub, 0).unwrap();
    assert_eq!(flat0, ft);
    assert_eq!(tile0, parse_poly("x^2*y^2*(1+x+y)").unwrap());
    let (_, tile1) = flatten_face(&ft, &sub, 1).unwrap();
    assert_eq!(tile1, parse_poly("x^2*y^2*(x+y+y^2)").unwrap());
    for k in 0..2 {
        let (_, tile) = flatten_face(&ft, &sub, k).unwrap();
        assert_eq!(tile, example_f().restrict(&sub.faces[k].mask()));
    }

    assert_eq!(level_restriction(&ft, &lift, 0), parse_param("x^2*y^2*(1+x+y)").unwrap());
    assert_eq!(level_restriction(&ft, &lift, 1), parse_param("t*x^2*y^4").unwrap());
    assert!(level_restriction(&ft, &lift, 2).is_zero());
}

#[test]
fn inducing_check() {
    let lift = example_lifting();
    let tau = Subdivision::from_polygons(&[vec![(2, 2), (3, 2), (2, 3)], vec![(3, 2), (2, 3), (2, 4)]]);
    assert!(validate_inducing(&lift, &tau));
    let whole = Subdivision::from_polygons(&[vec![(2, 2), (3, 2), (2, 3), (2, 4)]]);
    assert!(!validate_inducing(&lift, &whole));
    let flat = lifting(&[(2, 2, 0), (3, 2, 0), (2, 3, 0), (2, 4, 0)]);
    assert!(validate_inducing(&flat, &whole));
    assert!(!validate_inducing(&flat, &tau));
}

#[test]
fn unit_square_both_diagonals() {
    let a = regular_subdivision(&lifting(&[(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 1)])).unwrap();
    assert_eq!(a.faces.len(), 2);
    assert!(a.faces.iter().all(|f| f.vertices.len() == 3));
    let b = regular_subdivision(&lifting(&[(0, 0, 0), (1, 0, 1), (0, 1, 0), (1, 1, 0)])).unwrap();
    assert_ne!(a.vertex_sets(), b.vertex_sets());
    let c = regular_subdivision(&lifting(&[(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])).unwrap();
    assert_eq!(c.faces.len(), 1);
    assert_eq!(c.faces[0].vertices.len(), 4);
}

#[test]
fn raised_interior_point_is_not_a_vertex() {
    let lift = lifting(&[(0, 0, 0), (2, 0, 0), (0, 2, 0), (1, 1, 0), (1, 0, 5)]);
    let sub = regular_subdivision(&lift).unwrap();
    assert_eq!(sub.vertex_sets(), vec![vec![(0, 0), (2, 0), (0, 2)]]);
    assert!(!sub.faces[0].points.contains(&(1, 0)));
    assert!(sub.faces[0].points.contains(&(1, 1)));
}

#[test]
fn errors() {
    assert!(matches!(
        Lifting::new([((0, 0), -1)].into_iter().collect()),
        Err(PatchworkError::NegativeLift(0, 0))
    ));
    let line = lifting(&[(0, 0, 0), (1, 1, 0), (2, 2, 3)]);
    assert_eq!(regular_subdivision(&line), Err(PatchworkError::Degenerate));
    let small = lifting(&[(2, 2, 0), (3, 2, 0), (2, 3, 0)]);
    assert_eq!(
        patchworking_polynomial(&example_f(), &small),
        Err(PatchworkError::NotCovered(2, 4))
    );
    let sub = regular_subdivision(&small).unwrap();
    assert_eq!(face_normal(&sub, 3), Err(PatchworkError::NoSuchFace(3)));
    let claimed = Subdivision::from_polygons(&[vec![(2, 2), (3, 2), (2, 3)]]);
    assert_eq!(face_normal(&claimed, 0), Err(PatchworkError::NonIntegralNormal(0)));
}

#[test]
fn non_integral_normal_is_reported() {
    // plane through (0,0,0), (2,0,1), (0,2,1) has slope 1/2
    let lift = lifting(&[(0, 0, 0), (2, 0, 1), (0, 2, 1)]);
    let sub = regular_subdivision(&lift).unwrap();
    assert_eq!(face_normal(&sub, 0), Err(PatchworkError::NonIntegralNormal(0)));
}

#[test]
fn csv_round_trip() {
    let lift = example_lifting();
    assert_eq!(Lifting::from_csv(&lift.to_csv()).unwrap(), lift);
    assert_eq!(lift.to_csv(), "i,j,lambda\n2,2,0\n2,3,0\n2,4,1\n3,2,0\n");
    assert!(matches!(Lifting::from_csv("1,1,0\n1,1,2\n"), Err(PatchworkError::Csv { line: 2, .. })));
}

#[test]
fn lp_examples() {
    let r = |v: i64| Rational::from_integer(v.into());
    // minimise x + y subject to x + 2y = 4
    let x = lp::minimize(&[r(1), r(1)], &[vec![r(1), r(2)]], &[r(4)]).unwrap();
    assert_eq!(x, vec![r(0), r(2)]);
    assert!(lp::minimize(&[r(1)], &[vec![r(1)]], &[r(-1)]).is_none());
    let s = lp::strictly_feasible(&[vec![r(1), r(-1)], vec![r(0), r(1)]]).unwrap();
    assert!(&s[0] - &s[1] >= r(1) && s[1] >= r(1));
    assert!(lp::strictly_feasible(&[vec![r(1)], vec![r(-1)]]).is_none());
}

#[test]
fn oracle_sanity() {
    let faces = brute_force_lower_faces(&[((0, 0), 0), ((1, 0), 0), ((0, 1), 0), ((1, 1), 1)]);
    assert_eq!(faces, vec![vec![(0, 0), (0, 1), (1, 0)], vec![(0, 1), (1, 0), (1, 1)]]);
}

fn arb_lifting() -> impl Strategy<Value = Vec<(Pt, i64)>> {
    prop::collection::vec(((0i64..=6, 0i64..=6), 0i64..=12), 3..=25).prop_map(|v| {
        let m: BTreeMap<Pt, i64> = v.into_iter().collect();
        m.into_iter().collect()
    })
}

fn double_area(poly: &[Pt]) -> i64 {
    let n = poly.len();
    (0..n)
        .map(|k| poly[k].0 * poly[(k + 1) % n].1 - poly[(k + 1) % n].0 * poly[k].1)
        .sum::<i64>()
        .abs()
}

fn poly_on(pts: &[(Pt, i64)], coeffs: &[Rational]) -> SparsePoly {
    Poly::from_terms(
        pts.iter()
            .zip(coeffs.iter().cycle())
            .map(|((p, _), c)| (p.0 as u32, p.1 as u32, c.clone())),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn subdivision_matches_brute_force(l in arb_lifting()) {
        prop_assert_eq!(subdivision_matches_oracle(&l), Ok(()));
    }

    #[test]
    fn faces_tile_the_hull(l in arb_lifting()) {
        let lift = Lifting::new(l.iter().copied().collect()).unwrap();
        if let Ok(sub) = regular_subdivision(&lift) {
            let pts: Vec<Pt> = l.iter().map(|p| p.0).collect();
            let total: i64 = sub.faces.iter().map(|f| f.double_area()).sum();
            prop_assert_eq!(total, double_area(&convex_hull(&pts)));
            prop_assert!(validate_inducing(&lift, &sub));
        }
    }

    #[test]
    fn affine_shift_preserves_subdivision(l in arb_lifting(), a in -3i64..=3, b in -3i64..=3) {
        let lift = Lifting::new(l.iter().copied().collect()).unwrap();
        let shifted = Lifting::new(l.iter().map(|&(p, v)| (p, v + a * p.0 + b * p.1 + 40)).collect()).unwrap();
        match (regular_subdivision(&lift), regular_subdivision(&shifted)) {
            (Ok(s1), Ok(s2)) => {
                prop_assert_eq!(s1.vertex_sets(), s2.vertex_sets());
                for k in 0..s1.faces.len() {
                    if let (Ok(n1), Ok(n2)) = (face_normal(&s1, k), face_normal(&s2, k)) {
                        prop_assert_eq!((n2.alpha, n2.beta, n2.level), (n1.alpha - a, n1.beta - b, n1.level + 40));
                    }
                }
            }
            (Err(e1), Err(e2)) => prop_assert_eq!(e1, e2),
            _ => prop_assert!(false, "only one side failed"),
        }
    }

    #[test]
    fn flattening_law(l in arb_lifting(), coeffs in prop::collection::vec(common::arb_nonzero_rational(), 1..6), t0 in arb_rational()) {
        let lift = Lifting::new(l.iter().copied().collect()).unwrap();
        let f = poly_on(&l, &coeffs);
        let ft = patchworking_polynomial(&f, &lift).unwrap();
        prop_assert_eq!(ft.specialize(&Rational::one()), f.clone());
        // every term carries t^lambda
        for (m, c) in ft.terms() {
            let lam = lift.get((m.i as i64, m.j as i64)).unwrap();
            prop_assert_eq!(c.degree(), Some(lam as u32));
        }
        if let Ok(sub) = regular_subdivision(&lift) {
            for k in 0..sub.faces.len() {
                let Ok(n) = face_normal(&sub, k) else { continue };
                let (flat, tile) = flatten_face(&ft, &sub, k).unwrap();
                prop_assert_eq!(tile, f.restrict(&sub.faces[k].mask()));
                // the flattened family is f_t(t^alpha x, t^beta y) / t^level
                if !t0.is_zero() {
                    let pw = |e: i64| common::spow(&t0, e);
                    prop_assert_eq!(
                        flat.specialize(&t0),
                        ft.specialize(&t0).scale_vars(&pw(n.alpha), &pw(n.beta)).scale(&pw(-n.level))
                    );
                }
            }
        }
        let mask: LatticeSet = l.iter().filter(|(_, v)| *v == 0).map(|(p, _)| *p).collect();
        prop_assert_eq!(level_restriction(&ft, &lift, 0).specialize(&q(1, 1)), f.restrict(&mask));
    }
}
