mod common;

use std::collections::BTreeMap;

use common::{q, spow};
use num_traits::Signed;

use parabolica::construction::{
    build_lifting, build_triangulation, construction_polynomial, default_t_sweep, lower_bound, reproduce_theorem,
    support, tile_count, triangulation_subdivision, weighted_polynomial, ConstructionError, Construction, GlueReport,
    ReproduceConfig, TileKind, TileSpec,
};
use parabolica::interval::{RatRange, Rect};
use parabolica::parabolic::build_system;
use parabolica::patchwork::{face_normal, orient, regular_subdivision, validate_inducing, Lifting, Pt};
use parabolica::poly::{parse_poly, Rational, SparsePoly};
use parabolica::solver::{isolate_tspp, SolverConfig};

fn kinds(tiles: &[TileSpec]) -> Vec<(TileKind, Pt)> {
    tiles.iter().map(|t| (t.kind, t.anchor)).collect()
}

#[test]
fn degree_six_triangulation() {
    let tiles = build_triangulation(6).unwrap();
    assert_eq!(
        kinds(&tiles),
        vec![
            (TileKind::P1, (2, 2)),
            (TileKind::P1, (3, 2)),
            (TileKind::P2, (2, 2)),
            (TileKind::P3, (2, 2)),
        ]
    );
    assert_eq!(tiles[2].polynomial, parse_poly("x^2*y^2*(x+y+y^2)").unwrap());
    assert_eq!(tiles[3].polynomial, parse_poly("x^2*y^2*(x+x*y+y^2)").unwrap());
    assert_eq!(construction_polynomial(6).len(), 6);
    assert_eq!(support(5).len(), 3);
}

#[test]
fn degree_guards() {
    assert_eq!(build_triangulation(4).unwrap_err(), ConstructionError::DegreeTooSmall(4));
    let cfg = ReproduceConfig::default();
    assert_eq!(
        Construction::new(13, &cfg).unwrap_err(),
        ConstructionError::DegreeTooLarge { d: 13, max: 12 }
    );
    let c = Construction::new(5, &cfg).unwrap();
    assert_eq!(c.glue_at(&Rational::from_integer(0.into()), &cfg).unwrap_err(), ConstructionError::ZeroParameter);
}

/// Every generic sample point of the support triangle lies in exactly one
/// tile, and no sample outside it lies in any.
fn coverage_holds(d: u32) -> bool {
    let tiles = build_triangulation(d).unwrap();
    let n = 24i64;
    let dd = d as i64;
    // samples (a/n + 1/(7n), b/n + 1/(13n)) scaled by 91n
    let scale = 91 * n;
    let up = |p: Pt| (p.0 * scale, p.1 * scale);
    let outer = [up((2, 2)), up((dd - 2, 2)), up((2, dd - 2))];
    let inside = |tri: &[Pt; 3], s: Pt| {
        let o = [orient(tri[0], tri[1], s), orient(tri[1], tri[2], s), orient(tri[2], tri[0], s)];
        (o.iter().all(|&v| v > 0) || o.iter().all(|&v| v < 0), o.contains(&0))
    };
    for a in n..=dd * n {
        for b in n..=dd * n {
            let s = (a * 91 + 13, b * 91 + 7);
            let (in_outer, on_outer) = inside(&outer, s);
            if on_outer {
                continue;
            }
            let mut hits = 0;
            for t in &tiles {
                let tri = [up(t.triangle[0]), up(t.triangle[1]), up(t.triangle[2])];
                let (hit, edge) = inside(&tri, s);
                if edge {
                    hits = usize::MAX;
                    break;
                }
                hits += hit as usize;
            }
            if hits == usize::MAX {
                continue;
            }
            if hits != in_outer as usize {
                return false;
            }
        }
    }
    true
}

#[test]
fn tiles_cover_support_triangle_once() {
    for d in 5..=10 {
        assert!(coverage_holds(d), "coverage fails at d = {d}");
    }
}

#[test]
fn bound_identity() {
    for d in 5..=40u32 {
        let tiles = build_triangulation(d).unwrap();
        let c1 = tiles.iter().filter(|t| t.kind == TileKind::P1).count() as u64;
        let c2 = tiles.iter().filter(|t| t.kind == TileKind::P2).count() as u64;
        let c3 = tiles.iter().filter(|t| t.kind == TileKind::P3).count() as u64;
        let dd = d as u64;
        assert_eq!((c1, c2, c3), (dd - 4, (dd - 5) * (dd - 4) / 2, (dd - 5) * (dd - 4) / 2));
        assert_eq!(c1 + 4 * c2, (dd - 4) * (2 * dd - 9));
        assert_eq!(lower_bound(d) as u64, (dd - 4) * (2 * dd - 9));
    }
}

#[test]
fn liftings_induce_triangulations() {
    for d in 5..=9 {
        let tiles = build_triangulation(d).unwrap();
        let tau = triangulation_subdivision(&tiles);
        let lift = build_lifting(d, &tiles).unwrap();
        assert!(validate_inducing(&lift, &tau), "d = {d}");
        let sub = regular_subdivision(&lift).unwrap();
        for k in 0..sub.faces.len() {
            face_normal(&sub, k).unwrap();
        }
        let shifted = Lifting::new(lift.iter().map(|(p, v)| (p, v + 2 * p.0 + 3 * p.1 + 1)).collect()).unwrap();
        assert!(validate_inducing(&shifted, &tau));
    }
}

#[test]
fn base_tiles_have_expected_counts() {
    let cfg = SolverConfig::default();
    for kind in [TileKind::P1, TileKind::P2, TileKind::P3] {
        let spec = TileSpec {
            kind,
            anchor: (2, 2),
            triangle: [(0, 0), (0, 0), (0, 0)],
            polynomial: kind.base_polynomial(),
        };
        let c = tile_count(&spec, &Rect::square(10), &cfg).unwrap();
        assert_eq!(c.certified, kind.expected_count(), "{}", kind.name());
        assert!(c.complete);
        assert!(c.points.iter().all(|p| p.off_axes()));
    }
}

fn count_in(f: &SparsePoly, search: &Rect) -> usize {
    let r = isolate_tspp(&build_system(f), search, &SolverConfig::default()).unwrap();
    assert!(r.is_complete());
    r.tspp_count()
}

#[test]
fn quasihomothety_preserves_counts() {
    let g = TileKind::P3.base_polynomial();
    let base = count_in(&g, &Rect::square(10));
    assert_eq!(base, 3);
    for t0 in [q(1, 2), q(2, 1), q(-1, 2)] {
        for (alpha, beta, r) in [(1, 0, 0), (0, 1, 2), (1, 1, -1), (-1, 2, 1)] {
            let h = g.scale_vars(&spow(&t0, alpha), &spow(&t0, beta)).scale(&spow(&t0, r));
            // the box [-10, 10]^2 pulled back by (x, y) -> (t0^alpha x, t0^beta y)
            let wx = q(10, 1) / spow(&t0, alpha).abs();
            let wy = q(10, 1) / spow(&t0, beta).abs();
            let search = Rect::new(RatRange::new(-wx.clone(), wx), RatRange::new(-wy.clone(), wy));
            assert_eq!(count_in(&h, &search), base, "t0 = {t0}, ({alpha}, {beta}, {r})");
        }
    }
}

fn check_report(r: &GlueReport, bound: usize) {
    assert!(r.settled, "{}", r.csv_row());
    assert_eq!(r.unresolved, 0);
    assert!(r.glued >= bound, "{}", r.csv_row());
    assert!(r.monotone_holds && r.inequality_holds);
    assert_eq!(r.points.len(), r.glued);
    for (a, b) in r.points.iter().zip(r.points.iter().skip(1)) {
        assert!(!a.overlaps(b));
    }
}

#[test]
fn reproduce_degree_five_and_six() {
    let cfg = ReproduceConfig::default();
    let t = q(1, 1024);
    let rep = reproduce_theorem(5, &[t.clone(), -t.clone()], &cfg).unwrap();
    assert_eq!(rep.bound, 1);
    assert_eq!(rep.construction.tile_sum(), 1);
    rep.reports.iter().for_each(|r| check_report(r, 1));

    let rep = reproduce_theorem(6, &[t.clone(), -t.clone()], &cfg).unwrap();
    assert_eq!(rep.bound, 6);
    assert_eq!(rep.construction.tile_sum(), 6);
    rep.reports.iter().for_each(|r| check_report(r, 6));
    assert_eq!(rep.largest_t_holding(true), Some(t.clone()));
    assert_eq!(rep.largest_t_holding(false), Some(-t));
    assert!(rep.summary_csv().starts_with(GlueReport::CSV_HEADER));
}

#[test]
fn reproduce_degree_seven() {
    let cfg = ReproduceConfig::default();
    let rep = reproduce_theorem(7, &[q(1, 4096)], &cfg).unwrap();
    assert_eq!(rep.bound, 15);
    assert_eq!(rep.construction.tile_sum(), 15);
    check_report(&rep.reports[0], 15);
}

#[test]
fn glued_enclosures_admit_zeros() {
    let cfg = ReproduceConfig::default();
    let c = Construction::new(6, &cfg).unwrap();
    let t0 = q(-1, 1024);
    let r = c.glue_at(&t0, &cfg).unwrap();
    let sys = build_system(&c.patchwork.specialize(&t0));
    for p in &r.points {
        assert!(p.off_axes());
        for g in [&sys.h, &sys.e1, &sys.e2] {
            let iv = g.eval_interval(p);
            assert!(iv.lo <= 0.0 && iv.hi >= 0.0, "{p:?}");
        }
    }
    // the enclosures pulled back into the face charts are at unit scale
    assert!(r.points.iter().any(|p| p.x.hi.abs() < q(1, 1000)));
}

#[test]
fn coefficient_overrides() {
    let mut cfg = ReproduceConfig::default();
    cfg.coefficients = BTreeMap::from([((2, 2), q(2, 1))]);
    assert_eq!(weighted_polynomial(5, &cfg.coefficients), parse_poly("x^2*y^2*(2+x+y)").unwrap());
    // 2 + x + y is 1 + x + y after x -> 2x, y -> 2y, so the count is unchanged
    let rep = reproduce_theorem(5, &[q(1, 1024)], &cfg).unwrap();
    assert_eq!(rep.construction.tiles[0].polynomial, parse_poly("x^2*y^2*(2+x+y)").unwrap());
    assert_eq!(rep.construction.tile_sum(), 1);
    check_report(&rep.reports[0], 1);
}

#[test]
fn sweep_values() {
    let ts = default_t_sweep();
    assert_eq!(ts.len(), 26);
    assert!(ts.contains(&q(1, 65536)) && ts.contains(&q(-1, 65536)));
    assert!(!ts.contains(&q(1, 8)));
}
