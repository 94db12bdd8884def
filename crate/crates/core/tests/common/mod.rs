#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

use parabolica::poly::{Poly, Rational, SparsePoly};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn arb_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

pub fn arb_nonzero_rational() -> impl Strategy<Value = Rational> {
    arb_rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// Polynomials with up to `terms` terms of total degree at most `deg`.
pub fn arb_poly(deg: u32, terms: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(((0..=deg), (0..=deg), arb_rational()), 0..=terms).prop_map(move |ts| {
        Poly::from_terms(ts.into_iter().filter(|(i, j, _)| i + j <= deg))
    })
}

pub fn random_poly<R: Rng>(rng: &mut R, deg: u32, terms: usize) -> SparsePoly {
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let i = rng.gen_range(0..=deg);
        let j = rng.gen_range(0..=deg - i);
        let n = rng.gen_range(-20i64..=20);
        let d = rng.gen_range(1i64..=6);
        out.push((i, j, q(n, d)));
    }
    Poly::from_terms(out)
}

/// A random polynomial scaled so that its largest coefficient has
/// absolute value 1.
pub fn random_direction<R: Rng>(rng: &mut R, deg: u32, terms: usize) -> SparsePoly {
    use num_traits::Signed;
    loop {
        let g = random_poly(rng, deg, terms);
        if let Some(m) = g.terms().map(|(_, c)| c.abs()).max() {
            return g.scale(&m.recip());
        }
    }
}

/// A deliberately naive polynomial map used as an independent oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct Naive(pub BTreeMap<(u32, u32), Rational>);

impl Naive {
    pub fn from(p: &SparsePoly) -> Naive {
        Naive(p.terms().map(|(m, c)| ((m.i, m.j), c.clone())).collect())
    }

    pub fn to_poly(&self) -> SparsePoly {
        Poly::from_terms(self.0.iter().map(|(&(i, j), c)| (i, j, c.clone())))
    }

    fn clean(mut self) -> Naive {
        self.0.retain(|_, c| !c.is_zero());
        self
    }

    pub fn add(&self, o: &Naive) -> Naive {
        let mut r = self.0.clone();
        for (k, c) in &o.0 {
            *r.entry(*k).or_insert_with(Rational::zero) += c;
        }
        Naive(r).clean()
    }

    pub fn neg(&self) -> Naive {
        Naive(self.0.iter().map(|(k, c)| (*k, -c.clone())).collect())
    }

    pub fn sub(&self, o: &Naive) -> Naive {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Naive) -> Naive {
        let mut r: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for ((a, b), c) in &self.0 {
            for ((e, f), d) in &o.0 {
                *r.entry((a + e, b + f)).or_insert_with(Rational::zero) += c * d;
            }
        }
        Naive(r).clean()
    }

    pub fn dx(&self) -> Naive {
        Naive(
            self.0
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * Rational::from_integer(i.into())))
                .collect(),
        )
    }

    pub fn dy(&self) -> Naive {
        Naive(
            self.0
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * Rational::from_integer(j.into())))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.0
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize))
            .sum()
    }
}

/// Lower convex hull faces of lifted points by testing every triple: a
/// plane through three lifted points supports a lower face when no point
/// lies below it. Returns the sorted vertex sets of the projected faces.
pub fn brute_force_lower_faces(lifted: &[((i64, i64), i64)]) -> Vec<Vec<(i64, i64)>> {
    use std::collections::BTreeSet;
    let n = lifted.len();
    let mut faces: BTreeSet<Vec<(i64, i64)>> = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (pa, pb, pc) = (lifted[a], lifted[b], lifted[c]);
                // plane: normal = (pb - pa) x (pc - pa)
                let u = (pb.0 .0 - pa.0 .0, pb.0 .1 - pa.0 .1, pb.1 - pa.1);
                let v = (pc.0 .0 - pa.0 .0, pc.0 .1 - pa.0 .1, pc.1 - pa.1);
                let mut nrm = (
                    (u.1 * v.2 - u.2 * v.1) as i128,
                    (u.2 * v.0 - u.0 * v.2) as i128,
                    (u.0 * v.1 - u.1 * v.0) as i128,
                );
                if nrm.2 == 0 {
                    continue;
                }
                if nrm.2 < 0 {
                    nrm = (-nrm.0, -nrm.1, -nrm.2);
                }
                let side = |p: ((i64, i64), i64)| {
                    nrm.0 * (p.0 .0 - pa.0 .0) as i128 + nrm.1 * (p.0 .1 - pa.0 .1) as i128 + nrm.2 * (p.1 - pa.1) as i128
                };
                if lifted.iter().any(|&p| side(p) < 0) {
                    continue;
                }
                let on: Vec<(i64, i64)> = lifted.iter().filter(|&&p| side(p) == 0).map(|p| p.0).collect();
                faces.insert(hull_vertices(&on));
            }
        }
    }
    faces.into_iter().collect()
}

/// Strict convex hull vertices, sorted, by an O(n^3) extremality test.
pub fn hull_vertices(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut out = Vec::new();
    'p: for &p in pts {
        // p is a vertex unless it lies in a triangle of other points or
        // strictly between two others on a segment.
        for &a in pts {
            for &b in pts {
                if a == p || b == p || a == b {
                    continue;
                }
                if cross(a, b, p) == 0 && (p.0 - a.0) * (p.0 - b.0) + (p.1 - a.1) * (p.1 - b.1) < 0 {
                    continue 'p;
                }
                for &c in pts {
                    if c == p || c == a || c == b {
                        continue;
                    }
                    let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
                    let inside = (d1 >= 0 && d2 >= 0 && d3 >= 0) || (d1 <= 0 && d2 <= 0 && d3 <= 0);
                    if inside && cross(a, b, c) != 0 {
                        continue 'p;
                    }
                }
            }
        }
        out.push(p);
    }
    out.sort();
    out.dedup();
    out
}

/// `s^e` for integer `e`.
pub fn spow(s: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(s.clone(), e as usize)
    } else {
        num_traits::pow(s.recip(), (-e) as usize)
    }
}

/// The four defining identities of the parabolic system of `f`, checked
/// against naive expansions.
pub fn check_system_invariants(f: &SparsePoly) -> Result<(), String> {
    let sys = parabolica::parabolic::build_system(f);
    let n = Naive::from(f);
    let (fxx, fxy, fyy) = (n.dx().dx(), n.dx().dy(), n.dy().dy());
    let h = fxx.mul(&fyy).sub(&fxy.mul(&fxy));
    if Naive::from(&sys.h) != h {
        return Err(format!("H mismatch for {f}"));
    }
    let (hx, hy) = (h.dx(), h.dy());
    let v = (hy.neg(), hx.clone());
    // Hess(f) * v
    let e1 = fxx.mul(&v.0).add(&fxy.mul(&v.1));
    let e2 = fxy.mul(&v.0).add(&fyy.mul(&v.1));
    if Naive::from(&sys.e1) != e1 || Naive::from(&sys.e2) != e2 {
        return Err(format!("E1/E2 mismatch for {f}"));
    }
    let two = Naive([((0, 0), q(2, 1))].into_iter().collect());
    let qf = fxx.mul(&v.0).mul(&v.0).add(&two.mul(&fxy).mul(&v.0).mul(&v.1)).add(&fyy.mul(&v.1).mul(&v.1));
    if Naive::from(&sys.c) != qf {
        return Err(format!("C != Q(-H_y, H_x) for {f}"));
    }
    let c2 = hy.neg().mul(&e1).add(&hx.mul(&e2));
    if Naive::from(&sys.c) != c2 {
        return Err(format!("C != -H_y E1 + H_x E2 for {f}"));
    }
    Ok(())
}

/// Scaling laws of `H`, `E1`, `E2` under `f -> s^r f` and under
/// `f -> f(s^alpha x, s^beta y)`.
pub fn check_scaling_laws(f: &SparsePoly, alpha: i64, beta: i64, r: i64, s: &Rational) -> Result<(), String> {
    use parabolica::parabolic::build_system;
    let base = build_system(f);
    let scaled = build_system(&f.scale(&spow(s, r)));
    if scaled.h != base.h.scale(&spow(s, 2 * r)) {
        return Err(format!("H(s^r f) for {f}, r={r}, s={s}"));
    }
    if scaled.e1 != base.e1.scale(&spow(s, 3 * r)) || scaled.e2 != base.e2.scale(&spow(s, 3 * r)) {
        return Err(format!("E(s^r f) for {f}, r={r}, s={s}"));
    }
    let (sa, sb) = (spow(s, alpha), spow(s, beta));
    let hat = build_system(&f.scale_vars(&sa, &sb));
    let compose = |p: &SparsePoly| p.scale_vars(&sa, &sb);
    if hat.h != compose(&base.h).scale(&spow(s, 2 * (alpha + beta))) {
        return Err(format!("H(f o rho) for {f}, alpha={alpha}, beta={beta}, s={s}"));
    }
    if hat.e1 != compose(&base.e1).scale(&spow(s, 4 * alpha + 3 * beta)) {
        return Err(format!("E1(f o rho) for {f}, alpha={alpha}, beta={beta}, s={s}"));
    }
    if hat.e2 != compose(&base.e2).scale(&spow(s, 3 * alpha + 4 * beta)) {
        return Err(format!("E2(f o rho) for {f}, alpha={alpha}, beta={beta}, s={s}"));
    }
    Ok(())
}

/// Up to `max_points` distinct lattice points in `[0, 6]^2` with heights in
/// `[0, 12]`.
pub fn random_lifting<R: Rng>(rng: &mut R, max_points: usize) -> Vec<((i64, i64), i64)> {
    let n = rng.gen_range(3..=max_points);
    let mut pts: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    while pts.len() < n {
        pts.insert((rng.gen_range(0..=6), rng.gen_range(0..=6)), rng.gen_range(0..=12));
    }
    pts.into_iter().collect()
}

/// Compare `regular_subdivision` with the triple-plane oracle. Collinear
/// domains must be reported as degenerate.
pub fn subdivision_matches_oracle(lifted: &[((i64, i64), i64)]) -> Result<(), String> {
    use parabolica::patchwork::{regular_subdivision, Lifting, PatchworkError};
    let lift = Lifting::new(lifted.iter().copied().collect()).map_err(|e| e.to_string())?;
    let expected = brute_force_lower_faces(lifted);
    match regular_subdivision(&lift) {
        Err(PatchworkError::Degenerate) if expected.is_empty() => Ok(()),
        Err(e) => Err(format!("{e} for {lifted:?}")),
        Ok(sub) => {
            let mut got: Vec<Vec<(i64, i64)>> = sub
                .faces
                .iter()
                .map(|f| {
                    let mut v = f.vertices.clone();
                    v.sort();
                    v
                })
                .collect();
            got.sort();
            if got == expected {
                Ok(())
            } else {
                Err(format!("{got:?} != {expected:?} for {lifted:?}"))
            }
        }
    }
}

/// The tiles `P1` for `i in 2..=6` and `P2`, `P3` for `k, l in 2..=6`.
pub fn tile_family() -> Vec<(String, SparsePoly)> {
    let p = |s: &str| parabolica::poly::parse_poly(s).unwrap();
    let (p1, p2, p3) = (p("x^2*y^2*(1+x+y)"), p("x^2*y^2*(x+y+y^2)"), p("x^2*y^2*(x+x*y+y^2)"));
    let mut out = Vec::new();
    for i in 2..=6u32 {
        out.push((format!("P1({i},2)"), p1.shift_monomial(i - 2, 0)));
    }
    for k in 2..=6u32 {
        for l in 2..=6u32 {
            out.push((format!("P2({k},{l})"), p2.shift_monomial(k - 2, l - 2)));
            out.push((format!("P3({k},{l})"), p3.shift_monomial(k - 2, l - 2)));
        }
    }
    out
}

/// `(H, E1, E2)` by naive expansion, each divided by its monomial content,
/// as `f64` term lists.
fn stripped_system(f: &SparsePoly) -> [Vec<(i32, i32, f64)>; 3] {
    use num_traits::ToPrimitive;
    let n = Naive::from(f);
    let (fxx, fxy, fyy) = (n.dx().dx(), n.dx().dy(), n.dy().dy());
    let h = fxx.mul(&fyy).sub(&fxy.mul(&fxy));
    let (hx, hy) = (h.dx(), h.dy());
    let e1 = fxy.mul(&hx).sub(&fxx.mul(&hy));
    let e2 = fyy.mul(&hx).sub(&fxy.mul(&hy));
    let strip = |p: &Naive| {
        let mi = p.0.keys().map(|k| k.0).min().unwrap_or(0);
        let mj = p.0.keys().map(|k| k.1).min().unwrap_or(0);
        p.0.iter()
            .map(|(&(i, j), c)| ((i - mi) as i32, (j - mj) as i32, c.to_f64().unwrap()))
            .collect::<Vec<_>>()
    };
    [strip(&h), strip(&e1), strip(&e2)]
}

fn eval_terms(p: &[(i32, i32, f64)], x: f64, y: f64) -> f64 {
    p.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum()
}

/// Whether `p` takes both signs (or a zero) on a 3x3 sample of the square
/// with lower corner `(x, y)` and side `s`, enlarged by half a side.
fn changes_sign(p: &[(i32, i32, f64)], x: f64, y: f64, s: f64) -> bool {
    let (mut neg, mut pos) = (false, false);
    for a in 0..3 {
        for b in 0..3 {
            let v = eval_terms(p, x - s / 2.0 + a as f64 * s, y - s / 2.0 + b as f64 * s);
            neg |= v <= 0.0;
            pos |= v >= 0.0;
        }
    }
    neg && pos
}

/// Counts common sign-change clusters of `E1` and `E2` in the open
/// quadrants of `[-r, r]^2` at which `H` also changes sign. Cells of side
/// `2^-4` where both `E1` and `E2` change sign are bisected down to
/// `2^-10`, the leaves are grouped by 8-adjacency, and groups touching an
/// axis are dropped.
pub fn sign_grid_count(f: &SparsePoly, r: f64) -> usize {
    use std::collections::{BTreeSet, VecDeque};
    let [h, e1, e2] = stripped_system(f);
    let coarse = 4;
    let fine = 10;
    let both = |x: f64, y: f64, s: f64| changes_sign(&e1, x, y, s) && changes_sign(&e2, x, y, s);
    let n = (r * (1 << coarse) as f64) as i64;
    let mut leaves: BTreeSet<(i64, i64)> = BTreeSet::new();
    let scale = (1i64 << fine) as f64;
    for ix in -n..n {
        for iy in -n..n {
            let mut stack = vec![(ix << (fine - coarse), iy << (fine - coarse), coarse)];
            while let Some((cx, cy, lvl)) = stack.pop() {
                let side = 1.0 / (1i64 << lvl) as f64;
                let (x, y) = (cx as f64 / scale, cy as f64 / scale);
                if !both(x, y, side) {
                    continue;
                }
                if lvl == fine {
                    leaves.insert((cx, cy));
                    continue;
                }
                let half = 1i64 << (fine - lvl - 1);
                for (dx, dy) in [(0, 0), (half, 0), (0, half), (half, half)] {
                    stack.push((cx + dx, cy + dy, lvl + 1));
                }
            }
        }
    }
    let side = 1.0 / scale;
    let mut seen: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut count = 0;
    for &start in &leaves {
        if !seen.insert(start) {
            continue;
        }
        let mut group = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some((cx, cy)) = queue.pop_front() {
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let nb = (cx + dx, cy + dy);
                    if leaves.contains(&nb) && seen.insert(nb) {
                        group.push(nb);
                        queue.push_back(nb);
                    }
                }
            }
        }
        // cells [cx, cx + 1) touching x = 0 are cx in {-1, 0}
        if group.iter().any(|&(cx, cy)| cx == 0 || cx == -1 || cy == 0 || cy == -1) {
            continue;
        }
        if group.iter().any(|&(cx, cy)| changes_sign(&h, cx as f64 / scale, cy as f64 / scale, side)) {
            count += 1;
        }
    }
    count
}

/// Each certified point of `f` in `[-10, 10]^2` has a certified point of
/// `f + t g` within 0.1. The perturbed system is solved on squares of
/// half-width 7/100 around the original points; these squares are disjoint,
/// so the perturbed count in the box is at least the original count.
pub fn perturbation_check(f: &SparsePoly, g: &SparsePoly, t: &Rational) -> Result<usize, String> {
    use parabolica::interval::{RatRange, Rect};
    use parabolica::parabolic::build_system;
    use parabolica::solver::{isolate_tspp, SolverConfig};
    let cfg = SolverConfig::default();
    let base = isolate_tspp(&build_system(f), &Rect::square(10), &cfg).map_err(|e| e.to_string())?;
    let sys = build_system(&(f + &g.scale(t)));
    let r = q(7, 100);
    let squares: Vec<Rect> = base
        .points
        .iter()
        .filter(|p| p.is_tspp())
        .map(|p| {
            let (x, y) = (p.enclosure.x.mid(), p.enclosure.y.mid());
            Rect::new(RatRange::new(&x - &r, &x + &r), RatRange::new(&y - &r, &y + &r))
        })
        .collect();
    for (k, a) in squares.iter().enumerate() {
        if squares[k + 1..].iter().any(|b| a.overlaps(b)) {
            return Err("original points closer than 0.14".into());
        }
    }
    let mut found = 0;
    for sq in &squares {
        let rep = isolate_tspp(&sys, sq, &cfg).map_err(|e| format!("{e} for g = {g}"))?;
        if rep.tspp_count() == 0 {
            return Err(format!("no point near {:?} for g = {g}", sq.center_f64()));
        }
        found += rep.tspp_count();
    }
    if found < base.tspp_count() {
        return Err(format!("count {found} < {} for g = {g}", base.tspp_count()));
    }
    Ok(found)
}
