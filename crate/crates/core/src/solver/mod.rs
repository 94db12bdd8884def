//! Certified isolation of transversal special parabolic points.
//!
//! The zeros of `(E1, E2)` are isolated by interval subdivision with
//! Krawczyk uniqueness tests. A zero `q` with `grad H(q) != 0` satisfies
//! `H(q) = 0` automatically, since then `Hess(f)(q)` has the nonzero kernel
//! vector `(-H_y, H_x)`. Zeros where `H` provably does not vanish are
//! critical points of `H` and are discarded.
//!
//! With `off_axes` set, the search is restricted to the open quadrants and
//! every polynomial is divided by its monomial content first. This removes
//! the coordinate axes from the zero sets of tile polynomials, which are
//! divisible by `x^2 y^2`. Near an axis the stripped system may still
//! vanish to high order (typically at the origin), so boxes within one width
//! of an axis stop at the coarser `axis_min_width` and are reported as axis
//! residue rather than as failures.

mod gcd;
mod krawczyk;
pub mod trace;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::interval::{FBox, Interval, RatRange, Rect};
use crate::parabolic::ParabolicSystem;
use crate::poly::{Rational, SparsePoly};

pub use gcd::share_common_factor;
pub use krawczyk::{abs_bound, eval_range};
use krawczyk::{Func, KResult, PairSystem};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Boxes narrower than this are not split further.
    pub min_width: f64,
    pub max_depth: u32,
    /// Bound required on `|H|`, `|E1|`, `|E2|` over reported enclosures.
    pub residual_tol: f64,
    /// Search the open quadrants only.
    pub off_axes: bool,
    /// In off-axes mode, boxes within one width of an axis are not split
    /// below this width.
    pub axis_min_width: f64,
    /// Per-piece budget of processed boxes.
    pub max_boxes: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            min_width: 2f64.powi(-40),
            max_depth: 60,
            residual_tol: 2f64.powi(-30),
            off_axes: true,
            axis_min_width: 2f64.powi(-16),
            max_boxes: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("degenerate system: {0}")]
    Degenerate(String),
    #[error("empty search box")]
    EmptyBox,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnresolvedKind {
    /// Subdivision reached the width or depth limit.
    Exhausted,
    /// The box budget ran out.
    BoxLimit,
    /// An enclosure straddles the search box boundary.
    Boundary,
    /// `grad H` could not be separated from zero on a certified zero.
    HessianUndecided,
    /// Two enclosures overlap without a uniqueness proof.
    Ambiguous,
}

/// A connected group of boxes that could not be decided.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub hull: Rect,
    pub boxes: usize,
    pub kind: UnresolvedKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residuals {
    pub h: f64,
    pub e1: f64,
    pub e2: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.h.max(self.e1).max(self.e2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedPoint {
    /// Contains exactly one special parabolic point.
    pub enclosure: Rect,
    pub approx: (f64, f64),
    pub hessian_smooth: bool,
    pub transversal: bool,
    /// Upper bounds of `|H|`, `|E1|`, `|E2|` over the enclosure.
    pub residuals: Residuals,
}

impl CertifiedPoint {
    pub fn is_tspp(&self) -> bool {
        self.hessian_smooth && self.transversal
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct TsppReport {
    pub points: Vec<CertifiedPoint>,
    pub unresolved: Vec<Cluster>,
    pub axis_residue: Vec<Cluster>,
    /// Zeros of `(E1, E2)` where `H` was shown to be nonzero.
    pub dropped_nonparabolic: usize,
    pub boxes: usize,
}

impl TsppReport {
    pub fn tspp_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_tspp()).count()
    }

    /// Every box was decided.
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairZero {
    pub enclosure: Rect,
    /// Box in which this is the only zero.
    pub region: Rect,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PairReport {
    pub zeros: Vec<PairZero>,
    pub unresolved: Vec<Cluster>,
    pub axis_residue: Vec<Cluster>,
    pub boxes: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TransversalCertificate {
    pub exists_unique: bool,
    pub transversal: bool,
    pub hessian_smooth: bool,
}

/// Search piece with the sign pattern of its closed quadrant, if any.
struct Piece {
    b: FBox,
    quadrant: Option<(i8, i8)>,
}

fn split_at_zero(r: &RatRange, split: bool) -> Vec<(RatRange, i8)> {
    let zero = Rational::zero();
    let sign = |r: &RatRange| if r.lo >= zero { 1 } else { -1 };
    if split && r.lo < zero && r.hi > zero {
        vec![
            (RatRange::new(r.lo.clone(), zero.clone()), -1),
            (RatRange::new(zero.clone(), r.hi.clone()), 1),
        ]
    } else {
        vec![(r.clone(), sign(r))]
    }
}

fn pieces(search: &Rect, off_axes: bool) -> Vec<Piece> {
    let mut out = Vec::new();
    for (xr, sx) in split_at_zero(&search.x, off_axes) {
        for (yr, sy) in split_at_zero(&search.y, off_axes) {
            let r = Rect::new(xr.clone(), yr.clone());
            if off_axes && (r.x.width().is_zero() && r.x.lo.is_zero() || r.y.width().is_zero() && r.y.lo.is_zero()) {
                continue;
            }
            out.push(Piece {
                b: r.to_fbox(),
                quadrant: off_axes.then_some((sx, sy)),
            });
        }
    }
    out
}

fn in_quadrant(b: &FBox, q: (i8, i8)) -> bool {
    let ok = |iv: &Interval, s: i8| if s > 0 { iv.lo >= 0.0 } else { iv.hi <= 0.0 };
    ok(&b.x, q.0) && ok(&b.y, q.1)
}

/// The box touches an axis or lies within one box width of it.
fn near_axis(b: &FBox) -> bool {
    let w = b.width();
    let gap = |iv: &Interval| if iv.contains_zero() { 0.0 } else { iv.lo.abs().min(iv.hi.abs()) };
    gap(&b.x) <= w || gap(&b.y) <= w
}

struct RawZero {
    encl: FBox,
    region: FBox,
}

#[derive(Default)]
struct PieceResult {
    zeros: Vec<RawZero>,
    unresolved: Vec<(FBox, UnresolvedKind)>,
    residue: Vec<FBox>,
    boxes: usize,
}

struct Engine<'a> {
    pair: &'a PairSystem,
    filters: &'a [Func],
    cfg: &'a SolverConfig,
}

impl Engine<'_> {
    fn excluded(&self, b: &FBox) -> bool {
        let funcs = || self.pair.f.iter().chain(self.filters.iter());
        funcs().any(|f| !f.p.eval(b).contains_zero()) || funcs().any(|f| !f.range(b).contains_zero())
    }

    /// Look for a small box around a Newton point that passes the
    /// Krawczyk test.
    fn inflate(&self, b: &FBox, quadrant: Option<(i8, i8)>, known: &[RawZero]) -> Option<(FBox, FBox)> {
        let (mx, my) = b.mid();
        let (px, py) = self.pair.newton(mx, my, 12)?;
        let w = b.width();
        if (px - mx).abs() > w || (py - my).abs() > w {
            return None;
        }
        if known.iter().any(|z| z.region.x.contains(px) && z.region.y.contains(py)) {
            return None;
        }
        let floor = 1e-13 * (1.0 + px.abs().max(py.abs()));
        for k in [2, 5, 9, 14, 20, 28, 36] {
            let r = (w * 2f64.powi(-k)).max(floor);
            let c = FBox::new(Interval::new(px - r, px + r), Interval::new(py - r, py + r));
            if quadrant.is_some_and(|q| !in_quadrant(&c, q)) {
                continue;
            }
            if let KResult::Inside(k) = self.pair.krawczyk(&c) {
                return Some((c, k));
            }
            if r == floor {
                break;
            }
        }
        None
    }

    fn register(&self, region: FBox, k: FBox, out: &mut PieceResult) {
        let encl = self.pair.refine(k, self.cfg.min_width.min(1e-12));
        for z in out.zeros.iter_mut() {
            if !z.encl.overlaps(&encl) {
                continue;
            }
            if z.region.contains_box(&encl) || region.contains_box(&z.encl) {
                return;
            }
            let hull = z.encl.hull(&encl);
            if z.region.contains_box(&hull) || region.contains_box(&hull) {
                return;
            }
            out.unresolved.push((hull, UnresolvedKind::Ambiguous));
            return;
        }
        out.zeros.push(RawZero { encl, region });
    }

    fn run(&self, piece: &Piece) -> PieceResult {
        let mut out = PieceResult::default();
        let mut stack = vec![(piece.b, 0u32)];
        while let Some((b, depth)) = stack.pop() {
            out.boxes += 1;
            if out.boxes > self.cfg.max_boxes {
                out.unresolved.push((b, UnresolvedKind::BoxLimit));
                out.unresolved
                    .extend(stack.drain(..).map(|(s, _)| (s, UnresolvedKind::BoxLimit)));
                break;
            }
            if out.zeros.iter().any(|z| z.region.contains_box(&b)) || self.excluded(&b) {
                continue;
            }
            match self.pair.krawczyk(&b) {
                KResult::Empty => continue,
                KResult::Inside(k) => {
                    self.register(b, k, &mut out);
                    continue;
                }
                KResult::Inconclusive => {}
            }
            if let Some((region, k)) = self.inflate(&b, piece.quadrant, &out.zeros) {
                self.register(region, k, &mut out);
                if region.contains_box(&b) {
                    continue;
                }
            }
            let axis = piece.quadrant.is_some() && near_axis(&b);
            if axis && b.width() <= self.cfg.axis_min_width {
                out.residue.push(b);
                continue;
            }
            if b.width() <= self.cfg.min_width || depth >= self.cfg.max_depth {
                if axis {
                    out.residue.push(b);
                } else {
                    out.unresolved.push((b, UnresolvedKind::Exhausted));
                }
                continue;
            }
            for q in b.quarter().into_iter().rev() {
                stack.push((q, depth + 1));
            }
        }
        out
    }
}

/// Group touching boxes of the same kind.
fn cluster(boxes: &[(FBox, UnresolvedKind)]) -> Vec<Cluster> {
    let n = boxes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for a in 0..n {
        for b in a + 1..n {
            if boxes[a].1 == boxes[b].1 && boxes[a].0.overlaps(&boxes[b].0) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, (FBox, usize, UnresolvedKind)> =
        Default::default();
    for a in 0..n {
        let r = find(&mut parent, a);
        let e = groups.entry(r).or_insert((boxes[a].0, 0, boxes[a].1));
        e.0 = e.0.hull(&boxes[a].0);
        e.1 += 1;
    }
    let mut out: Vec<Cluster> = groups
        .into_values()
        .map(|(b, count, kind)| Cluster {
            hull: b.to_rect(),
            boxes: count,
            kind,
        })
        .collect();
    out.sort_by(|a, b| {
        (a.hull.x.lo.clone(), a.hull.y.lo.clone()).cmp(&(b.hull.x.lo.clone(), b.hull.y.lo.clone()))
    });
    out
}

fn solve(pair: &PairSystem, filters: &[Func], search: &Rect, cfg: &SolverConfig) -> PieceResult {
    let engine = Engine { pair, filters, cfg };
    let results: Vec<PieceResult> = pieces(search, cfg.off_axes)
        .par_iter()
        .map(|p| engine.run(p))
        .collect();
    let mut all = PieceResult::default();
    for r in results {
        all.zeros.extend(r.zeros);
        all.unresolved.extend(r.unresolved);
        all.residue.extend(r.residue);
        all.boxes += r.boxes;
    }
    all.zeros
        .sort_by(|a, b| (a.encl.x.lo, a.encl.y.lo).partial_cmp(&(b.encl.x.lo, b.encl.y.lo)).unwrap());
    all
}

fn check_search(search: &Rect) -> Result<(), SolverError> {
    if search.x.width().is_zero() && search.y.width().is_zero() {
        return Err(SolverError::EmptyBox);
    }
    Ok(())
}

enum Placement {
    Inside,
    Outside,
    Straddles,
}

fn placement(encl: &Rect, search: &Rect) -> Placement {
    if encl.subset_of(search) {
        Placement::Inside
    } else if !encl.overlaps(search) {
        Placement::Outside
    } else {
        Placement::Straddles
    }
}

/// Isolate the common zeros of `f` and `g` in `search`, discarding boxes on
/// which any of `filters` is provably nonzero.
pub fn isolate_pair(
    f: &SparsePoly,
    g: &SparsePoly,
    filters: &[SparsePoly],
    search: &Rect,
    cfg: &SolverConfig,
) -> Result<PairReport, SolverError> {
    check_search(search)?;
    if share_common_factor(f, g) {
        return Err(SolverError::Degenerate(
            "the two polynomials share a common factor".into(),
        ));
    }
    let pair = PairSystem::new(f, g);
    let filters: Vec<Func> = filters.iter().map(Func::new).collect();
    let raw = solve(&pair, &filters, search, cfg);
    let mut unresolved = raw.unresolved;
    let mut zeros = Vec::new();
    for z in raw.zeros {
        let encl = z.encl.to_rect();
        match placement(&encl, search) {
            Placement::Inside => zeros.push(PairZero {
                enclosure: encl,
                region: z.region.to_rect(),
            }),
            Placement::Outside => {}
            Placement::Straddles => unresolved.push((z.encl, UnresolvedKind::Boundary)),
        }
    }
    Ok(PairReport {
        zeros,
        unresolved: cluster(&unresolved),
        axis_residue: cluster(
            &raw.residue
                .iter()
                .map(|b| (*b, UnresolvedKind::Exhausted))
                .collect::<Vec<_>>(),
        ),
        boxes: raw.boxes,
    })
}

/// The polynomials used for solving: stripped of monomial content in
/// off-axes mode.
fn solving_polys(sys: &ParabolicSystem, off_axes: bool) -> [SparsePoly; 3] {
    if off_axes {
        [
            sys.e1.strip_monomial(),
            sys.e2.strip_monomial(),
            sys.h.strip_monomial(),
        ]
    } else {
        [sys.e1.clone(), sys.e2.clone(), sys.h.clone()]
    }
}

/// Fails when `(E1, E2)` does not have isolated common zeros.
pub fn check_isolated(sys: &ParabolicSystem, off_axes: bool) -> Result<(), SolverError> {
    let [e1, e2, _] = solving_polys(sys, off_axes);
    if e1.is_zero() || e2.is_zero() {
        return Err(SolverError::Degenerate(
            "E1 or E2 vanishes identically".into(),
        ));
    }
    if share_common_factor(&e1, &e2) {
        return Err(SolverError::Degenerate(
            "E1 and E2 share a common factor".into(),
        ));
    }
    Ok(())
}

fn bound_f64(r: &Rational) -> f64 {
    let v = r.to_f64().unwrap_or(f64::INFINITY);
    if Rational::from_float(v).is_some_and(|b| &b >= r) {
        v
    } else {
        v.next_up()
    }
}

fn residuals(sys: &ParabolicSystem, r: &Rect) -> Residuals {
    Residuals {
        h: bound_f64(&abs_bound(&sys.h, r)),
        e1: bound_f64(&abs_bound(&sys.e1, r)),
        e2: bound_f64(&abs_bound(&sys.e2, r)),
    }
}

fn excludes_zero_exact(p: &SparsePoly, r: &Rect) -> bool {
    !eval_range(p, r).contains_zero()
}

/// Certified special parabolic points of `f` in `search`.
pub fn isolate_tspp(
    sys: &ParabolicSystem,
    search: &Rect,
    cfg: &SolverConfig,
) -> Result<TsppReport, SolverError> {
    check_search(search)?;
    check_isolated(sys, cfg.off_axes)?;
    let [e1, e2, h] = solving_polys(sys, cfg.off_axes);
    let pair = PairSystem::new(&e1, &e2);
    let hfilter = [Func::new(&h)];
    let hfull = Func::new(&sys.h);
    let raw = solve(&pair, &hfilter, search, cfg);

    let mut report = TsppReport {
        boxes: raw.boxes,
        ..Default::default()
    };
    let mut unresolved = raw.unresolved;
    for z in raw.zeros {
        let mut rect = z.encl.to_rect();
        match placement(&rect, search) {
            Placement::Inside => {}
            Placement::Outside => continue,
            Placement::Straddles => {
                unresolved.push((z.encl, UnresolvedKind::Boundary));
                continue;
            }
        }
        if !hfilter[0].range(&z.encl).contains_zero() {
            report.dropped_nonparabolic += 1;
            continue;
        }
        let grad = hfull.grad(&z.encl);
        let mut smooth = !grad[0].contains_zero() || !grad[1].contains_zero();
        let mut transversal = !pair.det_jacobian(&z.encl).contains_zero();
        let mut res = residuals(sys, &rect);
        let mut rounds = 0;
        while (res.max() > cfg.residual_tol || !smooth || !transversal) && rounds < 12 {
            rounds += 1;
            let Some((next, _)) = pair.krawczyk_exact(&rect) else {
                break;
            };
            rect = next;
            if excludes_zero_exact(&h, &rect) {
                break;
            }
            smooth = smooth
                || excludes_zero_exact(&sys.hx, &rect)
                || excludes_zero_exact(&sys.hy, &rect);
            transversal = transversal || {
                let j = [
                    eval_range(&e1.dx(), &rect),
                    eval_range(&e1.dy(), &rect),
                    eval_range(&e2.dx(), &rect),
                    eval_range(&e2.dy(), &rect),
                ];
                let det = j[0].mul(&j[3]).sub(&j[1].mul(&j[2]));
                !det.contains_zero()
            };
            res = residuals(sys, &rect);
        }
        if excludes_zero_exact(&h, &rect) {
            report.dropped_nonparabolic += 1;
            continue;
        }
        if !smooth {
            unresolved.push((z.encl, UnresolvedKind::HessianUndecided));
            continue;
        }
        report.points.push(CertifiedPoint {
            approx: rect.center_f64(),
            enclosure: rect,
            hessian_smooth: smooth,
            transversal,
            residuals: res,
        });
    }
    report.unresolved = cluster(&unresolved);
    report.axis_residue = cluster(
        &raw.residue
            .iter()
            .map(|b| (*b, UnresolvedKind::Exhausted))
            .collect::<Vec<_>>(),
    );
    Ok(report)
}

/// Decide, for the single box `b`, whether `(E1, E2)` has exactly one zero
/// in it, whether the Jacobian is nonsingular on it, and whether `grad H`
/// is nonzero on it. Each flag is `true` only when proved.
pub fn certify_transversal(sys: &ParabolicSystem, b: &Rect) -> TransversalCertificate {
    certify_transversal_pair(&sys.e1, &sys.e2, Some(&sys.h), b)
}

pub fn certify_transversal_pair(
    e1: &SparsePoly,
    e2: &SparsePoly,
    h: Option<&SparsePoly>,
    b: &Rect,
) -> TransversalCertificate {
    let pair = PairSystem::new(e1, e2);
    let fb = b.to_fbox();
    let inside_b = |k: &FBox| {
        k.x.lo.is_finite()
            && k.x.hi.is_finite()
            && k.y.lo.is_finite()
            && k.y.hi.is_finite()
            && {
                let kr = k.to_rect();
                kr.x.lo > b.x.lo && kr.x.hi < b.x.hi && kr.y.lo > b.y.lo && kr.y.hi < b.y.hi
            }
    };
    let exists_unique = match pair.krawczyk(&fb) {
        KResult::Inside(k) if inside_b(&k) => true,
        KResult::Empty => false,
        _ => pair.krawczyk_exact(b).is_some_and(|(_, inside)| inside),
    };
    let transversal = !pair.det_jacobian(&fb).contains_zero() || {
        let j = [
            eval_range(&e1.dx(), b),
            eval_range(&e1.dy(), b),
            eval_range(&e2.dx(), b),
            eval_range(&e2.dy(), b),
        ];
        let det = j[0].mul(&j[3]).sub(&j[1].mul(&j[2]));
        !det.contains_zero()
    };
    let hessian_smooth = h.is_some_and(|h| {
        excludes_zero_exact(&h.dx(), b) || excludes_zero_exact(&h.dy(), b)
    });
    TransversalCertificate {
        exists_unique,
        transversal,
        hessian_smooth,
    }
}

/// Prove that the given polynomials have no common zero in `region`, by
/// subdivision until one of them is provably nonzero on every box.
pub fn certify_no_common_zero(polys: &[SparsePoly], region: &Rect, cfg: &SolverConfig) -> bool {
    let funcs: Vec<Func> = polys.iter().map(Func::new).collect();
    let mut stack = vec![(region.to_fbox(), 0u32)];
    let mut boxes = 0;
    while let Some((b, depth)) = stack.pop() {
        boxes += 1;
        if boxes > cfg.max_boxes {
            return false;
        }
        if funcs.iter().any(|f| !f.range(&b).contains_zero()) {
            continue;
        }
        if b.width() <= cfg.min_width || depth >= cfg.max_depth {
            return false;
        }
        stack.extend(b.quarter().into_iter().map(|q| (q, depth + 1)));
    }
    true
}
