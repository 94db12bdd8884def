//! The degree-`d` construction: a unimodular triangulation of the support
//! triangle of `x^2 y^2 * sum_{a+b <= d-4} x^a y^b` into three tile types,
//! a convex lifting inducing it, and the certified counts that patchworking
//! glues together.
//!
//! Tile types, up to a monomial factor `x^k y^l`:
//! - `P1 = x^2 y^2 (1 + x + y)` on `(i,2), (i+1,2), (i,3)`,
//! - `P2 = x^2 y^2 (x + y + y^2)` on `(k+1,l), (k,l+1), (k,l+2)`,
//! - `P3 = x^2 y^2 (x + x y + y^2)` on `(k+1,l), (k,l+2), (k+1,l+1)`.
//!
//! The glued count for a parameter value `t0` solves each face chart
//! `t0^gamma f_t0(t0^alpha x, t0^beta y)`, where that face's TSPPs sit at
//! unit scale, maps the enclosures back exactly, and counts groups of
//! overlapping enclosures. Distinct groups are disjoint, so the count is a
//! certified lower bound for the number of TSPPs of `f_t0` off the axes.
//! By default each chart is only searched near the certified points of its
//! tile; near the axes a chart resolves features of the neighbouring tiles
//! at scale `t0`, which is where the cost of a full search goes.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::interval::{RatRange, Rect};
use crate::parabolic::build_system;
use crate::patchwork::{
    face_normal, flatten_face, lp, patchworking_polynomial, regular_subdivision, validate_inducing,
    Lifting, PatchworkError, Pt, Subdivision,
};
use crate::poly::{int, LatticeSet, ParamPoly, Poly, Rational, SparsePoly};
use crate::solver::{isolate_tspp, SolverConfig, SolverError};

pub const DEFAULT_MAX_DEGREE: u32 = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructionError {
    #[error("d < 5: degree {0} is too small")]
    DegreeTooSmall(u32),
    #[error("d > {max}: degree {d} exceeds the limit")]
    DegreeTooLarge { d: u32, max: u32 },
    #[error("no lifting induces the triangulation")]
    NoLifting,
    #[error(transparent)]
    Patchwork(#[from] PatchworkError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("parameter t must be nonzero")]
    ZeroParameter,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TileKind {
    P1,
    P2,
    P3,
}

impl TileKind {
    /// Number of TSPPs off the axes of the tile polynomial.
    pub fn expected_count(self) -> usize {
        match self {
            TileKind::P1 | TileKind::P2 => 1,
            TileKind::P3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TileKind::P1 => "P1",
            TileKind::P2 => "P2",
            TileKind::P3 => "P3",
        }
    }

    /// The tile polynomial with factor `x^2 y^2`.
    pub fn base_polynomial(self) -> SparsePoly {
        let terms: &[(u32, u32)] = match self {
            TileKind::P1 => &[(2, 2), (3, 2), (2, 3)],
            TileKind::P2 => &[(3, 2), (2, 3), (2, 4)],
            TileKind::P3 => &[(3, 2), (3, 3), (2, 4)],
        };
        Poly::from_terms(terms.iter().map(|&(i, j)| (i, j, int(1))))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TileSpec {
    pub kind: TileKind,
    /// `(i, 2)` for `P1`, `(k, l)` otherwise.
    pub anchor: Pt,
    pub triangle: [Pt; 3],
    /// Restriction of the construction polynomial to the triangle.
    pub polynomial: SparsePoly,
}

fn check_degree(d: u32, max: u32) -> Result<(), ConstructionError> {
    if d < 5 {
        return Err(ConstructionError::DegreeTooSmall(d));
    }
    if d > max {
        return Err(ConstructionError::DegreeTooLarge { d, max });
    }
    Ok(())
}

/// Lattice points `(i, j)` with `i, j >= 2` and `i + j <= d`.
pub fn support(d: u32) -> LatticeSet {
    let d = d as i64;
    (2..=d - 2)
        .flat_map(|i| (2..=d - i).map(move |j| (i, j)))
        .collect()
}

/// `x^2 y^2 * sum_{a+b <= d-4} x^a y^b`
pub fn construction_polynomial(d: u32) -> SparsePoly {
    weighted_polynomial(d, &BTreeMap::new())
}

/// The construction polynomial with some coefficients replaced.
pub fn weighted_polynomial(d: u32, coefficients: &BTreeMap<Pt, Rational>) -> SparsePoly {
    Poly::from_terms(support(d).iter().map(|&(i, j)| {
        let c = coefficients.get(&(i, j)).cloned().unwrap_or_else(|| int(1));
        (i as u32, j as u32, c)
    }))
}

pub fn build_triangulation(d: u32) -> Result<Vec<TileSpec>, ConstructionError> {
    check_degree(d, u32::MAX)?;
    let f = construction_polynomial(d);
    let d = d as i64;
    let mut tiles = Vec::new();
    let mut push = |kind, anchor, triangle: [Pt; 3]| {
        let mask: LatticeSet = triangle.iter().copied().collect();
        tiles.push(TileSpec {
            kind,
            anchor,
            triangle,
            polynomial: f.restrict(&mask),
        });
    };
    for i in 2..=d - 3 {
        push(TileKind::P1, (i, 2), [(i, 2), (i + 1, 2), (i, 3)]);
    }
    for k in 2..=d - 4 {
        for l in 2..=d - k - 2 {
            push(TileKind::P2, (k, l), [(k + 1, l), (k, l + 1), (k, l + 2)]);
            push(TileKind::P3, (k, l), [(k + 1, l), (k, l + 2), (k + 1, l + 1)]);
        }
    }
    Ok(tiles)
}

/// `(d - 4)(2d - 9)`
pub fn lower_bound(d: u32) -> usize {
    let d = d as i64;
    ((d - 4) * (2 * d - 9)).max(0) as usize
}

pub fn triangulation_subdivision(tiles: &[TileSpec]) -> Subdivision {
    Subdivision::from_polygons(&tiles.iter().map(|t| t.triangle.to_vec()).collect::<Vec<_>>())
}

/// A non-negative integer lifting inducing the triangulation, from the
/// minimal solution of the strict local convexity conditions across every
/// interior edge.
pub fn build_lifting(d: u32, tiles: &[TileSpec]) -> Result<Lifting, ConstructionError> {
    let points: Vec<Pt> = support(d).iter().copied().collect();
    let index: BTreeMap<Pt, usize> = points.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let mut edges: BTreeMap<(Pt, Pt), Vec<(usize, Pt)>> = BTreeMap::new();
    for (t, tile) in tiles.iter().enumerate() {
        let v = tile.triangle;
        for k in 0..3 {
            let (a, b, c) = (v[k], v[(k + 1) % 3], v[(k + 2) % 3]);
            edges.entry((a.min(b), a.max(b))).or_default().push((t, c));
        }
    }
    let mut rows = Vec::new();
    for ((a, b), opp) in &edges {
        if opp.len() != 2 {
            continue;
        }
        let (c, e) = (opp[0].1, opp[1].1);
        // lambda(e) must exceed the affine extension of the first triangle.
        let o = |p: Pt, q: Pt, r: Pt| Rational::from_integer(crate::patchwork::orient(p, q, r).into());
        let det = o(*a, *b, c);
        let wa = o(e, *b, c) / &det;
        let wb = o(*a, e, c) / &det;
        let wc = o(*a, *b, e) / &det;
        let mut row = vec![Rational::zero(); points.len()];
        row[index[&e]] += int(1);
        row[index[a]] -= wa;
        row[index[b]] -= wb;
        row[index[&c]] -= wc;
        rows.push(row);
    }
    let lift = if rows.is_empty() {
        Lifting::new(points.iter().map(|p| (*p, 0)).collect())?
    } else {
        let x = lp::strictly_feasible(&rows).ok_or(ConstructionError::NoLifting)?;
        let values: BTreeMap<Pt, Rational> = points.iter().copied().zip(x).collect();
        Lifting::from_rational(&values)?.0
    };
    if !validate_inducing(&lift, &triangulation_subdivision(tiles)) {
        return Err(ConstructionError::NoLifting);
    }
    Ok(lift)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TileCount {
    pub kind: TileKind,
    pub anchor: Pt,
    pub certified: usize,
    pub expected: usize,
    /// No unresolved boxes remained.
    pub complete: bool,
    /// Enclosures of the certified TSPPs.
    pub points: Vec<Rect>,
}

pub fn tile_count(spec: &TileSpec, search: &Rect, cfg: &SolverConfig) -> Result<TileCount, ConstructionError> {
    let r = isolate_tspp(&build_system(&spec.polynomial), search, cfg)?;
    let points: Vec<Rect> = r.points.iter().filter(|p| p.is_tspp()).map(|p| p.enclosure.clone()).collect();
    Ok(TileCount {
        kind: spec.kind,
        anchor: spec.anchor,
        certified: points.len(),
        expected: spec.kind.expected_count(),
        complete: r.is_complete(),
        points,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlueReport {
    pub d: u32,
    pub t: Rational,
    /// Certified TSPP count of `f_t` off the axes (a lower bound).
    pub glued: usize,
    pub bound: usize,
    pub tile_sum: usize,
    /// `glued >= bound`
    pub inequality_holds: bool,
    /// `glued >= tile_sum`
    pub monotone_holds: bool,
    /// Certified points found in the charts before merging.
    pub chart_points: usize,
    /// Unresolved clusters over all charts.
    pub unresolved: usize,
    /// Every face chart was fully resolved and certified at least as many
    /// points as its tile.
    pub settled: bool,
    /// One enclosure per group, in the coordinates of `f_t0`.
    pub points: Vec<Rect>,
}

impl GlueReport {
    pub const CSV_HEADER: &'static str =
        "d,t,sum_tiles,glued,bound,holds,monotone,settled,chart_points,unresolved";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.d,
            self.t,
            self.tile_sum,
            self.glued,
            self.bound,
            self.inequality_holds,
            self.monotone_holds,
            self.settled,
            self.chart_points,
            self.unresolved
        )
    }
}

/// Where each chart is searched.
#[derive(Clone, Debug, PartialEq)]
pub enum ChartSearch {
    /// The whole search box.
    Full,
    /// A box around each certified tile point, with half-width at most the
    /// given radius and at most half the distance to either axis.
    Local(Rational),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReproduceConfig {
    pub solver: SolverConfig,
    /// Search box for tile counts, and for charts under `ChartSearch::Full`.
    pub search: Rect,
    pub chart_search: ChartSearch,
    pub max_degree: u32,
    /// Also search `f_t0` itself over the whole search box.
    pub identity_chart: bool,
    /// Coefficients of `f` replacing the default 1, by exponent.
    pub coefficients: BTreeMap<Pt, Rational>,
}

impl Default for ReproduceConfig {
    fn default() -> Self {
        ReproduceConfig {
            solver: SolverConfig::default(),
            search: Rect::square(10),
            chart_search: ChartSearch::Local(Rational::new(1.into(), 4.into())),
            max_degree: DEFAULT_MAX_DEGREE,
            identity_chart: false,
            coefficients: BTreeMap::new(),
        }
    }
}

/// `+-2^-k` for `k = 4..=16`.
pub fn default_t_sweep() -> Vec<Rational> {
    let mut ts = Vec::new();
    for k in 4..=16 {
        let t = Rational::new(1.into(), num_bigint::BigInt::from(1u64 << k));
        ts.push(t.clone());
        ts.push(-t);
    }
    ts
}

/// Everything `glue_at` needs that does not depend on `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub d: u32,
    pub tiles: Vec<TileSpec>,
    pub lifting: Lifting,
    pub subdivision: Subdivision,
    pub patchwork: ParamPoly,
    pub tile_counts: Vec<TileCount>,
    /// For each face of `subdivision`, the index of its tile.
    face_tile: Vec<usize>,
}

impl Construction {
    pub fn new(d: u32, cfg: &ReproduceConfig) -> Result<Self, ConstructionError> {
        check_degree(d, cfg.max_degree)?;
        let f = weighted_polynomial(d, &cfg.coefficients);
        let mut tiles = build_triangulation(d)?;
        for t in &mut tiles {
            t.polynomial = f.restrict(&t.triangle.iter().copied().collect());
        }
        let lifting = build_lifting(d, &tiles)?;
        let subdivision = regular_subdivision(&lifting)?;
        let patchwork = patchworking_polynomial(&f, &lifting)?;
        let tile_counts = tiles
            .par_iter()
            .map(|t| tile_count(t, &cfg.search, &cfg.solver))
            .collect::<Result<Vec<_>, _>>()?;
        let face_tile = subdivision
            .faces
            .iter()
            .map(|f| {
                let mut v = f.vertices.clone();
                v.sort();
                tiles
                    .iter()
                    .position(|t| {
                        let mut w = t.triangle.to_vec();
                        w.sort();
                        w == v
                    })
                    .ok_or(ConstructionError::NoLifting)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Construction {
            d,
            tiles,
            lifting,
            subdivision,
            patchwork,
            tile_counts,
            face_tile,
        })
    }

    pub fn tile_sum(&self) -> usize {
        self.tile_counts.iter().map(|c| c.certified).sum()
    }

    pub fn glue_at(&self, t0: &Rational, cfg: &ReproduceConfig) -> Result<GlueReport, ConstructionError> {
        if t0.is_zero() {
            return Err(ConstructionError::ZeroParameter);
        }
        // (chart polynomial, scale back to f_t0, search regions)
        let mut charts: Vec<(SparsePoly, (Rational, Rational), Vec<Rect>)> = Vec::new();
        for (k, &tile) in self.face_tile.iter().enumerate() {
            let n = face_normal(&self.subdivision, k)?;
            let (flat, _) = flatten_face(&self.patchwork, &self.subdivision, k)?;
            let regions = match &cfg.chart_search {
                ChartSearch::Full => vec![cfg.search.clone()],
                ChartSearch::Local(r) => self.tile_counts[tile].points.iter().map(|p| local_box(p, r)).collect(),
            };
            charts.push((flat.specialize(t0), (pow_i(t0, n.alpha), pow_i(t0, n.beta)), regions));
        }
        if cfg.identity_chart {
            charts.push((self.patchwork.specialize(t0), (int(1), int(1)), vec![cfg.search.clone()]));
        }
        let jobs: Vec<(usize, &Rect)> = charts
            .iter()
            .enumerate()
            .flat_map(|(c, ch)| ch.2.iter().map(move |r| (c, r)))
            .collect();
        let systems: Vec<_> = charts.iter().map(|c| build_system(&c.0)).collect();
        let results: Vec<Result<_, SolverError>> = jobs
            .par_iter()
            .map(|&(c, region)| {
                let r = isolate_tspp(&systems[c], region, &cfg.solver)?;
                let (sx, sy) = &charts[c].1;
                let pts: Vec<Rect> = r
                    .points
                    .iter()
                    .filter(|p| p.is_tspp())
                    .map(|p| p.enclosure.scaled(sx, sy))
                    .collect();
                Ok((pts, r.unresolved.len()))
            })
            .collect();
        let mut rects = Vec::new();
        let mut unresolved = 0;
        let mut found = vec![0; charts.len()];
        for (r, &(c, _)) in results.into_iter().zip(&jobs) {
            let (pts, u) = r?;
            found[c] += pts.len();
            rects.extend(pts);
            unresolved += u;
        }
        let settled = unresolved == 0
            && self
                .face_tile
                .iter()
                .enumerate()
                .all(|(k, &tile)| found[k] >= self.tile_counts[tile].certified);
        let points = group_representatives(&rects);
        let glued = points.len();
        let bound = lower_bound(self.d);
        let tile_sum = self.tile_sum();
        Ok(GlueReport {
            d: self.d,
            t: t0.clone(),
            glued,
            bound,
            tile_sum,
            inequality_holds: glued >= bound,
            monotone_holds: glued >= tile_sum,
            chart_points: rects.len(),
            unresolved,
            settled,
            points,
        })
    }
}

/// Box around `p` of half-width `min(r, dist(p, axis) / 2)` per coordinate.
fn local_box(p: &Rect, r: &Rational) -> Rect {
    let side = |c: &RatRange| {
        let m = c.mid();
        let h = (m.abs() / int(2)).min(r.clone());
        RatRange::new(&m - &h, &m + &h)
    };
    Rect::new(side(&p.x), side(&p.y))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reproduction {
    pub construction: Construction,
    pub bound: usize,
    pub reports: Vec<GlueReport>,
}

impl Reproduction {
    /// Largest `|t|` among tested values of the given sign at which the
    /// inequality holds.
    pub fn largest_t_holding(&self, positive: bool) -> Option<Rational> {
        self.reports
            .iter()
            .filter(|r| r.inequality_holds && r.t.is_positive() == positive)
            .map(|r| r.t.clone())
            .max_by(|a, b| a.abs().cmp(&b.abs()))
    }

    pub fn any_holds(&self) -> bool {
        self.reports.iter().any(|r| r.inequality_holds)
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from(GlueReport::CSV_HEADER);
        s.push('\n');
        for r in &self.reports {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        s
    }
}

fn pow_i(t: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(t.clone(), e as usize)
    } else {
        num_traits::pow(t.recip(), (-e) as usize)
    }
}

/// The narrowest rectangle of each group of pairwise-connected overlapping
/// rectangles, sorted by lower-left corner.
fn group_representatives(rects: &[Rect]) -> Vec<Rect> {
    let n = rects.len();
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
            if rects[a].overlaps(&rects[b]) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut best: BTreeMap<usize, usize> = BTreeMap::new();
    for a in 0..n {
        let root = find(&mut parent, a);
        let size = |k: usize| rects[k].x.width() + rects[k].y.width();
        best.entry(root)
            .and_modify(|b| {
                if size(a) < size(*b) {
                    *b = a;
                }
            })
            .or_insert(a);
    }
    let mut out: Vec<Rect> = best.values().map(|&k| rects[k].clone()).collect();
    out.sort_by(|a, b| (&a.x.lo, &a.y.lo).cmp(&(&b.x.lo, &b.y.lo)));
    out
}

pub fn reproduce_theorem(
    d: u32,
    ts: &[Rational],
    cfg: &ReproduceConfig,
) -> Result<Reproduction, ConstructionError> {
    let construction = Construction::new(d, cfg)?;
    let reports = ts
        .iter()
        .map(|t| construction.glue_at(t, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Reproduction {
        bound: lower_bound(d),
        construction,
        reports,
    })
}
