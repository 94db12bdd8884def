//! Lower convex hull of lifted lattice points by gift wrapping across
//! face edges. All predicates are exact integer arithmetic.

use std::collections::{BTreeSet, VecDeque};

pub type Pt = (i64, i64);

pub fn orient(a: Pt, b: Pt, c: Pt) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    (b.0 as i128 - ax) * (c.1 as i128 - ay) - (b.1 as i128 - ay) * (c.0 as i128 - ax)
}

/// Sign of `lambda(q)` minus the height at `q` of the plane through the
/// lifted points `a, b, c`, whose projections must not be collinear.
pub fn height_sign(a: (Pt, i64), b: (Pt, i64), c: (Pt, i64), q: (Pt, i64)) -> i32 {
    let d = orient(a.0, b.0, c.0);
    debug_assert!(d != 0);
    let plane = a.1 as i128 * orient(q.0, b.0, c.0)
        + b.1 as i128 * orient(a.0, q.0, c.0)
        + c.1 as i128 * orient(a.0, b.0, q.0);
    let diff = q.1 as i128 * d - plane;
    (diff.signum() * d.signum()) as i32
}

/// Strict convex hull vertices in counter-clockwise order, starting at the
/// lexicographically smallest point.
pub fn convex_hull(points: &[Pt]) -> Vec<Pt> {
    let mut p: Vec<Pt> = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<Pt> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<Pt> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A lower face: its lifted points and strict vertices (counter-clockwise).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawFace {
    pub vertices: Vec<Pt>,
    pub points: Vec<Pt>,
    /// Three lifted points spanning the face plane.
    pub basis: [(Pt, i64); 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HullError {
    TooFewPoints,
    Collinear,
}

fn face_from(lifted: &[(Pt, i64)], a: (Pt, i64), b: (Pt, i64), c: (Pt, i64)) -> RawFace {
    let mut pts: Vec<Pt> = lifted
        .iter()
        .filter(|q| height_sign(a, b, c, **q) == 0)
        .map(|q| q.0)
        .collect();
    pts.sort();
    RawFace {
        vertices: convex_hull(&pts),
        points: pts,
        basis: [a, b, c],
    }
}

/// Among lifted points strictly left of `a -> b`, the one whose plane with
/// `a, b` lies below all the others.
fn wrap(lifted: &[(Pt, i64)], a: (Pt, i64), b: (Pt, i64)) -> Option<(Pt, i64)> {
    let mut best: Option<(Pt, i64)> = None;
    for &q in lifted {
        if orient(a.0, b.0, q.0) <= 0 {
            continue;
        }
        match best {
            None => best = Some(q),
            Some(c) if height_sign(a, b, c, q) < 0 => best = Some(q),
            _ => {}
        }
    }
    best
}

/// Faces of the lower hull of `lifted`, as point sets on each face plane.
pub fn lower_faces(lifted: &[(Pt, i64)]) -> Result<Vec<RawFace>, HullError> {
    if lifted.len() < 3 {
        return Err(HullError::TooFewPoints);
    }
    let pts: Vec<Pt> = lifted.iter().map(|p| p.0).collect();
    let hull = convex_hull(&pts);
    if hull.len() < 3 {
        return Err(HullError::Collinear);
    }
    let lift_of = |p: Pt| *lifted.iter().find(|q| q.0 == p).unwrap();
    // Lower chain along the first boundary edge: from v0, the collinear
    // point with the least slope.
    let (v0, v1) = (hull[0], hull[1]);
    let a = lift_of(v0);
    let mut b = lift_of(v1);
    for &q in lifted {
        if q.0 == v0 || orient(v0, v1, q.0) != 0 {
            continue;
        }
        let between = (q.0 .0 - v0.0) * (v1.0 - v0.0) + (q.0 .1 - v0.1) * (v1.1 - v0.1) > 0;
        if !between {
            continue;
        }
        // slope(q) < slope(b) with distances measured along the edge
        let dq = ((q.0 .0 - v0.0).abs() + (q.0 .1 - v0.1).abs()) as i128;
        let db = ((b.0 .0 - v0.0).abs() + (b.0 .1 - v0.1).abs()) as i128;
        let lhs = (q.1 - a.1) as i128 * db;
        let rhs = (b.1 - a.1) as i128 * dq;
        if lhs < rhs || (lhs == rhs && dq < db) {
            b = q;
        }
    }
    let c = wrap(lifted, a, b).ok_or(HullError::Collinear)?;
    let first = face_from(lifted, a, b, c);

    let mut seen: BTreeSet<Vec<Pt>> = BTreeSet::new();
    let mut faces = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(first.vertices.clone());
    queue.push_back(first);
    while let Some(f) = queue.pop_front() {
        let n = f.vertices.len();
        for k in 0..n {
            let (p, q) = (f.vertices[k], f.vertices[(k + 1) % n]);
            let (lp, lq) = (lift_of(p), lift_of(q));
            if let Some(c) = wrap(lifted, lq, lp) {
                let g = face_from(lifted, lq, lp, c);
                if seen.insert(g.vertices.clone()) {
                    queue.push_back(g);
                }
            }
        }
        faces.push(f);
    }
    faces.sort_by(|a, b| (a.vertices.iter().min(), &a.vertices).cmp(&(b.vertices.iter().min(), &b.vertices)));
    Ok(faces)
}
