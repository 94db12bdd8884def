//! Liftings, the regular subdivisions they induce, and Viro patchworking
//! polynomials.
//!
//! A lifting assigns a non-negative integer to each lattice point of a
//! domain. The projections of the lower faces of the lifted point set form
//! the induced subdivision. For a face lying on the plane
//! `lambda = a*i + b*j + c`, the quasihomothety with `(alpha, beta, gamma) =
//! (-a, -b, -c)` turns the patchworking polynomial into one whose `t = 0`
//! value is the restriction of `f` to that face.

mod hull;
pub mod lp;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::{LatticeSet, ParamPoly, Poly, PolyError, Rational, SparsePoly, TPoly};

pub use hull::{convex_hull, orient, Pt};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatchworkError {
    #[error("lifting value at ({0}, {1}) is negative")]
    NegativeLift(i64, i64),
    #[error("lifting value at ({0}, {1}) does not fit in 64 bits")]
    Overflow(i64, i64),
    #[error("monomial x^{0}*y^{1} lies outside the lifting domain")]
    NotCovered(i64, i64),
    #[error("the lifted points do not span a plane")]
    Degenerate,
    #[error("face {0} has a non-integral normal")]
    NonIntegralNormal(usize),
    #[error("no face with index {0}")]
    NoSuchFace(usize),
    #[error("lifting CSV, line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Non-negative integer heights on a finite set of lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifting {
    values: BTreeMap<Pt, i64>,
}

impl Lifting {
    pub fn new(values: BTreeMap<Pt, i64>) -> Result<Self, PatchworkError> {
        if let Some((p, _)) = values.iter().find(|(_, v)| **v < 0) {
            return Err(PatchworkError::NegativeLift(p.0, p.1));
        }
        Ok(Lifting { values })
    }

    /// Scale rational heights by the least common denominator. Returns the
    /// lifting and the scale factor.
    pub fn from_rational(values: &BTreeMap<Pt, Rational>) -> Result<(Self, BigInt), PatchworkError> {
        let l = values
            .values()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let mut out = BTreeMap::new();
        for (p, v) in values {
            if v.is_negative() {
                return Err(PatchworkError::NegativeLift(p.0, p.1));
            }
            let n = (v * Rational::from_integer(l.clone())).to_integer();
            out.insert(*p, n.to_i64().ok_or(PatchworkError::Overflow(p.0, p.1))?);
        }
        Ok((Lifting::new(out)?, l))
    }

    /// Parse `i,j,lambda` lines; `lambda` may be a fraction, in which case
    /// all heights are scaled to integers.
    pub fn from_csv(src: &str) -> Result<Self, PatchworkError> {
        let mut values = BTreeMap::new();
        for (n, raw) in src.lines().enumerate() {
            let line = n + 1;
            let err = |msg: &str| PatchworkError::Csv {
                line,
                msg: msg.to_string(),
            };
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') || body.eq_ignore_ascii_case("i,j,lambda") {
                continue;
            }
            let fields: Vec<&str> = body.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(err("expected i,j,lambda"));
            }
            let i: i64 = fields[0].parse().map_err(|_| err("bad i"))?;
            let j: i64 = fields[1].parse().map_err(|_| err("bad j"))?;
            let v = crate::poly::parse_fraction(fields[2]).ok_or_else(|| err("bad lambda"))?;
            if values.insert((i, j), v).is_some() {
                return Err(err("duplicate point"));
            }
        }
        Ok(Lifting::from_rational(&values)?.0)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j,lambda\n");
        for ((i, j), v) in &self.values {
            s.push_str(&format!("{i},{j},{v}\n"));
        }
        s
    }

    pub fn get(&self, p: Pt) -> Option<i64> {
        self.values.get(&p).copied()
    }

    pub fn domain(&self) -> LatticeSet {
        self.values.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Pt, i64)> + '_ {
        self.values.iter().map(|(p, v)| (*p, *v))
    }
}

/// Plane `lambda = a*i + b*j + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plane {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Polygon vertices, counter-clockwise from the smallest.
    pub vertices: Vec<Pt>,
    /// Lattice points of the domain lifted onto this face.
    pub points: Vec<Pt>,
    pub plane: Option<Plane>,
}

impl Face {
    pub fn mask(&self) -> LatticeSet {
        self.points.iter().copied().collect()
    }

    /// Twice the Euclidean area.
    pub fn double_area(&self) -> i64 {
        let v = &self.vertices;
        let n = v.len();
        (0..n)
            .map(|k| v[k].0 * v[(k + 1) % n].1 - v[(k + 1) % n].0 * v[k].1)
            .sum::<i64>()
            .abs()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub faces: Vec<Face>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct FaceJson {
    pub vertices: Vec<[i64; 2]>,
    pub normal: Option<[i64; 2]>,
    pub level: Option<i64>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct SubdivisionJson {
    pub faces: Vec<FaceJson>,
}

impl Subdivision {
    /// A subdivision given only by its polygons, e.g. a claimed
    /// triangulation.
    pub fn from_polygons(polys: &[Vec<Pt>]) -> Self {
        let mut faces: Vec<Face> = polys
            .iter()
            .map(|p| Face {
                vertices: convex_hull(p),
                points: p.clone(),
                plane: None,
            })
            .collect();
        sort_faces(&mut faces);
        Subdivision { faces }
    }

    pub fn vertex_sets(&self) -> Vec<Vec<Pt>> {
        self.faces.iter().map(|f| f.vertices.clone()).collect()
    }

    pub fn to_json(&self) -> SubdivisionJson {
        SubdivisionJson {
            faces: (0..self.faces.len())
                .map(|k| {
                    let f = &self.faces[k];
                    let nl = face_normal(self, k).ok();
                    FaceJson {
                        vertices: f.vertices.iter().map(|p| [p.0, p.1]).collect(),
                        normal: nl.as_ref().map(|n| [n.alpha, n.beta]),
                        level: nl.map(|n| n.level),
                    }
                })
                .collect(),
        }
    }
}

fn sort_faces(faces: &mut [Face]) {
    faces.sort_by(|a, b| {
        (a.vertices.iter().min(), &a.vertices).cmp(&(b.vertices.iter().min(), &b.vertices))
    });
}

fn plane_through(basis: &[(Pt, i64); 3]) -> Plane {
    let [(p1, l1), (p2, l2), (p3, l3)] = *basis;
    let r = |v: i64| Rational::from_integer(BigInt::from(v));
    let d = orient(p1, p2, p3);
    let d = Rational::from_integer(BigInt::from(d));
    let (di2, dj2, dl2) = (p2.0 - p1.0, p2.1 - p1.1, l2 - l1);
    let (di3, dj3, dl3) = (p3.0 - p1.0, p3.1 - p1.1, l3 - l1);
    let a = r(dl2 * dj3 - dl3 * dj2) / &d;
    let b = r(di2 * dl3 - di3 * dl2) / &d;
    let c = r(l1) - &a * r(p1.0) - &b * r(p1.1);
    Plane { a, b, c }
}

/// Subdivision induced by a lifting: projections of the lower faces.
pub fn regular_subdivision(lift: &Lifting) -> Result<Subdivision, PatchworkError> {
    let lifted: Vec<(Pt, i64)> = lift.iter().collect();
    let raw = hull::lower_faces(&lifted).map_err(|_| PatchworkError::Degenerate)?;
    let mut faces: Vec<Face> = raw
        .into_iter()
        .map(|f| Face {
            plane: Some(plane_through(&f.basis)),
            vertices: f.vertices,
            points: f.points,
        })
        .collect();
    sort_faces(&mut faces);
    Ok(Subdivision { faces })
}

/// Whether `lift` induces exactly the polygons of `claimed`.
pub fn validate_inducing(lift: &Lifting, claimed: &Subdivision) -> bool {
    let Ok(sub) = regular_subdivision(lift) else {
        return false;
    };
    let mut a = sub.vertex_sets();
    let mut b = claimed.vertex_sets();
    a.sort();
    b.sort();
    a == b
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceNormal {
    pub alpha: i64,
    pub beta: i64,
    /// Common value of `alpha*i + beta*j + lambda(i, j)` on the face.
    pub level: i64,
}

/// The primitive data `(alpha, beta, r)` of a lower face: the lifted face
/// lies on `lambda = -alpha*i - beta*j + r`.
pub fn face_normal(sub: &Subdivision, face: usize) -> Result<FaceNormal, PatchworkError> {
    let f = sub.faces.get(face).ok_or(PatchworkError::NoSuchFace(face))?;
    let plane = f.plane.as_ref().ok_or(PatchworkError::NonIntegralNormal(face))?;
    let as_int = |v: &Rational| {
        v.is_integer()
            .then(|| v.to_integer().to_i64())
            .flatten()
            .ok_or(PatchworkError::NonIntegralNormal(face))
    };
    Ok(FaceNormal {
        alpha: -as_int(&plane.a)?,
        beta: -as_int(&plane.b)?,
        level: as_int(&plane.c)?,
    })
}

/// `f_t = sum a_ij t^lambda(i,j) x^i y^j`.
pub fn patchworking_polynomial(f: &SparsePoly, lift: &Lifting) -> Result<ParamPoly, PatchworkError> {
    let mut terms = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        let p = (m.i as i64, m.j as i64);
        let l = lift.get(p).ok_or(PatchworkError::NotCovered(p.0, p.1))?;
        terms.push((m.i, m.j, TPoly::term(c.clone(), l as u32)));
    }
    Ok(Poly::from_terms(terms))
}

/// Terms of `f_t` whose lattice point is lifted to height `r`.
pub fn level_restriction(ft: &ParamPoly, lift: &Lifting, r: i64) -> ParamPoly {
    Poly::from_terms(
        ft.terms()
            .filter(|(m, _)| lift.get((m.i as i64, m.j as i64)) == Some(r))
            .map(|(m, c)| (m.i, m.j, c.clone())),
    )
}

/// Apply the face's quasihomothety to `f_t`. Returns the flattened
/// polynomial and its value at `t = 0`, the tile polynomial of the face.
pub fn flatten_face(
    ft: &ParamPoly,
    sub: &Subdivision,
    face: usize,
) -> Result<(ParamPoly, SparsePoly), PatchworkError> {
    let n = face_normal(sub, face)?;
    let flat = ft.quasihomothety(n.alpha, n.beta, -n.level)?;
    let tile = flat.specialize(&Rational::zero());
    Ok((flat, tile))
}
