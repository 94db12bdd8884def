//! Sparse bivariate polynomials.
//!
//! [`Poly`] is generic over its coefficient ring. Two instances are used
//! throughout: [`SparsePoly`] with exact rational coefficients and
//! [`ParamPoly`] whose coefficients are polynomials in a parameter `t`.
//! Terms are stored in the canonical graded order of [`Monomial`].

mod exchange;
mod param;
mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::interval::{fill_powers, FBox, Interval, Rect};

pub use exchange::{read_exchange, write_exchange, ExchangeCoefficient};
pub use exchange::parse_fraction;
pub use param::TPoly;
pub use parse::{parse_param, parse_poly};
pub use print::Rendered;

pub type Rational = num_rational::BigRational;

pub type SparsePoly = Poly<Rational>;
pub type ParamPoly = Poly<TPoly>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("non-rational literal at position {pos}; write decimals as fractions")]
    NonRationalLiteral { pos: usize },
    #[error("unknown variable '{name}' at position {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("division by a non-constant at position {pos}")]
    DivisionByNonConstant { pos: usize },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
    #[error("exponent too large at position {pos}")]
    ExponentTooLarge { pos: usize },
    #[error("exchange format, line {line}: {msg}")]
    Exchange { line: usize, msg: String },
    #[error("quasihomothety produces a negative power of t at x^{i}*y^{j}")]
    NegativeTPower { i: u32, j: u32 },
}

/// Exponent pair `x^i * y^j`.
///
/// Ordered by total degree, then by descending `x` exponent, so `1 < x < y <
/// x^2 < x*y < y^2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub fn new(i: u32, j: u32) -> Self {
        Monomial { i, j }
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.i.cmp(&self.i))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Finite set of lattice points in `Z^2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LatticeSet(pub BTreeSet<(i64, i64)>);

impl LatticeSet {
    pub fn contains(&self, p: (i64, i64)) -> bool {
        self.0.contains(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(i64, i64)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lattice points of the triangle `i, j >= 0, i + j <= d`.
    pub fn simplex(d: i64) -> Self {
        (0..=d)
            .flat_map(|i| (0..=d - i).map(move |j| (i, j)))
            .collect()
    }
}

impl FromIterator<(i64, i64)> for LatticeSet {
    fn from_iter<T: IntoIterator<Item = (i64, i64)>>(iter: T) -> Self {
        LatticeSet(iter.into_iter().collect())
    }
}

/// Coefficient ring of a [`Poly`].
pub trait Coefficient:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: Rational) -> Self;

    /// The coefficient as a rational, if it is a constant.
    fn as_rational(&self) -> Option<Rational>;

    fn render(&self) -> Rendered;

    fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }
}

impl Coefficient for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn render(&self) -> Rendered {
        print::render_rational(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Poly<C> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: C, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(i, j), c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(C::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(C::one(), 0, 1)
    }

    /// Sum of the given terms; repeated monomials are accumulated.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(Monomial::new(i, j), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| m.degree())
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    pub fn max_exponents(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), m| (a.max(m.i), b.max(m.j)))
    }

    pub fn support(&self) -> LatticeSet {
        self.terms
            .keys()
            .map(|m| (m.i as i64, m.j as i64))
            .collect()
    }

    pub fn partial(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (e, m2) = match v {
                Var::X if m.i > 0 => (m.i, Monomial::new(m.i - 1, m.j)),
                Var::Y if m.j > 0 => (m.j, Monomial::new(m.i, m.j - 1)),
                _ => continue,
            };
            out.add_term(m2, c.clone() * C::from_int(e as i64));
        }
        out
    }

    pub fn dx(&self) -> Self {
        self.partial(Var::X)
    }

    pub fn dy(&self) -> Self {
        self.partial(Var::Y)
    }

    /// Terms whose exponent lies in `mask`.
    pub fn restrict(&self, mask: &LatticeSet) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mask.contains((m.i as i64, m.j as i64)))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.i, m.j, c.clone() * k.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Largest `(a, b)` with `x^a * y^b` dividing every term; `(0, 0)` for zero.
    pub fn monomial_content(&self) -> (u32, u32) {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return (0, 0);
        };
        it.fold((first.i, first.j), |(a, b), m| (a.min(m.i), b.min(m.j)))
    }

    /// Divide by `x^a * y^b`; panics unless the monomial divides every term.
    pub fn divide_monomial(&self, a: u32, b: u32) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    assert!(m.i >= a && m.j >= b, "monomial does not divide");
                    (Monomial::new(m.i - a, m.j - b), c.clone())
                })
                .collect(),
        }
    }

    pub fn shift_monomial(&self, a: u32, b: u32) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.i + a, m.j + b), c.clone()))
                .collect(),
        }
    }

    /// The polynomial with its monomial content removed.
    pub fn strip_monomial(&self) -> Self {
        let (a, b) = self.monomial_content();
        self.divide_monomial(a, b)
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.i, m.j, f(c))))
    }

    /// Canonical string with the monomial content factored out.
    pub fn to_canonical_string(&self) -> String {
        print::canonical(self)
    }

    /// Canonical string without factoring.
    pub fn to_expanded_string(&self) -> String {
        print::expanded(self)
    }
}

impl SparsePoly {
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let (mi, mj) = self.max_exponents();
        let xp = powers(x, mi);
        let yp = powers(y, mj);
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (m, c)| {
                acc + c * &xp[m.i as usize] * &yp[m.j as usize]
            })
    }

    /// Enclosure of the range over a box.
    pub fn eval_interval(&self, r: &Rect) -> Interval {
        IPoly::new(self).eval(&r.to_fbox())
    }

    /// `f(sx * x, sy * y)`
    pub fn scale_vars(&self, sx: &Rational, sy: &Rational) -> Self {
        let (mi, mj) = self.max_exponents();
        let xp = powers(sx, mi);
        let yp = powers(sy, mj);
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.i, m.j, c * &xp[m.i as usize] * &yp[m.j as usize])),
        )
    }

    pub fn to_param(&self) -> ParamPoly {
        self.map_coeffs(|c| TPoly::constant(c.clone()))
    }

    /// Largest absolute coefficient; zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> Rational {
        use num_traits::Signed;
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Scale so that the largest absolute coefficient is 1.
    pub fn normalized(&self) -> Self {
        let m = self.max_abs_coeff();
        if m.is_zero() {
            return self.clone();
        }
        let inv = m.recip();
        self.scale(&inv)
    }
}

pub(crate) fn powers(v: &Rational, n: u32) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Rational::one());
    for k in 0..n as usize {
        let next = &out[k] * v;
        out.push(next);
    }
    out
}

impl<C: Coefficient> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl<'a, C: Coefficient> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a, C: Coefficient> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a, C: Coefficient> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(
                    Monomial::new(m1.i + m2.i, m1.j + m2.j),
                    c1.clone() * c2.clone(),
                );
            }
        }
        out
    }
}

impl<C: Coefficient> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl<C: Coefficient> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $f(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<C: Coefficient> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

/// Interval image of a rational polynomial, prepared for repeated box
/// evaluation.
#[derive(Clone, Debug)]
pub struct IPoly {
    terms: Vec<(u32, u32, Interval)>,
    max_i: u32,
    max_j: u32,
}

impl IPoly {
    pub fn new(p: &SparsePoly) -> Self {
        let (max_i, max_j) = p.max_exponents();
        IPoly {
            terms: p
                .terms()
                .map(|(m, c)| (m.i, m.j, Interval::enclose(c)))
                .collect(),
            max_i,
            max_j,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Natural interval extension of the expanded form.
    pub fn eval(&self, b: &FBox) -> Interval {
        const STACK: usize = 64;
        let (ni, nj) = (self.max_i as usize + 1, self.max_j as usize + 1);
        if ni > STACK || nj > STACK {
            let mut xp = vec![Interval::point(0.0); ni];
            let mut yp = vec![Interval::point(0.0); nj];
            fill_powers(b.x, &mut xp);
            fill_powers(b.y, &mut yp);
            return self.sum(&xp, &yp);
        }
        let mut xp = [Interval::point(0.0); STACK];
        let mut yp = [Interval::point(0.0); STACK];
        fill_powers(b.x, &mut xp[..ni]);
        fill_powers(b.y, &mut yp[..nj]);
        self.sum(&xp, &yp)
    }

    fn sum(&self, xp: &[Interval], yp: &[Interval]) -> Interval {
        self.terms
            .iter()
            .fold(Interval::point(0.0), |acc, &(i, j, c)| {
                acc + c * xp[i as usize] * yp[j as usize]
            })
    }

    pub fn eval_point(&self, x: f64, y: f64) -> Interval {
        self.eval(&FBox::new(Interval::point(x), Interval::point(y)))
    }

    /// Midpoint-coefficient floating evaluation; not rigorous.
    pub fn approx(&self, x: f64, y: f64) -> f64 {
        let mut s = 0.0;
        for &(i, j, c) in &self.terms {
            s += c.mid() * x.powi(i as i32) * y.powi(j as i32);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order() {
        let mut ms = vec![
            Monomial::new(0, 2),
            Monomial::new(1, 1),
            Monomial::new(2, 0),
            Monomial::new(0, 1),
            Monomial::new(1, 0),
            Monomial::new(0, 0),
        ];
        ms.sort();
        let got: Vec<(u32, u32)> = ms.iter().map(|m| (m.i, m.j)).collect();
        assert_eq!(got, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
    }

    #[test]
    fn zero_has_minus_infinite_degree() {
        assert_eq!(SparsePoly::zero().degree(), Degree::MinusInfinity);
        assert!(Degree::MinusInfinity < Degree::Finite(0));
    }

    #[test]
    fn eval_interval_on_point_box_is_tight() {
        let f = parse_poly("x^2+y^2").unwrap();
        let r = Rect::from_ints(0, 0, 2, 2);
        assert_eq!(f.eval_interval(&r), Interval::point(4.0));
    }

    #[test]
    fn derivative_and_content() {
        let f = parse_poly("x^2*y^2*(1+x+y)").unwrap();
        assert_eq!(f.monomial_content(), (2, 2));
        assert_eq!(f.dx(), parse_poly("2*x*y^2+3*x^2*y^2+2*x*y^3").unwrap());
        assert_eq!(f.strip_monomial(), parse_poly("1+x+y").unwrap());
    }
}
