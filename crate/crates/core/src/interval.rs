//! Interval arithmetic over `f64` with outward rounding, plus exact-rational
//! boxes.
//!
//! Every floating-point operation is checked with an error-free transform
//! (two-sum, two-product) and the result endpoint is pushed one ulp in
//! the direction of the true value only when the operation was inexact. Exact
//! operations therefore produce tight point results, which keeps evaluations
//! on dyadic inputs exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::Rational;

/// Values below this magnitude may have lost bits to gradual underflow, so
/// the error-free transforms are not trusted there.
const UNDERFLOW_GUARD: f64 = 1e-290;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn sum_down_up(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if !s.is_finite() {
        return if s.is_nan() {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else if s > 0.0 {
            (f64::MAX, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::MIN)
        };
    }
    // Knuth two-sum: s + err == a + b exactly.
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    if err > 0.0 {
        (s, s.next_up())
    } else if err < 0.0 {
        (s.next_down(), s)
    } else {
        (s, s)
    }
}

/// Veltkamp split: `a == hi + lo` with both halves of 26 significant bits.
fn split(a: f64) -> (f64, f64) {
    let c = 134_217_729.0 * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

/// Magnitudes beyond this could overflow inside the split.
const SPLIT_GUARD: f64 = 1e300;

fn prod_down_up(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if !p.is_finite() {
        return if p.is_nan() {
            if a == 0.0 || b == 0.0 {
                (0.0, 0.0)
            } else {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
        } else if p > 0.0 {
            (f64::MAX, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::MIN)
        };
    }
    if a == 0.0 || b == 0.0 {
        return (0.0, 0.0);
    }
    if p.abs() < UNDERFLOW_GUARD || a.abs() > SPLIT_GUARD || b.abs() > SPLIT_GUARD {
        return (p.next_down(), p.next_up());
    }
    // Dekker two-product: p + err == a * b exactly.
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    if err > 0.0 {
        (p, p.next_up())
    } else if err < 0.0 {
        (p.next_down(), p)
    } else {
        (p, p)
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Self::ENTIRE;
        }
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self::new(v, v)
    }

    /// Tightest `f64` interval containing the rational `r`.
    pub fn enclose(r: &Rational) -> Self {
        let Some(v) = r.to_f64() else {
            return Self::ENTIRE;
        };
        if !v.is_finite() {
            return if r.is_negative() {
                Interval::new(f64::NEG_INFINITY, f64::MIN)
            } else {
                Interval::new(f64::MAX, f64::INFINITY)
            };
        }
        let Some(back) = Rational::from_float(v) else {
            return Self::ENTIRE;
        };
        match back.cmp(r) {
            std::cmp::Ordering::Equal => Interval::point(v),
            std::cmp::Ordering::Less => Interval::new(v, v.next_up()),
            std::cmp::Ordering::Greater => Interval::new(v.next_down(), v),
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo).next_up()
    }

    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::new(lo, hi))
    }

    /// `self` lies strictly inside `other`.
    pub fn strictly_inside(&self, other: &Interval) -> bool {
        self.lo > other.lo && self.hi < other.hi
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        self.lo >= other.lo && self.hi <= other.hi
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval::new(0.0, self.lo.abs().max(self.hi))
        }
    }

    pub fn powi(&self, n: u32) -> Interval {
        match n {
            0 => Interval::point(1.0),
            1 => *self,
            _ if n % 2 == 0 => {
                let a = self.abs();
                Interval::new(pow_bound(a.lo, n).0, pow_bound(a.hi, n).1)
            }
            _ => Interval::new(pow_bound(self.lo, n).0, pow_bound(self.hi, n).1),
        }
    }
}

/// Writes enclosures of `iv^0, iv^1, ...` into `out`, with the tight
/// treatment of even powers.
pub fn fill_powers(iv: Interval, out: &mut [Interval]) {
    let mut lo = Interval::point(1.0);
    let mut hi = Interval::point(1.0);
    let (pl, ph) = (Interval::point(iv.lo), Interval::point(iv.hi));
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            lo = lo * pl;
            hi = hi * ph;
        }
        *slot = if k % 2 == 1 {
            Interval::new(lo.lo, hi.hi)
        } else if iv.lo >= 0.0 {
            Interval::new(lo.lo, hi.hi)
        } else if iv.hi <= 0.0 {
            Interval::new(hi.lo, lo.hi)
        } else if k == 0 {
            Interval::point(1.0)
        } else {
            Interval::new(0.0, lo.hi.max(hi.hi))
        };
    }
}

/// Lower and upper bounds of `v^n` by repeated directed multiplication.
fn pow_bound(v: f64, n: u32) -> (f64, f64) {
    let mut acc = Interval::point(1.0);
    let base = Interval::point(v);
    for _ in 0..n {
        acc = acc * base;
    }
    (acc.lo, acc.hi)
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        let (lo, _) = sum_down_up(self.lo, rhs.lo);
        let (_, hi) = sum_down_up(self.hi, rhs.hi);
        Interval::new(lo, hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if self.lo == self.hi || rhs.lo == rhs.hi {
            let (v, iv) = if self.lo == self.hi { (self.lo, rhs) } else { (rhs.lo, self) };
            let a = prod_down_up(v, iv.lo);
            let b = prod_down_up(v, iv.hi);
            return Interval::new(a.0.min(b.0), a.1.max(b.1));
        }
        let cands = [
            prod_down_up(self.lo, rhs.lo),
            prod_down_up(self.lo, rhs.hi),
            prod_down_up(self.hi, rhs.lo),
            prod_down_up(self.hi, rhs.hi),
        ];
        let lo = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let hi = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatRange {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatRange {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "inverted range");
        RatRange { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        RatRange {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn overlaps(&self, other: &RatRange) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn subset_of(&self, other: &RatRange) -> bool {
        self.lo >= other.lo && self.hi <= other.hi
    }

    /// Smallest `f64` interval containing this range.
    pub fn to_interval(&self) -> Interval {
        Interval::new(Interval::enclose(&self.lo).lo, Interval::enclose(&self.hi).hi)
    }

    pub fn from_interval(iv: &Interval) -> Option<Self> {
        Some(RatRange::new(
            Rational::from_float(iv.lo)?,
            Rational::from_float(iv.hi)?,
        ))
    }

    pub fn add(&self, o: &RatRange) -> RatRange {
        RatRange::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &RatRange) -> RatRange {
        RatRange::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &RatRange) -> RatRange {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatRange::new(lo, hi)
    }

    pub fn scale(&self, k: &Rational) -> RatRange {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            RatRange::new(a, b)
        } else {
            RatRange::new(b, a)
        }
    }

    pub fn powi(&self, n: u32) -> RatRange {
        if n == 0 {
            return RatRange::point(Rational::from_integer(1.into()));
        }
        let pw = |v: &Rational| num_traits::pow(v.clone(), n as usize);
        if n % 2 == 1 {
            RatRange::new(pw(&self.lo), pw(&self.hi))
        } else if !self.lo.is_negative() {
            RatRange::new(pw(&self.lo), pw(&self.hi))
        } else if !self.hi.is_positive() {
            RatRange::new(pw(&self.hi), pw(&self.lo))
        } else {
            let m = self.lo.abs().max(self.hi.abs());
            RatRange::new(Rational::zero(), pw(&m))
        }
    }
}

impl fmt::Display for RatRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Axis-aligned closed box with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x: RatRange,
    pub y: RatRange,
}

impl Rect {
    pub fn new(x: RatRange, y: RatRange) -> Self {
        Rect { x, y }
    }

    pub fn from_ints(x0: i64, x1: i64, y0: i64, y1: i64) -> Self {
        let r = |v: i64| Rational::from_integer(v.into());
        Rect::new(RatRange::new(r(x0), r(x1)), RatRange::new(r(y0), r(y1)))
    }

    /// `[-r, r]^2`
    pub fn square(r: i64) -> Self {
        Rect::from_ints(-r, r, -r, r)
    }

    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x.overlaps(&other.x) && self.y.overlaps(&other.y)
    }

    pub fn subset_of(&self, other: &Rect) -> bool {
        self.x.subset_of(&other.x) && self.y.subset_of(&other.y)
    }

    pub fn contains(&self, px: &Rational, py: &Rational) -> bool {
        self.x.contains(px) && self.y.contains(py)
    }

    /// The closed box avoids both coordinate axes.
    pub fn off_axes(&self) -> bool {
        !self.x.contains_zero() && !self.y.contains_zero()
    }

    pub fn hull(&self, other: &Rect) -> Rect {
        Rect::new(
            RatRange::new(
                self.x.lo.clone().min(other.x.lo.clone()),
                self.x.hi.clone().max(other.x.hi.clone()),
            ),
            RatRange::new(
                self.y.lo.clone().min(other.y.lo.clone()),
                self.y.hi.clone().max(other.y.hi.clone()),
            ),
        )
    }

    /// Image under `(x, y) -> (sx * x, sy * y)`.
    pub fn scaled(&self, sx: &Rational, sy: &Rational) -> Rect {
        Rect::new(self.x.scale(sx), self.y.scale(sy))
    }

    pub fn to_fbox(&self) -> FBox {
        FBox::new(self.x.to_interval(), self.y.to_interval())
    }

    pub fn center_f64(&self) -> (f64, f64) {
        (
            self.x.mid().to_f64().unwrap_or(f64::NAN),
            self.y.mid().to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.x, self.y)
    }
}

/// Box with `f64` interval sides; the solver's working representation.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FBox {
    pub x: Interval,
    pub y: Interval,
}

impl FBox {
    pub fn new(x: Interval, y: Interval) -> Self {
        FBox { x, y }
    }

    pub fn width(&self) -> f64 {
        self.x.width().max(self.y.width())
    }

    pub fn mid(&self) -> (f64, f64) {
        (self.x.mid(), self.y.mid())
    }

    pub fn contains_box(&self, other: &FBox) -> bool {
        other.x.subset_of(&self.x) && other.y.subset_of(&self.y)
    }

    pub fn intersect(&self, other: &FBox) -> Option<FBox> {
        Some(FBox::new(self.x.intersect(&other.x)?, self.y.intersect(&other.y)?))
    }

    pub fn overlaps(&self, other: &FBox) -> bool {
        self.intersect(other).is_some()
    }

    pub fn hull(&self, other: &FBox) -> FBox {
        FBox::new(self.x.hull(&other.x), self.y.hull(&other.y))
    }

    pub fn strictly_inside(&self, other: &FBox) -> bool {
        self.x.strictly_inside(&other.x) && self.y.strictly_inside(&other.y)
    }

    /// Split at the midpoint of both sides.
    pub fn quarter(&self) -> [FBox; 4] {
        let (mx, my) = self.mid();
        let xl = Interval::new(self.x.lo, mx);
        let xr = Interval::new(mx, self.x.hi);
        let yl = Interval::new(self.y.lo, my);
        let yr = Interval::new(my, self.y.hi);
        [
            FBox::new(xl, yl),
            FBox::new(xr, yl),
            FBox::new(xl, yr),
            FBox::new(xr, yr),
        ]
    }

    pub fn touches_axis(&self) -> bool {
        self.x.contains_zero() || self.y.contains_zero()
    }

    pub fn to_rect(&self) -> Rect {
        Rect::new(
            RatRange::from_interval(&self.x).expect("finite box"),
            RatRange::from_interval(&self.y).expect("finite box"),
        )
    }
}
