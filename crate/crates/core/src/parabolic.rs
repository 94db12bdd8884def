//! The Hessian polynomial and the special-parabolic system of a polynomial.
//!
//! For `f` with Hessian matrix `Hess(f)`, `H = f_xx f_yy - f_xy^2` and
//! `(E1, E2) = Hess(f) * (-H_y, H_x)`. A point of `{H = 0}` is special
//! parabolic when the tangent direction `(-H_y, H_x)` is asymptotic, which
//! on a smooth point of the parabolic curve is `E1 = E2 = 0`.

use num_traits::{Signed, Zero};

use crate::poly::{Coefficient, ParamPoly, Poly, Rational, SparsePoly, TPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicSystem<C = Rational> {
    pub source: Poly<C>,
    pub fxx: Poly<C>,
    pub fxy: Poly<C>,
    pub fyy: Poly<C>,
    pub h: Poly<C>,
    pub hx: Poly<C>,
    pub hy: Poly<C>,
    pub e1: Poly<C>,
    pub e2: Poly<C>,
    /// `Q_f(-H_y, H_x) = -H_y E1 + H_x E2`.
    pub c: Poly<C>,
}

pub fn build_system<C: Coefficient>(f: &Poly<C>) -> ParabolicSystem<C> {
    let fx = f.dx();
    let fy = f.dy();
    let fxx = fx.dx();
    let fxy = fx.dy();
    let fyy = fy.dy();
    let h = &(&fxx * &fyy) - &(&fxy * &fxy);
    let hx = h.dx();
    let hy = h.dy();
    let e1 = &(&fxy * &hx) - &(&fxx * &hy);
    let e2 = &(&fyy * &hx) - &(&fxy * &hy);
    let c = &(&hx * &e2) - &(&hy * &e1);
    ParabolicSystem {
        source: f.clone(),
        fxx,
        fxy,
        fyy,
        h,
        hx,
        hy,
        e1,
        e2,
        c,
    }
}

impl ParabolicSystem<TPoly> {
    /// Substitute `t = t0` in every component.
    pub fn specialize(&self, t0: &Rational) -> ParabolicSystem {
        let s = |p: &ParamPoly| p.specialize(t0);
        ParabolicSystem {
            source: s(&self.source),
            fxx: s(&self.fxx),
            fxy: s(&self.fxy),
            fyy: s(&self.fyy),
            h: s(&self.h),
            hx: s(&self.hx),
            hy: s(&self.hy),
            e1: s(&self.e1),
            e2: s(&self.e2),
            c: s(&self.c),
        }
    }
}

/// Pointwise classification. `HessianSingular` covers parabolic points
/// where `grad H` vanishes; `zero_hessian` marks the sub-case where the
/// whole Hessian matrix of `f` vanishes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PointClass {
    Elliptic,
    Hyperbolic,
    ParabolicGenericCandidate,
    ParabolicSpecialCandidate,
    HessianSingular { zero_hessian: bool },
}

impl PointClass {
    pub fn tag(&self) -> &'static str {
        match self {
            PointClass::Elliptic => "elliptic",
            PointClass::Hyperbolic => "hyperbolic",
            PointClass::ParabolicGenericCandidate => "parabolic-generic-candidate",
            PointClass::ParabolicSpecialCandidate => "parabolic-special-candidate",
            PointClass::HessianSingular { .. } => "hessian-singular",
        }
    }

    pub fn is_parabolic_degenerate(&self) -> bool {
        matches!(self, PointClass::HessianSingular { zero_hessian: true })
    }
}

pub fn classify_point(sys: &ParabolicSystem, x: &Rational, y: &Rational) -> PointClass {
    let h = sys.h.eval(x, y);
    if h.is_positive() {
        return PointClass::Elliptic;
    }
    if h.is_negative() {
        return PointClass::Hyperbolic;
    }
    if sys.hx.eval(x, y).is_zero() && sys.hy.eval(x, y).is_zero() {
        let zero_hessian = [&sys.fxx, &sys.fxy, &sys.fyy]
            .iter()
            .all(|p| p.eval(x, y).is_zero());
        return PointClass::HessianSingular { zero_hessian };
    }
    if sys.e1.eval(x, y).is_zero() && sys.e2.eval(x, y).is_zero() {
        PointClass::ParabolicSpecialCandidate
    } else {
        PointClass::ParabolicGenericCandidate
    }
}

/// Second fundamental form `Q_f(q)(v)`.
pub fn q_form(f: &SparsePoly, q: (&Rational, &Rational), v: (&Rational, &Rational)) -> Rational {
    let fxx = f.dx().dx().eval(q.0, q.1);
    let fxy = f.dx().dy().eval(q.0, q.1);
    let fyy = f.dy().dy().eval(q.0, q.1);
    let two = Rational::from_integer(2.into());
    fxx * v.0 * v.0 + two * fxy * v.0 * v.1 + fyy * v.1 * v.1
}
