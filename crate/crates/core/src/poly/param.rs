use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::print::{self, Rendered};
use super::{powers, Coefficient, ParamPoly, Poly, PolyError, Rational, SparsePoly};

/// Univariate polynomial in `t`, dense, lowest power first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TPoly {
    coeffs: Vec<Rational>,
}

impl TPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        TPoly::new(vec![c])
    }

    /// `c * t^k`
    pub fn term(c: Rational, k: u32) -> Self {
        let mut v = vec![Rational::zero(); k as usize];
        v.push(c);
        TPoly::new(v)
    }

    pub fn t() -> Self {
        TPoly::term(Rational::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<u32> {
        (!self.coeffs.is_empty()).then(|| self.coeffs.len() as u32 - 1)
    }

    /// Lowest power of `t` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| k as u32)
    }

    /// Nonzero terms as `(power, coefficient)`, lowest first.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u32, c))
    }

    pub fn eval(&self, t0: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t0 + c)
    }

    /// Multiply by `t^k` for a possibly negative `k`; `None` if a negative
    /// power would appear.
    pub fn shift(&self, k: i64) -> Option<Self> {
        if self.coeffs.is_empty() {
            return Some(self.clone());
        }
        if k >= 0 {
            let mut v = vec![Rational::zero(); k as usize];
            v.extend(self.coeffs.iter().cloned());
            return Some(TPoly::new(v));
        }
        let drop = (-k) as usize;
        if (self.valuation()? as usize) < drop {
            return None;
        }
        Some(TPoly::new(self.coeffs[drop..].to_vec()))
    }
}

impl Zero for TPoly {
    fn zero() -> Self {
        TPoly { coeffs: vec![] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for TPoly {
    fn one() -> Self {
        TPoly::constant(Rational::one())
    }
}

impl Add for TPoly {
    type Output = TPoly;
    fn add(self, rhs: TPoly) -> TPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        TPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) + rhs.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for TPoly {
    type Output = TPoly;
    fn sub(self, rhs: TPoly) -> TPoly {
        self + (-rhs)
    }
}

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for TPoly {
    type Output = TPoly;
    fn mul(self, rhs: TPoly) -> TPoly {
        if self.is_zero() || rhs.is_zero() {
            return TPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in rhs.coeffs.iter().enumerate() {
                v[a + b] += ca * cb;
            }
        }
        TPoly::new(v)
    }
}

impl Coefficient for TPoly {
    fn from_rational(r: Rational) -> Self {
        TPoly::constant(r)
    }

    fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn render(&self) -> Rendered {
        print::render_tpoly(self)
    }
}

impl ParamPoly {
    /// Substitute `t = t0`.
    pub fn specialize(&self, t0: &Rational) -> SparsePoly {
        Poly::from_terms(self.terms().map(|(m, c)| (m.i, m.j, c.eval(t0))))
    }

    /// `t^gamma * f(t^alpha * x, t^beta * y, t)`; fails if a negative power
    /// of `t` would appear.
    pub fn quasihomothety(&self, alpha: i64, beta: i64, gamma: i64) -> Result<ParamPoly, PolyError> {
        let mut terms = Vec::with_capacity(self.len());
        for (m, c) in self.terms() {
            let e = gamma + alpha * m.i as i64 + beta * m.j as i64;
            let shifted = c
                .shift(e)
                .ok_or(PolyError::NegativeTPower { i: m.i, j: m.j })?;
            terms.push((m.i, m.j, shifted));
        }
        Ok(Poly::from_terms(terms))
    }

    /// Coefficient-wise `t`-valuation: the smallest power of `t` present.
    pub fn t_valuation(&self) -> Option<u32> {
        self.terms().filter_map(|(_, c)| c.valuation()).min()
    }
}

impl SparsePoly {
    /// `s^gamma * f(s^alpha * x, s^beta * y)` at a nonzero rational `s`.
    pub fn quasihomothety_at(&self, s: &Rational, alpha: i64, beta: i64, gamma: i64) -> SparsePoly {
        assert!(!s.is_zero(), "quasihomothety needs a nonzero scale");
        let p = |e: i64| {
            if e >= 0 {
                num_traits::pow(s.clone(), e as usize)
            } else {
                num_traits::pow(s.recip(), (-e) as usize)
            }
        };
        let (mi, mj) = self.max_exponents();
        let xs = powers(&p(alpha), mi);
        let ys = powers(&p(beta), mj);
        let g = p(gamma);
        Poly::from_terms(
            self.terms()
                .map(|(m, c)| (m.i, m.j, c * &xs[m.i as usize] * &ys[m.j as usize] * &g)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, parse_param, rat};

    #[test]
    fn shift_and_valuation() {
        let p = TPoly::new(vec![int(0), int(0), int(3), int(1)]);
        assert_eq!(p.valuation(), Some(2));
        assert_eq!(p.shift(-2).unwrap(), TPoly::new(vec![int(3), int(1)]));
        assert!(p.shift(-3).is_none());
        assert_eq!(p.eval(&rat(1, 2)), rat(3, 4) + rat(1, 8));
    }

    #[test]
    fn quasihomothety_drops_face_level() {
        let f = parse_param("x^2*y^2 + t*x^3*y^2").unwrap();
        assert!(f.quasihomothety(-1, 0, 0).is_err());
        let h = f.quasihomothety(-1, 0, 2).unwrap();
        assert_eq!(h, parse_param("x^2*y^2*(1+x)").unwrap());
        let s = f.specialize(&rat(1, 2)).quasihomothety_at(&rat(1, 2), -1, 0, 2);
        assert_eq!(s, h.specialize(&rat(1, 2)));
    }
}
