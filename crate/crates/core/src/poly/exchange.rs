//! Line-oriented exchange format.
//!
//! One term per line: `num/den i j` for rational polynomials and
//! `num/den i j k` for a `t^k` part of a parameter polynomial. Blank lines
//! and lines starting with `#` are ignored. Terms are written in canonical
//! order.

use num_traits::Zero;

use super::print::rational_str;
use super::{Coefficient, Poly, PolyError, Rational, TPoly};

pub trait ExchangeCoefficient: Coefficient {
    /// Number of integer fields after the coefficient.
    const FIELDS: usize;
    fn lines(&self, i: u32, j: u32) -> Vec<String>;
    fn from_field(c: Rational, t_exp: Option<u32>) -> Self;
}

impl ExchangeCoefficient for Rational {
    const FIELDS: usize = 2;

    fn lines(&self, i: u32, j: u32) -> Vec<String> {
        vec![format!("{} {i} {j}", fraction(self))]
    }

    fn from_field(c: Rational, _: Option<u32>) -> Self {
        c
    }
}

impl ExchangeCoefficient for TPoly {
    const FIELDS: usize = 3;

    fn lines(&self, i: u32, j: u32) -> Vec<String> {
        self.nonzero_terms()
            .map(|(k, c)| format!("{} {i} {j} {k}", fraction(c)))
            .collect()
    }

    fn from_field(c: Rational, t_exp: Option<u32>) -> Self {
        TPoly::term(c, t_exp.unwrap_or(0))
    }
}

fn fraction(r: &Rational) -> String {
    let s = rational_str(r);
    if s.contains('/') {
        s
    } else {
        format!("{s}/1")
    }
}

pub fn write_exchange<C: ExchangeCoefficient>(p: &Poly<C>) -> String {
    let mut out = String::new();
    for (m, c) in p.terms() {
        for line in c.lines(m.i, m.j) {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

pub fn read_exchange<C: ExchangeCoefficient>(src: &str) -> Result<Poly<C>, PolyError> {
    let mut terms = Vec::new();
    for (n, raw) in src.lines().enumerate() {
        let line = n + 1;
        let err = |msg: &str| PolyError::Exchange {
            line,
            msg: msg.to_string(),
        };
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != C::FIELDS + 1 {
            return Err(err(&format!("expected {} fields", C::FIELDS + 1)));
        }
        let c = parse_fraction(fields[0]).ok_or_else(|| err("bad coefficient"))?;
        let ints: Vec<u32> = fields[1..]
            .iter()
            .map(|f| f.parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| err("exponents must be non-negative integers"))?;
        terms.push((ints[0], ints[1], C::from_field(c, ints.get(2).copied())));
    }
    Ok(Poly::from_terms(terms))
}

/// `n` or `n/d` with integer `n`, `d` and `d != 0`.
pub fn parse_fraction(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse().ok()?, d.parse().ok()?),
        None => (s.parse().ok()?, 1.into()),
    };
    let d: num_bigint::BigInt = d;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_param, parse_poly, ParamPoly, SparsePoly};

    #[test]
    fn round_trip() {
        let f = parse_poly("x^2*y^2*(1/2 - x + 3*y)").unwrap();
        let s = write_exchange(&f);
        assert_eq!(s, "1/2 2 2\n-1/1 3 2\n3/1 2 3\n");
        assert_eq!(read_exchange::<Rational>(&s).unwrap(), f);
        let g: ParamPoly = parse_param("x*(1+t^2) - t*y").unwrap();
        assert_eq!(read_exchange::<TPoly>(&write_exchange(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            read_exchange::<Rational>("1/2 1\n"),
            Err(PolyError::Exchange { line: 1, .. })
        ));
        assert!(read_exchange::<Rational>("# c\n1/0 1 1").is_err());
        let p: SparsePoly = read_exchange("# comment\n\n2 0 0\n").unwrap();
        assert_eq!(p, parse_poly("2").unwrap());
    }
}
