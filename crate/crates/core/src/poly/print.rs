use num_traits::One;

use super::{Coefficient, Monomial, Poly, Rational, TPoly};

/// How a coefficient prints in front of a monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rendered {
    One,
    MinusOne,
    /// A single factor such as `3`, `-1/2` or `t^2`.
    Atom(String),
    /// A sum, which needs parentheses next to a monomial.
    Sum(String),
}

pub(super) fn render_rational(r: &Rational) -> Rendered {
    if r.is_one() {
        Rendered::One
    } else if (-r).is_one() {
        Rendered::MinusOne
    } else {
        Rendered::Atom(rational_str(r))
    }
}

pub(crate) fn rational_str(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn t_power(k: u32) -> String {
    match k {
        1 => "t".to_string(),
        _ => format!("t^{k}"),
    }
}

fn t_term(c: &Rational, k: u32) -> String {
    if k == 0 {
        return rational_str(c);
    }
    match render_rational(c) {
        Rendered::One => t_power(k),
        Rendered::MinusOne => format!("-{}", t_power(k)),
        Rendered::Atom(s) | Rendered::Sum(s) => format!("{s}*{}", t_power(k)),
    }
}

pub(super) fn render_tpoly(p: &TPoly) -> Rendered {
    let terms: Vec<(u32, &Rational)> = p.nonzero_terms().collect();
    match terms.as_slice() {
        [] => Rendered::Atom("0".into()),
        [(0, c)] => render_rational(c),
        [(k, c)] => {
            if c.is_one() {
                Rendered::Atom(t_power(*k))
            } else {
                Rendered::Atom(t_term(c, *k))
            }
        }
        _ => Rendered::Sum(join(terms.iter().map(|(k, c)| t_term(c, *k)))),
    }
}

fn join(parts: impl Iterator<Item = String>) -> String {
    let mut out = String::new();
    for (n, s) in parts.enumerate() {
        if n > 0 && !s.starts_with('-') {
            out.push('+');
        }
        out.push_str(&s);
    }
    out
}

fn monomial_str(m: &Monomial) -> String {
    let var = |name: &str, e: u32| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    [var("x", m.i), var("y", m.j)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("*")
}

fn term_str(m: &Monomial, r: Rendered) -> String {
    let ms = monomial_str(m);
    if ms.is_empty() {
        return match r {
            Rendered::One => "1".into(),
            Rendered::MinusOne => "-1".into(),
            Rendered::Atom(s) => s,
            Rendered::Sum(s) => format!("({s})"),
        };
    }
    match r {
        Rendered::One => ms,
        Rendered::MinusOne => format!("-{ms}"),
        Rendered::Atom(s) => format!("{s}*{ms}"),
        Rendered::Sum(s) => format!("({s})*{ms}"),
    }
}

pub(super) fn expanded<C: Coefficient>(p: &Poly<C>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    join(p.terms().map(|(m, c)| term_str(m, c.render())))
}

pub(super) fn canonical<C: Coefficient>(p: &Poly<C>) -> String {
    let (a, b) = p.monomial_content();
    if p.len() < 2 || (a, b) == (0, 0) {
        return expanded(p);
    }
    let inner = expanded(&p.divide_monomial(a, b));
    format!("{}*({inner})", monomial_str(&Monomial::new(a, b)))
}
