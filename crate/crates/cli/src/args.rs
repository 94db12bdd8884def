use std::fs;
use std::path::Path;

use num_traits::ToPrimitive;

use parabolica::interval::{RatRange, Rect};
use parabolica::poly::{parse_fraction, parse_param, parse_poly, read_exchange, ParamPoly, Rational, SparsePoly, TPoly};

use crate::Failure;

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    parse_fraction(s.trim()).ok_or_else(|| format!("`{s}` is not an exact rational such as 3 or -1/1024"))
}

/// `r` for `[-r, r]^2`, or `x0,x1,y0,y1`.
pub fn parse_rect(s: &str) -> Result<Rect, String> {
    let v = s
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()?;
    let range = |lo: &Rational, hi: &Rational| {
        if lo > hi {
            Err(format!("empty range {lo}..{hi}"))
        } else {
            Ok(RatRange::new(lo.clone(), hi.clone()))
        }
    };
    match v.as_slice() {
        [r] => {
            let r = range(&-r.clone(), r)?;
            Ok(Rect::new(r.clone(), r))
        }
        [x0, x1, y0, y1] => Ok(Rect::new(range(x0, x1)?, range(y0, y1)?)),
        _ => Err("expected `r` or `x0,x1,y0,y1`".into()),
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn source(inline: Option<&str>, file: Option<&Path>) -> Result<(String, bool), Failure> {
    match (inline, file) {
        (Some(s), _) => Ok((s.to_string(), false)),
        (None, Some(p)) => Ok((fs::read_to_string(p)?, true)),
        (None, None) => Err(Failure::Input("no polynomial given".into())),
    }
}

/// Files may hold an expression or exchange lines.
fn is_exchange(src: &str) -> bool {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .all(|l| l.split_whitespace().count() >= 3 && !l.contains(['x', 'y', 't', '+', '*', '^']))
}

pub fn read_poly(inline: Option<&str>, file: Option<&Path>) -> Result<SparsePoly, Failure> {
    let (src, from_file) = source(inline, file)?;
    let r = if from_file && is_exchange(&src) {
        read_exchange::<Rational>(&src)
    } else {
        parse_poly(src.trim())
    };
    r.map_err(|e| Failure::Input(e.to_string()))
}

pub fn read_param(inline: Option<&str>, file: Option<&Path>) -> Result<ParamPoly, Failure> {
    let (src, from_file) = source(inline, file)?;
    let r = if from_file && is_exchange(&src) {
        read_exchange::<TPoly>(&src)
    } else {
        parse_param(src.trim())
    };
    r.map_err(|e| Failure::Input(e.to_string()))
}
