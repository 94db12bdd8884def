//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar: sums and differences of products, `^` with a non-negative
//! integer exponent, parentheses, unary minus, and division by nonzero
//! constants. Integer literals only; `0.5` is rejected in favour of `1/2`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Coefficient, ParamPoly, Poly, PolyError, Rational, SparsePoly, TPoly};

const MAX_EXPONENT: u64 = 10_000;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str, allow_t: bool) -> Result<Vec<(usize, Tok)>, PolyError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let pos = k;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                k += 1;
                continue;
            }
            '0'..='9' => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                if k < chars.len() && (chars[k] == '.' || chars[k] == 'e' || chars[k] == 'E') {
                    return Err(PolyError::NonRationalLiteral { pos: start });
                }
                let digits: String = chars[start..k].iter().collect();
                out.push((start, Tok::Num(digits.parse().expect("ascii digits"))));
                continue;
            }
            '.' => return Err(PolyError::NonRationalLiteral { pos }),
            'x' | 'y' => out.push((pos, Tok::Var(c))),
            't' if allow_t => out.push((pos, Tok::Var(c))),
            '+' => out.push((pos, Tok::Plus)),
            '-' => out.push((pos, Tok::Minus)),
            '*' => out.push((pos, Tok::Star)),
            '/' => out.push((pos, Tok::Slash)),
            '^' => out.push((pos, Tok::Caret)),
            '(' => out.push((pos, Tok::LParen)),
            ')' => out.push((pos, Tok::RParen)),
            _ if c.is_alphabetic() => {
                let start = k;
                while k < chars.len() && chars[k].is_alphanumeric() {
                    k += 1;
                }
                return Err(PolyError::UnknownVariable {
                    pos: start,
                    name: chars[start..k].iter().collect(),
                });
            }
            _ => {
                return Err(PolyError::Syntax {
                    pos,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        }
        k += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<ParamPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ParamPoly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.unary()?;
                    let k = constant_of(&d).ok_or(PolyError::DivisionByNonConstant { pos })?;
                    if k.is_zero() {
                        return Err(PolyError::DivisionByZero { pos });
                    }
                    acc = acc.scale(&TPoly::constant(k.recip()));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ParamPoly, PolyError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ParamPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => {
                let e: u64 = n
                    .try_into()
                    .map_err(|_| PolyError::ExponentTooLarge { pos })?;
                if e > MAX_EXPONENT {
                    return Err(PolyError::ExponentTooLarge { pos });
                }
                Ok(base.pow(e as u32))
            }
            Some(Tok::Minus) => Err(PolyError::NegativeExponent { pos }),
            _ => Err(PolyError::Syntax {
                pos,
                msg: "expected an integer exponent".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<ParamPoly, PolyError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Poly::constant(TPoly::constant(Rational::from_integer(n)))),
            Some(Tok::Var('x')) => Ok(Poly::x()),
            Some(Tok::Var('y')) => Ok(Poly::y()),
            Some(Tok::Var(_)) => Ok(Poly::constant(TPoly::t())),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(PolyError::Syntax {
                        pos: self.toks.get(self.at - 1).map_or(self.end, |(p, _)| *p),
                        msg: "expected ')'".into(),
                    }),
                }
            }
            Some(t) => Err(PolyError::Syntax {
                pos,
                msg: format!("unexpected token {t:?}"),
            }),
            None => Err(PolyError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

fn constant_of(p: &ParamPoly) -> Option<Rational> {
    if p.is_zero() {
        return Some(Rational::zero());
    }
    if !p.is_constant() {
        return None;
    }
    p.coeff(0, 0).as_rational()
}

fn parse_with(src: &str, allow_t: bool) -> Result<ParamPoly, PolyError> {
    let toks = lex(src, allow_t)?;
    let end = src.chars().count();
    if toks.is_empty() {
        return Err(PolyError::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser { toks, at: 0, end };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return Err(PolyError::Syntax {
            pos: p.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(out)
}

/// Parse a polynomial in `x` and `y` with rational coefficients.
pub fn parse_poly(src: &str) -> Result<SparsePoly, PolyError> {
    let p = parse_with(src, false)?;
    Ok(p.map_coeffs(|c| c.as_rational().expect("no t in input")))
}

/// Parse a polynomial in `x` and `y` whose coefficients may involve `t`.
pub fn parse_param(src: &str) -> Result<ParamPoly, PolyError> {
    parse_with(src, true)
}
