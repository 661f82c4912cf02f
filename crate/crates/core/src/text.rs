//! Expression syntax shared by the polynomial and enveloping algebra parsers.
//!
//! Accepts sums, products, integer powers, rational literals, `z` for the
//! root of unity, variables `x1..xn` and generators `a1..an`.

use crate::error::{Error, Result};
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Expr {
    Int(BigInt),
    Zeta(usize),
    Var(usize, usize),
    Gen(usize, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Zeta,
    Var(usize),
    Gen(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                out.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, col));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, col));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, col));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, col));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1;
            }
            'z' => {
                out.push((Tok::Zeta, col));
                i += 1;
            }
            'x' | 'a' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(Error::parse(col, format!("expected an index after '{c}'")));
                }
                let idx: usize = chars[start..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::parse(col, "index too large"))?;
                if idx == 0 {
                    return Err(Error::parse(col, "indices start at 1"));
                }
                out.push((if c == 'x' { Tok::Var(idx - 1) } else { Tok::Gen(idx - 1) }, col));
                i = j;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let v: BigInt = chars[i..j].iter().collect::<String>().parse().unwrap();
                out.push((Tok::Int(v), col));
                i = j;
            }
            other => return Err(Error::parse(col, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Expr::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let col = self.col();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?), col);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let col = self.col();
            match self.toks.get(self.pos) {
                Some((Tok::Int(v), _)) => {
                    let e = u32::try_from(v.clone())
                        .map_err(|_| Error::parse(col, "exponent too large"))?;
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(Error::parse(col, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(Error::parse(col, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Int(v) => Ok(Expr::Int(v)),
            Tok::Zeta => Ok(Expr::Zeta(col)),
            Tok::Var(i) => Ok(Expr::Var(i, col)),
            Tok::Gen(i) => Ok(Expr::Gen(i, col)),
            Tok::LParen => {
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::parse(self.col(), "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(Error::parse(col, "expected a number, variable or '('")),
        }
    }
}

pub(crate) fn parse_expr(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: s.chars().count() + 1,
    };
    if p.toks.is_empty() {
        return Err(Error::parse(1, "empty expression"));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::parse(p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

/// A ring in which parsed expressions can be evaluated.
pub(crate) trait ExprRing {
    type V: Clone;
    fn from_int(&self, v: &BigInt) -> Self::V;
    fn zeta(&self, col: usize) -> Result<Self::V>;
    fn var(&self, i: usize, col: usize) -> Result<Self::V>;
    fn gen(&self, i: usize, col: usize) -> Result<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V, col: usize) -> Result<Self::V>;
}

pub(crate) fn eval<R: ExprRing>(ctx: &R, e: &Expr) -> Result<R::V> {
    Ok(match e {
        Expr::Int(v) => ctx.from_int(v),
        Expr::Zeta(col) => ctx.zeta(*col)?,
        Expr::Var(i, col) => ctx.var(*i, *col)?,
        Expr::Gen(i, col) => ctx.gen(*i, *col)?,
        Expr::Add(a, b) => ctx.add(&eval(ctx, a)?, &eval(ctx, b)?),
        Expr::Sub(a, b) => ctx.sub(&eval(ctx, a)?, &eval(ctx, b)?),
        Expr::Mul(a, b) => ctx.mul(&eval(ctx, a)?, &eval(ctx, b)?),
        Expr::Div(a, b, col) => ctx.div(&eval(ctx, a)?, &eval(ctx, b)?, *col)?,
        Expr::Neg(a) => ctx.neg(&eval(ctx, a)?),
        Expr::Pow(a, k) => {
            let base = eval(ctx, a)?;
            let mut acc = ctx.from_int(&BigInt::from(1));
            for _ in 0..*k {
                acc = ctx.mul(&acc, &base);
            }
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_column_of_bad_character() {
        match parse_expr("x1 + $") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-x1^2*3 + a2").unwrap();
        assert!(matches!(e, Expr::Add(_, _)));
    }

    #[test]
    fn missing_paren() {
        assert!(matches!(parse_expr("(x1 + 1"), Err(Error::Parse { column: 8, .. })));
    }
}
