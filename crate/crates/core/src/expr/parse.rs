//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' nat)? | '-' factor
//! atom   := rational | ident '(' expr ')' | var | '(' expr ')'
//! var    := 'x' nat
//! ident  := 'sin' | 'cos' | 'exp'
//! rational := nat ('/' nat)? | nat '.' nat
//! ```
//!
//! A rational literal is a single token: `1/2` with no whitespace and a
//! digit right after the slash is the constant one half, while `1 / 2` and
//! `1/(2)` are quotients. A minus sign directly in front of a literal folds
//! into a negative constant; `-(2)` stays a negation node.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{build, Expr, Func};
use crate::error::{Error, Result};

pub(super) fn parse(text: &str, dim: usize) -> Result<Arc<Expr>> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Arc<Expr>> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Arc::new(Expr::Add(lhs, self.term()?));
            } else if self.eat(b'-') {
                lhs = Arc::new(Expr::Sub(lhs, self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Arc<Expr>> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Arc::new(Expr::Mul(lhs, self.factor()?));
            } else if self.eat(b'/') {
                lhs = Arc::new(Expr::Div(lhs, self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Arc<Expr>> {
        if self.eat(b'-') {
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let start = self.pos;
                let lit = self.rational()?;
                if self.peek() != Some(b'^') {
                    return Ok(build::constant(-lit));
                }
                self.pos = start;
            }
            return Ok(Arc::new(Expr::Neg(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            if self.src.get(self.pos) == Some(&b'-') {
                return Err(self.error("negative exponents are not supported"));
            }
            let k = self.nat()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(Arc::new(Expr::Pow(base, k)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Arc<Expr>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(build::constant(self.rational()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(u8::is_ascii_alphanumeric)
                {
                    self.pos += 1;
                }
                let word = &self.src[start..self.pos];
                if word[0] == b'x' && word.len() > 1 && word[1..].iter().all(u8::is_ascii_digit) {
                    let index: usize = std::str::from_utf8(&word[1..])
                        .unwrap()
                        .parse()
                        .map_err(|_| self.error("variable index too large"))?;
                    if index >= self.dim {
                        return Err(Error::VariableOutOfRange {
                            index,
                            dim: self.dim,
                        });
                    }
                    return Ok(build::var(index));
                }
                let func = match word {
                    b"sin" => Func::Sin,
                    b"cos" => Func::Cos,
                    b"exp" => Func::Exp,
                    _ => {
                        self.pos = start;
                        return Err(self.error("unknown identifier"));
                    }
                };
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok(Arc::new(Expr::Apply(func, arg)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Option<&'a [u8]> {
        let src = self.src;
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &src[start..self.pos])
    }

    fn nat(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let d = self
            .digits()
            .ok_or_else(|| self.error("expected a number"))?;
        Ok(BigInt::parse_bytes(d, 10).unwrap())
    }

    fn rational(&mut self) -> Result<BigRational> {
        let whole = self.nat()?;
        let next_is_digit = |p: &Self| p.src.get(p.pos + 1).is_some_and(u8::is_ascii_digit);
        match self.src.get(self.pos) {
            Some(b'/') if next_is_digit(self) => {
                self.pos += 1;
                let den = BigInt::parse_bytes(self.digits().unwrap(), 10).unwrap();
                if den.is_zero() {
                    return Err(self.error("zero denominator in literal"));
                }
                Ok(BigRational::new(whole, den))
            }
            Some(b'.') if next_is_digit(self) => {
                self.pos += 1;
                let frac = self.digits().unwrap();
                let scale = num_traits::pow(BigInt::from(10), frac.len());
                let frac = BigInt::parse_bytes(frac, 10).unwrap();
                Ok(BigRational::new(whole * &scale + frac, scale))
            }
            _ => Ok(BigRational::new(whole, BigInt::one())),
        }
    }
}
