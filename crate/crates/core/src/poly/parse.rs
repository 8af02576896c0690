//! Reader for the canonical polynomial syntax.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary ("*" unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | generator | "(" expr ")"
//! generator := "D" i "_" j | "d" i "_" a | "pt" i | "H" i
//! ```
//!
//! `H{i}` is only accepted when the generator set has rank-one slots.

use std::sync::Arc;

use num_bigint::BigInt;

use super::monomial::{Generator, GeneratorSet};
use super::polynomial::Polynomial;
use super::ring::IntegerRing;
use super::ParseError;

pub fn parse(input: &str, vars: &Arc<GeneratorSet>) -> Result<Polynomial<IntegerRing>, ParseError> {
    let mut parser = Parser {
        src: input.as_bytes(),
        pos: 0,
        vars,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Arc<GeneratorSet>,
}

type Poly = Polynomial<IntegerRing>;

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) }.expect("same ring");
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = acc.mul(&rhs).expect("same ring");
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let exp = self
                .digits()
                .ok_or_else(|| self.error("expected exponent"))?;
            let exp: u32 = exp
                .parse()
                .map_err(|_| self.error("exponent out of range"))?;
            if exp > 64 {
                return Err(self.error("exponent out of range"));
            }
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let d = self.digits().ok_or_else(|| self.error("expected index"))?;
        d.parse().map_err(|_| self.error("index out of range"))
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                let value: BigInt = d.parse().expect("decimal digits");
                Ok(Polynomial::constant(IntegerRing, self.vars.clone(), value))
            }
            Some(_) => {
                let start = self.pos;
                let g = self.generator()?;
                let pos = self.vars.position(&g).ok_or_else(|| ParseError {
                    position: start,
                    message: format!(
                        "unknown generator `{}`",
                        String::from_utf8_lossy(&self.src[start..self.pos])
                    ),
                })?;
                Ok(Polynomial::var(IntegerRing, self.vars.clone(), pos))
            }
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn generator(&mut self) -> Result<Generator, ParseError> {
        if self.eat("pt") {
            let slot = self.index()?;
            return Ok(Generator::Point { slot });
        }
        if self.eat("D") {
            let i = self.index()?;
            if !self.eat("_") {
                return Err(self.error("expected '_'"));
            }
            let j = self.index()?;
            return Ok(Generator::Divisor { i, j });
        }
        if self.eat("d") {
            let slot = self.index()?;
            if !self.eat("_") {
                return Err(self.error("expected '_'"));
            }
            let a = self.index()?;
            return Ok(Generator::Surface { slot, a });
        }
        if self.eat("H") {
            if !self.vars.h_alias() {
                return Err(self.error("`H` alias requires a rank-one surface"));
            }
            let slot = self.index()?;
            return Ok(Generator::Surface { slot, a: 1 });
        }
        Err(self.error("expected a generator, integer or '('"))
    }
}
