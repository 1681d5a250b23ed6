//! The exact-literal text format for field elements.
//!
//! A literal is a sum of terms, each a rational coefficient optionally
//! followed by `*z^k`, where `z` stands for `ζ_N`. A bare `z^k` or `z` is
//! also accepted, as is `-` between terms. Whitespace is ignored.
//!
//! ```text
//! 1/2*z^0 + -2/3*z^5
//! ```
//!
//! The printer emits the canonical form: nonzero coefficients in increasing
//! exponent order, each written `c*z^k`, joined by ` + `; zero prints as `0`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclotomic::{CycNum, CyclotomicField};
use crate::LiteralError;

pub fn format_literal(x: &CycNum) -> String {
    let terms: Vec<String> = x
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("{c}*z^{k}"))
        .collect();
    if terms.is_empty() {
        "0".to_owned()
    } else {
        terms.join(" + ")
    }
}

pub fn parse_literal(text: &str, field: &Arc<CyclotomicField>) -> Result<CycNum, LiteralError> {
    let terms = Parser::new(text).parse()?;
    Ok(CycNum::from_terms(
        field,
        terms.iter().map(|(e, c)| (*e, c)),
    ))
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, message: impl Into<String>) -> LiteralError {
        LiteralError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<Vec<(i64, BigRational)>, LiteralError> {
        if self.peek().is_none() {
            return Err(self.err("empty literal"));
        }
        let mut terms = vec![self.term(false)?];
        loop {
            match self.peek() {
                None => return Ok(terms),
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.term(false)?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push(self.term(true)?);
                }
                Some(c) => {
                    return Err(self.err(format!("expected '+' or '-', found '{}'", c as char)))
                }
            }
        }
    }

    fn term(&mut self, negated: bool) -> Result<(i64, BigRational), LiteralError> {
        let mut negative = negated;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            if c == b'-' {
                negative = !negative;
            }
        }
        let (coeff, exp) = match self.peek() {
            Some(b'z') => (BigRational::one(), self.power()?),
            Some(c) if c.is_ascii_digit() => {
                let coeff = self.rational()?;
                let exp = if self.eat(b'*') {
                    if self.peek() != Some(b'z') {
                        return Err(self.err("expected 'z' after '*'"));
                    }
                    self.power()?
                } else {
                    0
                };
                (coeff, exp)
            }
            Some(c) => return Err(self.err(format!("unexpected character '{}'", c as char))),
            None => return Err(self.err("expected a term")),
        };
        Ok((exp, if negative { -coeff } else { coeff }))
    }

    /// `z` or `z^k`, with the cursor on `z`.
    fn power(&mut self) -> Result<i64, LiteralError> {
        self.pos += 1;
        if !self.eat(b'^') {
            return Ok(1);
        }
        let negative = self.eat(b'-');
        let start = self.pos_after_ws();
        let digits = self.digits()?;
        let k: i64 = digits.parse().map_err(|_| LiteralError {
            position: start,
            message: "exponent out of range".into(),
        })?;
        Ok(if negative { -k } else { k })
    }

    fn pos_after_ws(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn digits(&mut self) -> Result<&'a str, LiteralError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn rational(&mut self) -> Result<BigRational, LiteralError> {
        let numer: BigInt = self.digits()?.parse().expect("ascii digits");
        if self.eat(b'/') {
            let at = self.pos_after_ws();
            let denom: BigInt = self.digits()?.parse().expect("ascii digits");
            if denom.is_zero() {
                return Err(LiteralError {
                    position: at,
                    message: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }
}
