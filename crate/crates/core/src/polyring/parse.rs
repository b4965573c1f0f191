//! Input grammar:
//!
//! ```text
//! expression  = ['-'] term (('+'|'-') term)*
//! term        = coefficient | [coefficient '*'] factor ('*' factor)*
//! coefficient = integer | integer '/' positive-integer
//! factor      = variable ['^' positive-integer]
//! variable    = x | y | z | t
//! ```
//!
//! Whitespace is insignificant. Positions in errors are 1-based character columns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{ExponentVector, Polynomial, VAR_NAMES};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent at column {pos}")]
    NegativeExponent { pos: usize },
    #[error("unknown variable '{name}' at column {pos} (expected one of x, y, z, t)")]
    UnknownVariable { pos: usize, name: char },
}

struct Parser {
    chars: Vec<(usize, char)>,
    i: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        let chars = src
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        Parser { chars, i: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars
            .get(self.i)
            .map(|&(p, _)| p)
            .unwrap_or_else(|| self.chars.last().map(|&(p, _)| p + 1).unwrap_or(1))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.i;
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.i += 1;
        }
        if self.i == start {
            return self.err("expected integer");
        }
        Ok(s.parse().expect("digits"))
    }

    fn coefficient(&mut self) -> Result<Rational, ParseError> {
        let n = self.integer()?;
        if self.peek() == Some('/') {
            self.i += 1;
            let pos = self.pos();
            let d = self.integer()?;
            if d.is_zero() {
                return Err(ParseError::Syntax { pos, msg: "zero denominator".into() });
            }
            return Ok(BigRational::new(n, d));
        }
        Ok(BigRational::from_integer(n))
    }

    fn factor(&mut self, e: &mut [u32; 4]) -> Result<(), ParseError> {
        let pos = self.pos();
        let Some(c) = self.peek() else {
            return self.err("expected variable");
        };
        let v = match VAR_NAMES.iter().position(|&n| n == c) {
            Some(v) => v,
            None if c.is_alphabetic() => return Err(ParseError::UnknownVariable { pos, name: c }),
            None => return self.err(format!("expected variable, found '{c}'")),
        };
        self.i += 1;
        let mut k = 1u32;
        if self.peek() == Some('^') {
            self.i += 1;
            if self.peek() == Some('-') {
                return Err(ParseError::NegativeExponent { pos: self.pos() });
            }
            let epos = self.pos();
            let n = self.integer()?;
            k = u32::try_from(n)
                .ok()
                .filter(|&k| k > 0)
                .ok_or(ParseError::Syntax { pos: epos, msg: "exponent must be a positive integer".into() })?;
        }
        e[v] = e[v]
            .checked_add(k)
            .ok_or(ParseError::Syntax { pos, msg: "exponent overflow".into() })?;
        Ok(())
    }

    fn term(&mut self) -> Result<(ExponentVector, Rational), ParseError> {
        let mut e = [0u32; 4];
        let mut coeff = BigRational::from_integer(1.into());
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = self.coefficient()?;
            if self.peek() != Some('*') {
                return Ok((ExponentVector(e), coeff));
            }
            self.i += 1;
        }
        self.factor(&mut e)?;
        while self.peek() == Some('*') {
            self.i += 1;
            self.factor(&mut e)?;
        }
        Ok((ExponentVector(e), coeff))
    }

    fn expression(&mut self) -> Result<Polynomial<Rational>, ParseError> {
        if self.chars.is_empty() {
            return self.err("empty input");
        }
        let mut out = Polynomial::zero();
        let mut sign_neg = false;
        if self.peek() == Some('-') {
            sign_neg = true;
            self.i += 1;
        }
        loop {
            let (e, c) = self.term()?;
            out.add_term(e, if sign_neg { -c } else { c });
            match self.peek() {
                None => break,
                Some('+') => sign_neg = false,
                Some('-') => sign_neg = true,
                Some(c) => return self.err(format!("unexpected '{c}'")),
            }
            self.i += 1;
        }
        Ok(out)
    }
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial<Rational>, ParseError> {
    Parser::new(text).expression()
}

impl std::str::FromStr for Polynomial<Rational> {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_polynomial(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn example_one() {
        let f = parse_polynomial("x^2 + y^2*z + z^3 + t^3").unwrap();
        let supp = f.support();
        assert_eq!(supp.len(), 4);
        for e in [[2, 0, 0, 0], [0, 2, 1, 0], [0, 0, 3, 0], [0, 0, 0, 3]] {
            assert_eq!(f.coeff(&ExponentVector(e)), int(1));
        }
    }

    #[test]
    fn zero_and_fractions() {
        assert!(parse_polynomial("0").unwrap().is_zero());
        let f = parse_polynomial("x^2 - 1/2*z*t^4").unwrap();
        assert_eq!(f.coeff(&ExponentVector([2, 0, 0, 0])), int(1));
        assert_eq!(f.coeff(&ExponentVector([0, 0, 1, 4])), rat(-1, 2));
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn merges_and_cancels() {
        let f = parse_polynomial("x*y + y*x - 2*x*y + z").unwrap();
        assert_eq!(f.to_string(), "z");
        assert_eq!(parse_polynomial(" - x ^ 2 ").unwrap().to_string(), "-x^2");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_polynomial(""), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x^-2"), Err(ParseError::NegativeExponent { pos: 3 })));
        assert!(matches!(parse_polynomial("x + w"), Err(ParseError::UnknownVariable { pos: 5, name: 'w' })));
        assert!(matches!(parse_polynomial("x + + y"), Err(ParseError::Syntax { pos: 5, .. })));
        assert!(matches!(parse_polynomial("x^0"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_polynomial("1/0*x"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_polynomial("2x"), Err(ParseError::Syntax { .. })));
    }
}
