//! Grammar for K-ring expressions (whitespace is ignored):
//!
//! ```text
//! expr     := ['+'|'-'] product (('+'|'-') product)*
//! product  := factor (['*'] factor)*
//! factor   := integer | 'x' ['^' exponent] | '(' expr ')'
//! exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
//! ```
//!
//! so `3*x^(1/2) - x^(2/3) + 1`, `2x^(-1/4)` and `(x^(1/2) - 1)(x^(1/3) - 1)`
//! are all accepted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::FormalSum;
use crate::error::{Error, Result};

pub fn parse_formal_sum(input: &str) -> Result<FormalSum> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { chars, pos: 0 };
    let s = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(s)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, what: &str) -> Error {
        match self.peek() {
            Some(c) => Error::Parse(format!("{what} {c:?} at position {}", self.pos)),
            None => Error::Parse(format!("{what}: end of input")),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {c:?}, found")))
        }
    }

    fn expr(&mut self) -> Result<FormalSum> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let first = self.product()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<FormalSum> {
        let mut acc = self.factor()?;
        loop {
            let implicit =
                matches!(self.peek(), Some(c) if c == 'x' || c == '(' || c.is_ascii_digit());
            if self.eat('*') || implicit {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<FormalSum> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(FormalSum::constant(self.integer()?)),
            Some('x') => {
                self.pos += 1;
                let e = if self.eat('^') {
                    self.exponent()?
                } else {
                    BigRational::from(BigInt::from(1))
                };
                Ok(FormalSum::monomial(e, 1))
            }
            Some('(') => {
                self.pos += 1;
                let s = self.expr()?;
                self.expect(')')?;
                Ok(s)
            }
            _ => Err(self.error("expected a number, 'x' or '(', found")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits, found"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        Ok(text.parse().expect("ascii digits"))
    }

    fn signed_integer(&mut self) -> Result<BigInt> {
        let negative = self.eat('-');
        let n = self.integer()?;
        Ok(if negative { -n } else { n })
    }

    fn exponent(&mut self) -> Result<BigRational> {
        if !self.eat('(') {
            return Ok(BigRational::from(self.signed_integer()?));
        }
        let num = self.signed_integer()?;
        let den = if self.eat('/') {
            let d = self.integer()?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator in exponent".into()));
            }
            d
        } else {
            BigInt::from(1)
        };
        self.expect(')')?;
        Ok(BigRational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kring::reduce;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn documented_example() {
        let s = parse_formal_sum("3*x^(1/2) - x^(2/3) + 1").unwrap();
        let expected = FormalSum::from_terms([
            (q(1, 2), BigInt::from(3)),
            (q(2, 3), BigInt::from(-1)),
            (q(0, 1), BigInt::from(1)),
        ]);
        assert_eq!(s, expected);
    }

    #[test]
    fn implicit_products_and_groups() {
        let s = parse_formal_sum("(x^(1/2) - 1)(x^(1/3) - 1)").unwrap();
        assert_eq!(s.len(), 4);
        assert!(reduce(&s).rank.is_zero());
        assert_eq!(
            parse_formal_sum("2x^(-1/4)").unwrap(),
            FormalSum::monomial(q(-1, 4), 2)
        );
        assert_eq!(
            parse_formal_sum("x").unwrap(),
            FormalSum::monomial(q(1, 1), 1)
        );
        assert_eq!(
            parse_formal_sum("- x^-2").unwrap(),
            FormalSum::monomial(q(-2, 1), -1)
        );
        assert_eq!(
            parse_formal_sum("x^(4/2)").unwrap(),
            FormalSum::monomial(q(2, 1), 1)
        );
        assert_eq!(parse_formal_sum("x - x").unwrap(), FormalSum::zero());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "x^1/2", "3**x", "x^(1/0)", "(x", "y", "x^", "1 +"] {
            assert!(
                matches!(parse_formal_sum(bad), Err(Error::Parse(_))),
                "{bad}"
            );
        }
    }
}
