//! Exact point expressions: integers, `p/q`, `zeta(n,k)`, `inf`, with
//! `+ - * / ^` and parentheses. Operands in different cyclotomic fields are
//! promoted to their least common one.

use thiserror::Error;

use crate::cyclo::{unify, CycloCtx, CycloError, CycloNum};
use crate::moebius::ProjPoint;

/// Largest conductor accepted in `zeta(n,k)`.
pub const MAX_PARSE_CONDUCTOR: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unexpected {found:?} at offset {pos}")]
    Unexpected { pos: usize, found: char },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("trailing input at offset {0}")]
    Trailing(usize),
    #[error("zeta conductor must be in 1..={MAX_PARSE_CONDUCTOR}, got {0}")]
    BadConductor(i64),
    #[error("number too large at offset {0}")]
    Overflow(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inf cannot take part in arithmetic")]
    InfinityArithmetic,
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

#[derive(Clone)]
enum Value {
    Finite(CycloNum),
    Inf,
}

impl Value {
    fn finite(self) -> Result<CycloNum, ExprError> {
        match self {
            Value::Finite(x) => Ok(x),
            Value::Inf => Err(ExprError::InfinityArithmetic),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(ExprError::Unexpected { pos: self.pos, found: x as char }),
            None => Err(ExprError::UnexpectedEnd),
        }
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.src.get(self.pos) {
                Some(&x) => Err(ExprError::Unexpected { pos: self.pos, found: x as char }),
                None => Err(ExprError::UnexpectedEnd),
            };
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let v: i64 = digits.parse().map_err(|_| ExprError::Overflow(start))?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<Value, ExprError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let (x, y) = unify(&acc.finite()?, &self.term()?.finite()?);
            acc = Value::Finite(if op == b'+' { x + y } else { x - y });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, ExprError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let (x, y) = unify(&acc.finite()?, &self.unary()?.finite()?);
            acc = Value::Finite(if op == b'*' {
                x * y
            } else if y.is_zero() {
                return Err(ExprError::DivisionByZero);
            } else {
                x / y
            });
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Value::Finite(-self.unary()?.finite()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.integer()?;
        let x = base.finite()?;
        if e < 0 && x.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(Value::Finite(x.pow(e)?))
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let end = self.pos + word.len();
        if self.src.get(self.pos..end) == Some(word.as_bytes()) {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn atom(&mut self) -> Result<Value, ExprError> {
        match self.peek() {
            None => Err(ExprError::UnexpectedEnd),
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(Value::Finite(CycloCtx::new(1)?.integer(v)))
            }
            Some(_) if self.keyword("inf") => Ok(Value::Inf),
            Some(_) if self.keyword("zeta") => {
                self.expect(b'(')?;
                let n = self.integer()?;
                self.expect(b',')?;
                let k = self.integer()?;
                self.expect(b')')?;
                if !(1..=MAX_PARSE_CONDUCTOR as i64).contains(&n) {
                    return Err(ExprError::BadConductor(n));
                }
                Ok(Value::Finite(CycloCtx::new(n as u32)?.root_of_unity(k)))
            }
            Some(c) => Err(ExprError::Unexpected { pos: self.pos, found: c as char }),
        }
    }
}

fn parse_value(src: &str) -> Result<Value, ExprError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ExprError::Trailing(p.pos));
    }
    Ok(v)
}

/// Parses a finite value.
pub fn parse_number(src: &str) -> Result<CycloNum, ExprError> {
    parse_value(src)?.finite()
}

/// Parses a point of the projective line; `inf` is the point at infinity.
pub fn parse_point(src: &str) -> Result<ProjPoint, ExprError> {
    Ok(match parse_value(src)? {
        Value::Finite(x) => ProjPoint::finite(x),
        Value::Inf => ProjPoint::infinity(&CycloCtx::new(1)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Rational;

    #[test]
    fn rationals_and_precedence() {
        let q = parse_number("1 + 2*3/4 - -1").unwrap();
        assert_eq!(q.as_rational(), Some(Rational::new(7.into(), 2.into())));
        assert_eq!(parse_number("2^-3").unwrap().as_rational(), Some(Rational::new(1.into(), 8.into())));
        assert_eq!(parse_number("(1+1)^2*3").unwrap().as_rational(), Some(Rational::from_integer(12.into())));
        assert_eq!(parse_number("-2^2").unwrap().as_rational(), Some(Rational::from_integer((-4).into())));
    }

    #[test]
    fn roots_of_unity_promote() {
        let i = parse_number("zeta(4,1)").unwrap();
        assert_eq!((&i * &i).as_rational(), Some(Rational::from_integer((-1).into())));
        let x = parse_number("zeta(4,1) + zeta(3,1)").unwrap();
        assert_eq!(x.conductor(), 12);
        assert!(parse_number("zeta(6,1) - zeta(3,1) - 1").unwrap().is_zero());
        assert_eq!(parse_number("zeta(5,1)^5").unwrap().as_rational(), Some(Rational::from_integer(1.into())));
    }

    #[test]
    fn points() {
        assert!(parse_point("inf").unwrap().is_infinity());
        assert!(parse_point(" ( inf ) ").unwrap().is_infinity());
        assert!(!parse_point("1/2").unwrap().is_infinity());
    }

    #[test]
    fn errors() {
        assert_eq!(parse_number("1/0").unwrap_err(), ExprError::DivisionByZero);
        assert_eq!(parse_number("0^-1").unwrap_err(), ExprError::DivisionByZero);
        assert_eq!(parse_number("inf+1").unwrap_err(), ExprError::InfinityArithmetic);
        assert_eq!(parse_number("1 2").unwrap_err(), ExprError::Trailing(2));
        assert_eq!(parse_number("zeta(0,1)").unwrap_err(), ExprError::BadConductor(0));
        assert_eq!(parse_number("").unwrap_err(), ExprError::UnexpectedEnd);
        assert!(matches!(parse_number("x"), Err(ExprError::Unexpected { pos: 0, found: 'x' })));
        assert!(matches!(parse_number("99999999999999999999"), Err(ExprError::Overflow(0))));
    }
}
