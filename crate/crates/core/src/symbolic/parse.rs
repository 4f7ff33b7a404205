//! Infix expression parser for rational functions.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' '-'? int)?
//! atom   := int | var | '(' expr ')'
//! var    := letter+ digit+          (1-based index)
//! ```
//!
//! Subtraction and unary minus are only accepted when the caller allows them.
//! Evaluation goes through an [`ExprAlgebra`], so the same grammar serves
//! rational functions and semiring values.

use num_bigint::BigInt;

use super::{RationalFn, SymbolicError};

/// Target of expression evaluation. Errors are reported as messages.
pub trait ExprAlgebra {
    type Value;
    fn int(&self, n: BigInt) -> Result<Self::Value, String>;
    /// 1-based variable index as written.
    fn var(&self, index: usize) -> Result<Self::Value, String>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, String>;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, String>;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, String>;
    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, String>;
    fn pow(&self, a: Self::Value, k: i32) -> Result<Self::Value, String>;
    fn neg(&self, a: Self::Value) -> Result<Self::Value, String>;
}

struct RationalAlgebra {
    nvars: usize,
}

impl ExprAlgebra for RationalAlgebra {
    type Value = RationalFn;
    fn int(&self, n: BigInt) -> Result<RationalFn, String> {
        Ok(RationalFn::constant(self.nvars, n))
    }
    fn var(&self, i: usize) -> Result<RationalFn, String> {
        if i == 0 || i > self.nvars {
            return Err(format!("variable index {i} out of range 1..={}", self.nvars));
        }
        Ok(RationalFn::var(self.nvars, i - 1))
    }
    fn add(&self, a: RationalFn, b: RationalFn) -> Result<RationalFn, String> {
        Ok(a + b)
    }
    fn sub(&self, a: RationalFn, b: RationalFn) -> Result<RationalFn, String> {
        Ok(a - b)
    }
    fn mul(&self, a: RationalFn, b: RationalFn) -> Result<RationalFn, String> {
        Ok(a * b)
    }
    fn div(&self, a: RationalFn, b: RationalFn) -> Result<RationalFn, String> {
        a.checked_div(&b).map_err(|e| e.to_string())
    }
    fn pow(&self, a: RationalFn, k: i32) -> Result<RationalFn, String> {
        a.pow(k).map_err(|e| e.to_string())
    }
    fn neg(&self, a: RationalFn) -> Result<RationalFn, String> {
        Ok(-a)
    }
}

struct Parser<'a, A: ExprAlgebra> {
    src: &'a [u8],
    pos: usize,
    alg: &'a A,
    allow_minus: bool,
}

fn err(msg: impl Into<String>) -> SymbolicError {
    SymbolicError::Parse(msg.into())
}

impl<A: ExprAlgebra> Parser<'_, A> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
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

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn minus(&mut self) -> Result<bool, SymbolicError> {
        if self.eat(b'-') {
            if !self.allow_minus {
                return Err(err(format!("subtraction not allowed (at {})", self.pos - 1)));
            }
            return Ok(true);
        }
        Ok(false)
    }

    fn expr(&mut self) -> Result<A::Value, SymbolicError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = self.alg.add(acc, t).map_err(err)?;
            } else if self.peek() == Some(b'-') {
                self.minus()?;
                let t = self.term()?;
                acc = self.alg.sub(acc, t).map_err(err)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<A::Value, SymbolicError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let f = self.unary()?;
                acc = self.alg.mul(acc, f).map_err(err)?;
            } else if self.eat(b'/') {
                let d = self.unary()?;
                acc = self.alg.div(acc, d).map_err(err)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<A::Value, SymbolicError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let neg = if self.src.get(self.pos) == Some(&b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let at = self.pos;
            let d = self
                .digits()
                .ok_or_else(|| err(format!("expected exponent at {at}")))?;
            let k: i32 = d.parse().map_err(|_| err(format!("exponent too large: {d}")))?;
            return self.alg.pow(base, if neg { -k } else { k }).map_err(err);
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<A::Value, SymbolicError> {
        if self.peek() == Some(b'-') {
            self.minus()?;
            let v = self.unary()?;
            return self.alg.neg(v).map_err(err);
        }
        self.factor()
    }

    fn atom(&mut self) -> Result<A::Value, SymbolicError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(err(format!("expected ')' at {}", self.pos)));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                let n: BigInt = d.parse().map_err(|_| err("bad integer"))?;
                self.alg.int(n).map_err(err)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let at = self.pos;
                let d = self
                    .digits()
                    .ok_or_else(|| err(format!("expected variable index at {at}")))?;
                let i: usize = d.parse().map_err(|_| err("bad variable index"))?;
                self.alg.var(i).map_err(err)
            }
            Some(c) => Err(err(format!("unexpected '{}' at {}", c as char, self.pos))),
            None => Err(err("unexpected end of input")),
        }
    }
}

/// Parses an expression in `nvars` variables.
pub fn parse_rational(src: &str, nvars: usize, allow_minus: bool) -> Result<RationalFn, SymbolicError> {
    parse_with(src, &RationalAlgebra { nvars }, allow_minus)
}

/// Parses and evaluates an expression in the given algebra.
pub fn parse_with<A: ExprAlgebra>(src: &str, alg: &A, allow_minus: bool) -> Result<A::Value, SymbolicError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        alg,
        allow_minus,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input at {}", p.pos)));
    }
    Ok(e)
}
