//! The five semirings patterns can take values in.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::symbolic::{parse_with, ExprAlgebra, LaurentPoly, RationalFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SemiringId {
    /// `Z_{>0}` with ordinary operations.
    PositiveIntegers,
    /// `Q_{>0}` with ordinary operations.
    PositiveRationals,
    /// `Z_{>=0}` with `max` as addition and `+` as multiplication.
    TropicalNonneg,
    /// `Z` with `max` as addition and `+` as multiplication.
    TropicalSemifield,
    /// Subtraction-free rational functions in `r` variables.
    Universal(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemiringError {
    #[error("operands belong to different semirings ({0} and {1})")]
    MixedSemirings(SemiringId, SemiringId),
    #[error("division has no solution in {0}")]
    DivisionFailure(SemiringId),
    #[error("value not in {0}: {1}")]
    InvalidValue(SemiringId, String),
    #[error("cannot parse value: {0}")]
    Parse(String),
}

/// An element of one of the [`SemiringId`] instances.
#[derive(Clone, PartialEq, Eq)]
pub enum SemiringValue {
    PositiveInteger(BigInt),
    PositiveRational(BigRational),
    TropicalNonneg(BigInt),
    Tropical(BigInt),
    /// Numerator and denominator both have nonnegative coefficients.
    Universal(RationalFn),
}

impl SemiringId {
    pub fn is_semifield(self) -> bool {
        !matches!(self, SemiringId::PositiveIntegers | SemiringId::TropicalNonneg)
    }

    pub fn one(self) -> SemiringValue {
        match self {
            SemiringId::PositiveIntegers => SemiringValue::PositiveInteger(BigInt::one()),
            SemiringId::PositiveRationals => SemiringValue::PositiveRational(BigRational::one()),
            SemiringId::TropicalNonneg => SemiringValue::TropicalNonneg(BigInt::zero()),
            SemiringId::TropicalSemifield => SemiringValue::Tropical(BigInt::zero()),
            SemiringId::Universal(r) => SemiringValue::Universal(RationalFn::one(r)),
        }
    }

    /// Short name used on the command line.
    pub fn short_name(self) -> String {
        match self {
            SemiringId::PositiveIntegers => "zpos".into(),
            SemiringId::PositiveRationals => "qpos".into(),
            SemiringId::TropicalNonneg => "tropn".into(),
            SemiringId::TropicalSemifield => "trop".into(),
            SemiringId::Universal(r) => format!("universal({r})"),
        }
    }

    /// The element written as the integer `n` in this semiring's text format.
    pub fn from_int(self, n: impl Into<BigInt>) -> Result<SemiringValue, SemiringError> {
        let n = n.into();
        match self {
            SemiringId::PositiveIntegers => SemiringValue::positive_integer(n),
            SemiringId::PositiveRationals => SemiringValue::positive_rational(BigRational::from_integer(n)),
            SemiringId::TropicalNonneg => SemiringValue::tropical_nonneg(n),
            SemiringId::TropicalSemifield => Ok(SemiringValue::Tropical(n)),
            SemiringId::Universal(r) => SemiringValue::universal(RationalFn::constant(r, n)),
        }
    }

    /// Coordinate variable `y_{i+1}` of the universal semifield.
    pub fn variable(self, i: usize) -> Result<SemiringValue, SemiringError> {
        match self {
            SemiringId::Universal(r) if i < r => {
                Ok(SemiringValue::Universal(RationalFn::var(r, i)))
            }
            _ => Err(SemiringError::InvalidValue(self, format!("y{}", i + 1))),
        }
    }

    /// Parses a value written in this semiring's text format.
    pub fn parse_value(self, s: &str) -> Result<SemiringValue, SemiringError> {
        let s = s.trim();
        let perr = |m: &str| SemiringError::Parse(format!("'{s}': {m}"));
        match self {
            SemiringId::PositiveIntegers | SemiringId::TropicalNonneg | SemiringId::TropicalSemifield => {
                let n: BigInt = s.parse().map_err(|_| perr("expected an integer"))?;
                self.from_int(n)
            }
            SemiringId::PositiveRationals => {
                let q = match s.split_once('/') {
                    Some((a, b)) => {
                        let a: BigInt = a.trim().parse().map_err(|_| perr("bad numerator"))?;
                        let b: BigInt = b.trim().parse().map_err(|_| perr("bad denominator"))?;
                        if b.is_zero() {
                            return Err(perr("zero denominator"));
                        }
                        BigRational::new(a, b)
                    }
                    None => BigRational::from_integer(s.parse().map_err(|_| perr("expected p/q"))?),
                };
                SemiringValue::positive_rational(q)
            }
            SemiringId::Universal(r) => parse_with(s, &UniversalAlgebra { r }, false)
                .map_err(|e| SemiringError::Parse(format!("'{s}': {e}"))),
        }
    }
}

impl fmt::Display for SemiringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.short_name())
    }
}

impl FromStr for SemiringId {
    type Err = SemiringError;
    /// Accepts `zpos`, `qpos`, `tropn`, `trop`, `universal` (rank filled in
    /// later) and `universal(r)`.
    fn from_str(s: &str) -> Result<Self, SemiringError> {
        let t = s.trim().to_ascii_lowercase();
        Ok(match t.as_str() {
            "zpos" | "positive-integers" => SemiringId::PositiveIntegers,
            "qpos" | "positive-rationals" => SemiringId::PositiveRationals,
            "tropn" | "tropical-nonneg" => SemiringId::TropicalNonneg,
            "trop" | "tropical-semifield" => SemiringId::TropicalSemifield,
            "universal" => SemiringId::Universal(0),
            _ => {
                let inner = t
                    .strip_prefix("universal(")
                    .and_then(|x| x.strip_suffix(')'))
                    .ok_or_else(|| SemiringError::Parse(format!("unknown semiring '{s}'")))?;
                let r = inner
                    .parse()
                    .map_err(|_| SemiringError::Parse(format!("bad rank in '{s}'")))?;
                SemiringId::Universal(r)
            }
        })
    }
}

struct UniversalAlgebra {
    r: usize,
}

impl ExprAlgebra for UniversalAlgebra {
    type Value = SemiringValue;
    fn int(&self, n: BigInt) -> Result<SemiringValue, String> {
        SemiringId::Universal(self.r).from_int(n).map_err(|e| e.to_string())
    }
    fn var(&self, i: usize) -> Result<SemiringValue, String> {
        if i == 0 {
            return Err("variables are numbered from 1".into());
        }
        SemiringId::Universal(self.r).variable(i - 1).map_err(|e| e.to_string())
    }
    fn add(&self, a: SemiringValue, b: SemiringValue) -> Result<SemiringValue, String> {
        sr_add(&a, &b).map_err(|e| e.to_string())
    }
    fn sub(&self, _: SemiringValue, _: SemiringValue) -> Result<SemiringValue, String> {
        Err("subtraction not allowed".into())
    }
    fn mul(&self, a: SemiringValue, b: SemiringValue) -> Result<SemiringValue, String> {
        sr_mul(&a, &b).map_err(|e| e.to_string())
    }
    fn div(&self, a: SemiringValue, b: SemiringValue) -> Result<SemiringValue, String> {
        sr_try_div(&a, &b).map_err(|e| e.to_string())
    }
    fn pow(&self, a: SemiringValue, k: i32) -> Result<SemiringValue, String> {
        a.pow(k).map_err(|e| e.to_string())
    }
    fn neg(&self, _: SemiringValue) -> Result<SemiringValue, String> {
        Err("negation not allowed".into())
    }
}

impl SemiringValue {
    pub fn positive_integer(n: BigInt) -> Result<Self, SemiringError> {
        if !n.is_positive() {
            return Err(SemiringError::InvalidValue(SemiringId::PositiveIntegers, n.to_string()));
        }
        Ok(SemiringValue::PositiveInteger(n))
    }

    pub fn positive_rational(q: BigRational) -> Result<Self, SemiringError> {
        if !q.is_positive() {
            return Err(SemiringError::InvalidValue(SemiringId::PositiveRationals, q.to_string()));
        }
        Ok(SemiringValue::PositiveRational(q))
    }

    pub fn tropical_nonneg(n: BigInt) -> Result<Self, SemiringError> {
        if n.is_negative() {
            return Err(SemiringError::InvalidValue(SemiringId::TropicalNonneg, n.to_string()));
        }
        Ok(SemiringValue::TropicalNonneg(n))
    }

    /// A universal-semifield element; the stored form must be subtraction-free.
    pub fn universal(f: RationalFn) -> Result<Self, SemiringError> {
        let r = f.nvars();
        if f.is_zero() || !f.has_nonneg_coeffs() {
            return Err(SemiringError::InvalidValue(SemiringId::Universal(r), f.to_string()));
        }
        Ok(SemiringValue::Universal(f))
    }

    pub fn id(&self) -> SemiringId {
        match self {
            SemiringValue::PositiveInteger(_) => SemiringId::PositiveIntegers,
            SemiringValue::PositiveRational(_) => SemiringId::PositiveRationals,
            SemiringValue::TropicalNonneg(_) => SemiringId::TropicalNonneg,
            SemiringValue::Tropical(_) => SemiringId::TropicalSemifield,
            SemiringValue::Universal(f) => SemiringId::Universal(f.nvars()),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            SemiringValue::PositiveInteger(n) => n.is_one(),
            SemiringValue::PositiveRational(q) => q.is_one(),
            SemiringValue::TropicalNonneg(n) | SemiringValue::Tropical(n) => n.is_zero(),
            SemiringValue::Universal(f) => f.is_one(),
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            SemiringValue::PositiveInteger(n)
            | SemiringValue::TropicalNonneg(n)
            | SemiringValue::Tropical(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_rational_fn(&self) -> Option<&RationalFn> {
        match self {
            SemiringValue::Universal(f) => Some(f),
            _ => None,
        }
    }

    /// Semiring power; negative exponents only in semifields.
    pub fn pow(&self, k: i32) -> Result<Self, SemiringError> {
        if k >= 0 {
            let e = k as u32;
            return Ok(match self {
                SemiringValue::PositiveInteger(n) => SemiringValue::PositiveInteger(num_traits::pow(n.clone(), e as usize)),
                SemiringValue::PositiveRational(q) => SemiringValue::PositiveRational(num_traits::pow(q.clone(), e as usize)),
                SemiringValue::TropicalNonneg(n) => SemiringValue::TropicalNonneg(n * BigInt::from(e)),
                SemiringValue::Tropical(n) => SemiringValue::Tropical(n * BigInt::from(e)),
                SemiringValue::Universal(f) => SemiringValue::Universal(
                    RationalFn::new_subtraction_free(f.numer().pow(e), f.denom().pow(e))
                        .expect("nonzero denominator"),
                ),
            });
        }
        let inv = sr_try_div(&self.id().one(), self)?;
        inv.pow(-k)
    }

    /// Canonical text form, parseable by [`SemiringId::parse_value`].
    pub fn render(&self) -> String {
        match self {
            SemiringValue::PositiveInteger(n)
            | SemiringValue::TropicalNonneg(n)
            | SemiringValue::Tropical(n) => n.to_string(),
            SemiringValue::PositiveRational(q) => q.to_string(),
            SemiringValue::Universal(f) => f.render("y"),
        }
    }
}

impl fmt::Display for SemiringValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for SemiringValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.id(), self.render())
    }
}

impl Serialize for SemiringValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

fn check_same(a: &SemiringValue, b: &SemiringValue) -> Result<(), SemiringError> {
    if a.id() != b.id() {
        return Err(SemiringError::MixedSemirings(a.id(), b.id()));
    }
    Ok(())
}

fn univ(num: LaurentPoly, den: LaurentPoly) -> SemiringValue {
    SemiringValue::Universal(RationalFn::new_subtraction_free(num, den).expect("nonzero denominator"))
}

pub fn sr_add(a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue, SemiringError> {
    use SemiringValue::*;
    check_same(a, b)?;
    Ok(match (a, b) {
        (PositiveInteger(x), PositiveInteger(y)) => PositiveInteger(x + y),
        (PositiveRational(x), PositiveRational(y)) => PositiveRational(x + y),
        (TropicalNonneg(x), TropicalNonneg(y)) => TropicalNonneg(x.max(y).clone()),
        (Tropical(x), Tropical(y)) => Tropical(x.max(y).clone()),
        (Universal(f), Universal(g)) => {
            if f.denom() == g.denom() {
                univ(f.numer() + g.numer(), f.denom().clone())
            } else {
                univ(
                    &(f.numer() * g.denom()) + &(g.numer() * f.denom()),
                    f.denom() * g.denom(),
                )
            }
        }
        _ => unreachable!(),
    })
}

pub fn sr_mul(a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue, SemiringError> {
    use SemiringValue::*;
    check_same(a, b)?;
    Ok(match (a, b) {
        (PositiveInteger(x), PositiveInteger(y)) => PositiveInteger(x * y),
        (PositiveRational(x), PositiveRational(y)) => PositiveRational(x * y),
        (TropicalNonneg(x), TropicalNonneg(y)) => TropicalNonneg(x + y),
        (Tropical(x), Tropical(y)) => Tropical(x + y),
        (Universal(f), Universal(g)) => univ(f.numer() * g.numer(), f.denom() * g.denom()),
        _ => unreachable!(),
    })
}

/// The unique `x` with `b * x = a`, if it lies in the semiring.
pub fn sr_try_div(a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue, SemiringError> {
    use SemiringValue::*;
    check_same(a, b)?;
    let fail = || SemiringError::DivisionFailure(a.id());
    Ok(match (a, b) {
        (PositiveInteger(x), PositiveInteger(y)) => {
            let (q, r) = x.div_rem(y);
            if !r.is_zero() {
                return Err(fail());
            }
            PositiveInteger(q)
        }
        (PositiveRational(x), PositiveRational(y)) => PositiveRational(x / y),
        (TropicalNonneg(x), TropicalNonneg(y)) => {
            let d = x - y;
            if d.is_negative() {
                return Err(fail());
            }
            TropicalNonneg(d)
        }
        (Tropical(x), Tropical(y)) => Tropical(x - y),
        (Universal(f), Universal(g)) => univ(f.numer() * g.denom(), f.denom() * g.numer()),
        _ => unreachable!(),
    })
}

/// Product of `base_i^{e_i}` over nonnegative exponents, `one` if empty.
pub fn sr_product<'a, I>(id: SemiringId, factors: I) -> Result<SemiringValue, SemiringError>
where
    I: IntoIterator<Item = (&'a SemiringValue, u32)>,
{
    let mut acc = id.one();
    for (v, e) in factors {
        if e == 0 {
            continue;
        }
        acc = sr_mul(&acc, &v.pow(e as i32)?)?;
    }
    Ok(acc)
}
