use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::SymbolicError;

/// Multivariate Laurent polynomial with arbitrary-precision integer
/// coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector, so two equal
/// polynomials always have identical internal state and iteration order.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// The coordinate variable with 0-based index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, 1)
    }

    pub fn monomial(nvars: usize, exponents: Vec<i32>, c: impl Into<BigInt>) -> Self {
        assert_eq!(exponents.len(), nvars);
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// Builds a polynomial from arbitrary `(exponents, coefficient)` pairs,
    /// merging repeated exponents.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i32>, BigInt)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[i32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    /// The term that is largest in lexicographic exponent order.
    pub fn leading_term(&self) -> Option<(&Vec<i32>, &BigInt)> {
        self.terms.last_key_value()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Constant term value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn has_nonneg_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Componentwise minimum exponent over all terms; all zeros for the
    /// zero polynomial.
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    pub fn degree_in(&self, var: usize) -> i32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Multiplies by the monomial with the given exponent vector.
    pub fn shift(&self, by: &[i32]) -> Self {
        assert_eq!(by.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(by).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPoly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c * k))
            .collect();
        LaurentPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Divides every coefficient by `k`; `k` must divide all of them.
    pub(crate) fn div_scalar_exact(&self, k: &BigInt) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                debug_assert!((c % k).is_zero());
                (e.clone(), c / k)
            })
            .collect();
        LaurentPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Gcd of the coefficients (non-negative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub(crate) fn add_term(&mut self, e: Vec<i32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Evaluates at a point with exact rational coordinates.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, SymbolicError> {
        assert_eq!(point.len(), self.nvars);
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (x, &k) in point.iter().zip(e) {
                if k < 0 && x.is_zero() {
                    return Err(SymbolicError::PoleAtPoint);
                }
                t *= num_traits::pow::Pow::pow(x, k);
            }
            total += t;
        }
        Ok(total)
    }

    /// Exact division in the polynomial ring; both operands must be
    /// polynomials. Returns `None` when `d` does not divide `self`.
    pub(crate) fn div_exact_poly(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (de, dc) = d.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        if d.len() == 1 {
            // monomial divisor
            let mut out = Self::zero(self.nvars);
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(&dc);
                if !r.is_zero() {
                    return None;
                }
                let qe: Vec<i32> = e.iter().zip(&de).map(|(a, b)| a - b).collect();
                if qe.iter().any(|&x| x < 0) {
                    return None;
                }
                out.terms.insert(qe, q);
            }
            return Some(out);
        }
        // A true quotient has degree deg(self) - deg(d) in every variable;
        // bounding by it stops long lex reductions that cannot succeed.
        let cap: Vec<i32> = (0..self.nvars)
            .map(|v| self.degree_in(v) - d.degree_in(v))
            .collect();
        if cap.iter().any(|&x| x < 0) {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Vec<i32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            if qe.iter().zip(&cap).any(|(&x, &m)| x < 0 || x > m) {
                return None;
            }
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            for (e, c) in &d.terms {
                let ne: Vec<i32> = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(ne, -(c * &qc));
            }
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Splits `self = x^e * P` where `P` is a polynomial divisible by no
    /// variable.
    pub(crate) fn split_monomial(&self) -> (Vec<i32>, LaurentPoly) {
        let m = self.min_exponents();
        let neg: Vec<i32> = m.iter().map(|x| -x).collect();
        (m, self.shift(&neg))
    }

    /// Exact division in the Laurent polynomial ring.
    ///
    /// Returns `Some(q)` with `q * d == self` when such a Laurent polynomial
    /// exists.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        assert_eq!(self.nvars, d.nvars);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        let (en, n) = self.split_monomial();
        let (ed, dp) = d.split_monomial();
        let q = n.div_exact_poly(&dp)?;
        let e: Vec<i32> = en.iter().zip(&ed).map(|(a, b)| a - b).collect();
        Some(q.shift(&e))
    }

    /// Deterministic rendering with variables named `{prefix}1`, `{prefix}2`, ...
    ///
    /// Terms are listed by ascending total degree, then so that lower-indexed
    /// variables come first (`y1^2 + y1*y2 + y2^2`).
    pub fn render(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: i64 = a.iter().map(|&x| x as i64).sum();
            let db: i64 = b.iter().map(|&x| x as i64).sum();
            da.cmp(&db)
                .then_with(|| a.iter().rev().cmp(b.iter().rev()))
        });
        let mut out = String::new();
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let mono = render_monomial(e, prefix);
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => out.push_str(&abs.to_string()),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&abs.to_string());
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }
}

pub(crate) fn render_monomial(e: &[i32], prefix: &str) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("{prefix}{}", i + 1)),
            _ => parts.push(format!("{prefix}{}^{k}", i + 1)),
        }
    }
    parts.join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("y"))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.render("y"))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c.clone());
        }
        big
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = LaurentPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(n: usize, i: usize) -> LaurentPoly {
        LaurentPoly::var(n, i)
    }

    #[test]
    fn square_of_binomial() {
        let one = LaurentPoly::one(1);
        let p = &one + &y(1, 0);
        let sq = &p * &p;
        assert_eq!(sq.render("y"), "1 + 2*y1 + y1^2");
    }

    #[test]
    fn laurent_exponents_cancel() {
        let a = &y(2, 0) * &y(2, 1);
        let inv = LaurentPoly::monomial(2, vec![-1, 0], 1);
        assert_eq!(&a * &inv, y(2, 1));
    }

    #[test]
    fn zeroth_power_is_one() {
        let p = &LaurentPoly::one(2) + &y(2, 1);
        assert!(p.pow(0).is_one());
    }

    #[test]
    fn exact_division_by_monomial() {
        // (y1 y2 + y2) / y1 = y2 + y2 y1^-1
        let num = &(&y(2, 0) * &y(2, 1)) + &y(2, 1);
        let q = num.div_exact(&y(2, 0)).unwrap();
        let expect = &y(2, 1) + &LaurentPoly::monomial(2, vec![-1, 1], 1);
        assert_eq!(q, expect);
    }

    #[test]
    fn non_divisible_returns_none() {
        let one = LaurentPoly::one(1);
        let num = &one + &y(1, 0).pow(2);
        let den = &one + &y(1, 0);
        assert!(num.div_exact(&den).is_none());
    }

    #[test]
    fn multivariate_exact_division() {
        let one = LaurentPoly::one(3);
        let a = &(&one + &y(3, 0)) + &(&y(3, 1) * &y(3, 2));
        let b = &(&y(3, 0) * &y(3, 2)) - &LaurentPoly::constant(3, 3);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        let c = &one + &y(3, 2);
        assert!(prod.div_exact(&c).is_none());
    }

    #[test]
    fn eval_pole() {
        let p = LaurentPoly::monomial(1, vec![-1], 1);
        let r = p.eval(&[BigRational::zero()]);
        assert_eq!(r, Err(SymbolicError::PoleAtPoint));
    }
}
