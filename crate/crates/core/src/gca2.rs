//! Rank-2 generalized cluster algebras with exchange polynomials
//! `P_n(t) = (1+t)^n`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::CartanMatrix;
use crate::mutation::{belt, Flavor, MutationError};
use crate::symbolic::{RationalFn, SymbolicError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GcaParams {
    pub b: u32,
    pub c: u32,
}

impl GcaParams {
    pub fn new(b: u32, c: u32) -> Self {
        assert!(b >= 1 && c >= 1, "b and c must be positive");
        GcaParams { b, c }
    }

    /// Parameters of `[[2,-b],[-c,2]]`.
    pub fn from_cartan(a: &CartanMatrix) -> Option<Self> {
        if a.rank() != 2 || a.get(0, 1) >= 0 || a.get(1, 0) >= 0 {
            return None;
        }
        Some(GcaParams::new((-a.get(0, 1)) as u32, (-a.get(1, 0)) as u32))
    }

    pub fn cartan(&self) -> CartanMatrix {
        crate::cartan::validate_cartan(vec![vec![2, -(self.b as i64)], vec![-(self.c as i64), 2]])
            .expect("rank-2 matrix with negative off-diagonal entries is a Cartan matrix")
    }

    pub fn is_finite_type(&self) -> bool {
        self.b * self.c <= 3
    }

    /// Exponent of the relation `x_k x_{k+2} = (1 + x_{k+1})^n`.
    pub fn exponent(&self, k: i64) -> u32 {
        if k.rem_euclid(2) == 1 {
            self.c
        } else {
            self.b
        }
    }
}

/// `x_k` for `k` in `lo..=hi`, as rational functions of `x_1, x_2`.
#[derive(Debug, Clone)]
pub struct GcaVariableTable {
    params: GcaParams,
    lo: i64,
    hi: i64,
    vars: Vec<RationalFn>,
    period: Option<i64>,
}

pub fn gca_variables(p: GcaParams, lo: i64, hi: i64) -> GcaVariableTable {
    assert!(lo <= 1 && hi >= 2, "range must contain 1 and 2");
    let one = RationalFn::one(2);
    let step = |prev: &RationalFn, mid: &RationalFn, n: u32| -> RationalFn {
        (&one + mid)
            .pow(n as i32)
            .and_then(|t| t.checked_div(prev))
            .expect("cluster variables are nonzero")
    };
    let mut fwd = vec![RationalFn::var(2, 0), RationalFn::var(2, 1)];
    for k in 1..=hi - 2 {
        let n = fwd.len();
        let next = step(&fwd[n - 2], &fwd[n - 1], p.exponent(k));
        fwd.push(next);
    }
    let mut back: Vec<RationalFn> = Vec::new();
    for k in (lo..1).rev() {
        // x_k = P(x_{k+1}) / x_{k+2}
        let (x1, x2) = match back.len() {
            0 => (&fwd[0], &fwd[1]),
            1 => (&back[0], &fwd[0]),
            n => (&back[n - 1], &back[n - 2]),
        };
        let next = step(x2, x1, p.exponent(k));
        back.push(next);
    }
    back.reverse();
    back.extend(fwd);
    let mut t = GcaVariableTable {
        params: p,
        lo,
        hi,
        vars: back,
        period: None,
    };
    t.period = (1..=hi - 2).find(|&d| t.get(1 + d) == t.get(1) && t.get(2 + d) == t.get(2));
    t
}

impl GcaVariableTable {
    pub fn params(&self) -> GcaParams {
        self.params
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn get(&self, k: i64) -> &RationalFn {
        assert!((self.lo..=self.hi).contains(&k), "x_{k} outside table");
        &self.vars[(k - self.lo) as usize]
    }

    /// Least `d` with `x_{1+d} = x_1` and `x_{2+d} = x_2` inside the table.
    pub fn period(&self) -> Option<i64> {
        self.period
    }

    /// The defining relation at every interior `k`.
    pub fn relations_hold(&self) -> bool {
        let one = RationalFn::one(2);
        (self.lo..=self.hi - 2).all(|k| {
            let lhs = self.get(k) * self.get(k + 2);
            let rhs = (&one + self.get(k + 1)).pow(self.params.exponent(k) as i32);
            rhs.is_ok_and(|r| lhs == r)
        })
    }

    /// Every variable is a Laurent polynomial with nonnegative coefficients.
    pub fn laurent_positive(&self) -> bool {
        self.vars
            .iter()
            .all(|v| v.as_laurent().is_some_and(|p| p.has_nonneg_coeffs()))
    }

    pub fn render(&self, k: i64) -> String {
        self.get(k).render("x")
    }
}

const PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Recursion modulo a prime from `(x_1, x_2) = start`; `None` on a zero
/// divisor.
fn modular_sequence(p: GcaParams, start: (u64, u64), n: i64) -> Option<Vec<u64>> {
    let mut xs = vec![start.0, start.1];
    for k in 1..=n - 2 {
        let len = xs.len();
        let prev = xs[len - 2];
        if prev == 0 {
            return None;
        }
        let num = powmod((1 + xs[len - 1]) % PRIME, p.exponent(k) as u64);
        xs.push(mulmod(num, powmod(prev, PRIME - 2)));
    }
    Some(xs)
}

/// Least period `d <= maxk` with `x_{k+d} = x_k`, compared as canonical
/// rational functions.
///
/// Candidates are screened by evaluating the recursion modulo a large prime
/// before the symbolic comparison, so infinite-type parameters do not build
/// large symbolic tables.
pub fn gca_period(p: GcaParams, maxk: i64) -> Option<i64> {
    let points = [(1_234_567, 7_654_321), (987_654_321, 123_457), (31_337, 271_828)];
    let seq = points
        .iter()
        .find_map(|&pt| modular_sequence(p, pt, maxk + 2))?;
    for d in 1..=maxk {
        if seq[d as usize] == seq[0] && seq[d as usize + 1] == seq[1] {
            let t = gca_variables(p, 1, d + 2);
            if t.period() == Some(d) {
                return Some(d);
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionTest {
    pub inside: bool,
    /// The range was cut off at `maxk` rather than covering a full period.
    pub truncated: bool,
}

fn eval_step(prev: &BigRational, mid: &BigRational, n: u32) -> BigRational {
    num_traits::pow(BigRational::one() + mid, n as usize) / prev
}

/// Whether every cluster variable `x_k` is at least 1 at `(x_1, x_2) = point`.
///
/// In finite type the range is one full period. Otherwise `x_k` is checked
/// for `|k| <= maxk` and the result is flagged as truncated.
pub fn superunitary_contains(
    p: GcaParams,
    point: (&BigRational, &BigRational),
    maxk: i64,
) -> Result<RegionTest, SymbolicError> {
    if !point.0.is_positive() || !point.1.is_positive() {
        return Err(SymbolicError::PoleAtPoint);
    }
    let one = BigRational::one();
    if point.0 < &one || point.1 < &one {
        return Ok(RegionTest {
            inside: false,
            truncated: false,
        });
    }
    let period = if p.is_finite_type() { gca_period(p, 8) } else { None };
    let (fwd_steps, back_steps, truncated) = match period {
        Some(d) => (d, 0, false),
        None => (maxk, maxk, true),
    };
    let mut a = point.0.clone();
    let mut b = point.1.clone();
    for k in 1..=fwd_steps - 2 {
        let next = eval_step(&a, &b, p.exponent(k));
        if next < one {
            return Ok(RegionTest { inside: false, truncated: false });
        }
        a = std::mem::replace(&mut b, next);
    }
    let (mut a, mut b) = (point.1.clone(), point.0.clone());
    for k in (1 - back_steps..1).rev() {
        let next = eval_step(&a, &b, p.exponent(k));
        if next < one {
            return Ok(RegionTest { inside: false, truncated: false });
        }
        a = std::mem::replace(&mut b, next);
    }
    Ok(RegionTest { inside: true, truncated })
}

/// CSV raster `x,y,inside` over `(lo, hi]^2` with `n` steps per axis.
pub fn region_csv(p: GcaParams, lo: &BigRational, hi: &BigRational, n: u32, maxk: i64) -> String {
    let step = (hi - lo) / BigInt::from(n);
    let coords: Vec<BigRational> = (1..=n).map(|i| lo + &step * BigInt::from(i)).collect();
    let cells: Vec<(usize, usize)> = (0..coords.len())
        .flat_map(|i| (0..coords.len()).map(move |j| (i, j)))
        .collect();
    let rows: Vec<String> = cells
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&coords[i], &coords[j]);
            let inside = x.is_positive()
                && y.is_positive()
                && superunitary_contains(p, (x, y), maxk).is_ok_and(|t| t.inside);
            format!("{x},{y},{}", u8::from(inside))
        })
        .collect();
    let mut out = String::from("x,y,inside\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

/// Checks `y(i,m) = x_{2m+i}` under `y(1,0) -> x_1`, `y(2,0) -> x_2`
/// for all `m` in `lo..=hi`.
pub fn phi_check(a: &CartanMatrix, lo: i64, hi: i64) -> Result<bool, MutationError> {
    let p = GcaParams::from_cartan(a).ok_or_else(|| {
        MutationError::InvariantViolation("phi needs a rank-2 matrix [[2,-b],[-c,2]]".into())
    })?;
    let (blo, bhi) = (lo.min(0), hi.max(0));
    let yb = belt(a, Flavor::Y, blo, bhi)?;
    // root coordinates in terms of y(1,0), y(2,0): y_1 = x_1, y_2 = x_2 (1+x_1)^{-b}
    let x1 = RationalFn::var(2, 0);
    let x2 = RationalFn::var(2, 1);
    let y2 = x2.checked_div(&(&RationalFn::one(2) + &x1).pow(p.b as i32)?)?;
    let subst = [x1, y2];
    let t = gca_variables(p, 2 * blo + 1, 2 * bhi + 2);
    for m in lo..=hi {
        for i in 0..2 {
            if !yb.var(i, m).substitute_eq(&subst, t.get(2 * m + i as i64 + 1))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Positive integer points `(x_1, x_2)` in `[1,cap]^2` at which every
/// cluster variable of one period is a positive integer.
pub fn gca_friezes(p: GcaParams, cap: u64) -> Option<Vec<(u64, u64)>> {
    let d = gca_period(p, 16)?;
    let mut out = Vec::new();
    for x1 in 1..=cap {
        'pt: for x2 in 1..=cap {
            let (mut a, mut b) = (BigInt::from(x1), BigInt::from(x2));
            for k in 1..=d {
                let num = num_traits::pow(BigInt::one() + &b, p.exponent(k) as usize);
                if !(&num % &a).is_zero() {
                    continue 'pt;
                }
                let next = num / &a;
                a = std::mem::replace(&mut b, next);
            }
            out.push((x1, x2));
        }
    }
    Some(out)
}

/// Frieze values `(x_1, x_2)` obtained by setting each cluster
/// `(x_k, x_{k+1})` of one period to `(1, 1)`, in order of `k`.
pub fn cluster_friezes(p: GcaParams) -> Option<Vec<(BigInt, BigInt)>> {
    let d = gca_period(p, 16)?;
    let mut out = Vec::new();
    for k in 1..=d {
        // walk forward from index k to indices d+1, d+2, which equal x_1, x_2
        let (mut a, mut b) = (BigRational::one(), BigRational::one());
        for idx in k..=d {
            let next = eval_step(&a, &b, p.exponent(idx));
            a = std::mem::replace(&mut b, next);
        }
        if !a.is_integer() || !b.is_integer() {
            return None;
        }
        out.push((a.to_integer(), b.to_integer()));
    }
    Some(out)
}

/// Distinct initial pairs among [`cluster_friezes`].
pub fn distinct_cluster_friezes(p: GcaParams) -> Option<BTreeSet<(BigInt, BigInt)>> {
    cluster_friezes(p).map(|v| v.into_iter().collect())
}
