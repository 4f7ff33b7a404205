//! Multivariate polynomial gcd over the integers.
//!
//! A heuristic evaluation-interpolation gcd is tried first: the main
//! variable is set to a large integer, the gcd of the images is found
//! recursively and lifted back by balanced base-`x` expansion, and the
//! candidate is accepted only if it divides both inputs. When that fails
//! after a few evaluation points, recursive primitive pseudo-remainder
//! sequences on the highest occurring variable give the answer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LaurentPoly;

fn main_var(p: &LaurentPoly) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (e, _) in p.terms() {
        if let Some(v) = e.iter().rposition(|&k| k != 0) {
            best = Some(best.map_or(v, |b| b.max(v)));
        }
    }
    best
}

/// Coefficients of `p` viewed as a univariate polynomial in `v`.
fn coeffs_in(p: &LaurentPoly, v: usize) -> BTreeMap<i32, LaurentPoly> {
    let n = p.nvars();
    let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
    for (e, c) in p.terms() {
        let mut e2 = e.clone();
        let k = std::mem::replace(&mut e2[v], 0);
        out.entry(k)
            .or_insert_with(|| LaurentPoly::zero(n))
            .add_term(e2, c.clone());
    }
    out
}

fn leading_coeff_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let d = p.degree_in(v);
    coeffs_in(p, v).remove(&d).unwrap_or_else(|| LaurentPoly::zero(p.nvars()))
}

/// Makes the lex-leading coefficient positive.
fn normalize_sign(p: LaurentPoly) -> LaurentPoly {
    match p.leading_term() {
        Some((_, c)) if c.is_negative() => -p,
        _ => p,
    }
}

fn content_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let mut g = LaurentPoly::zero(p.nvars());
    for c in coeffs_in(p, v).into_values() {
        g = poly_gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let c = content_in(p, v);
    if c.is_one() {
        return p.clone();
    }
    p.div_exact_poly(&c).expect("content divides polynomial")
}

/// Pseudo-remainder of `a` by `b` with respect to variable `v`.
fn prem(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> LaurentPoly {
    let db = b.degree_in(v);
    let lb = leading_coeff_in(b, v);
    let n = a.nvars();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(v);
        if dr < db {
            return r;
        }
        let lr = leading_coeff_in(&r, v);
        let mut shift = vec![0; n];
        shift[v] = dr - db;
        r = &(&r * &lb) - &(&b.shift(&shift) * &lr);
    }
}

fn max_norm(p: &LaurentPoly) -> BigInt {
    p.terms().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

/// `p` with variable `v` set to the integer `x`.
fn eval_at(p: &LaurentPoly, v: usize, x: &BigInt) -> LaurentPoly {
    let mut powers: Vec<BigInt> = vec![BigInt::one()];
    let mut out = LaurentPoly::zero(p.nvars());
    for (e, c) in p.terms() {
        let k = e[v] as usize;
        while powers.len() <= k {
            let next = powers.last().unwrap() * x;
            powers.push(next);
        }
        let mut e2 = e.clone();
        e2[v] = 0;
        out.add_term(e2, c * &powers[k]);
    }
    out
}

/// Balanced remainder of `c` modulo `x`, in `(-x/2, x/2]`.
fn sym_mod(c: &BigInt, x: &BigInt) -> BigInt {
    let r = c.mod_floor(x);
    if &r * 2 > *x {
        r - x
    } else {
        r
    }
}

/// Rebuilds a polynomial in `v` from its image at `v = x` by balanced
/// base-`x` expansion of every coefficient.
fn interpolate(mut h: LaurentPoly, v: usize, x: &BigInt) -> LaurentPoly {
    let n = h.nvars();
    let mut out = LaurentPoly::zero(n);
    let mut k = 0;
    while !h.is_zero() {
        let mut digit = LaurentPoly::zero(n);
        for (e, c) in h.terms() {
            digit.add_term(e.clone(), sym_mod(c, x));
        }
        for (e, c) in digit.terms() {
            let mut e2 = e.clone();
            e2[v] = k;
            out.add_term(e2, c.clone());
        }
        h = (&h - &digit).div_scalar_exact(x);
        k += 1;
    }
    out
}

fn primitive_integer(p: LaurentPoly) -> LaurentPoly {
    let c = p.content();
    if c.is_zero() || c.is_one() {
        p
    } else {
        p.div_scalar_exact(&c)
    }
}

/// Heuristic gcd of nonzero polynomials with trivial common integer
/// content; `None` when no evaluation point certified a result.
fn heu_gcd(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let n = a.nvars();
    let v = match (main_var(a), main_var(b)) {
        (None, None) => return Some(LaurentPoly::constant(n, a.content().gcd(&b.content()))),
        (Some(x), None) | (None, Some(x)) => x,
        (Some(x), Some(y)) => x.max(y),
    };
    let (na, nb) = (max_norm(a), max_norm(b));
    let bound: BigInt = 2 * na.clone().min(nb.clone()) + 29;
    let lc = |p: &LaurentPoly| p.leading_term().map(|(_, c)| c.abs()).unwrap_or_else(BigInt::one);
    let ratio = (&na / lc(a)).min(&nb / lc(b));
    let mut x: BigInt = bound.clone().min(99 * bound.sqrt()).max(2 * ratio + 2);
    for _ in 0..6 {
        let ea = eval_at(a, v, &x);
        let eb = eval_at(b, v, &x);
        if !ea.is_zero() && !eb.is_zero() {
            let ca = ea.content().gcd(&eb.content());
            let (ea, eb) = (ea.div_scalar_exact(&ca), eb.div_scalar_exact(&ca));
            if let Some(h) = heu_gcd(&ea, &eb) {
                let h = h.scale(&ca);
                let cand = normalize_sign(primitive_integer(interpolate(h, v, &x)));
                if !cand.is_zero()
                    && a.div_exact_poly(&cand).is_some()
                    && b.div_exact_poly(&cand).is_some()
                {
                    return Some(cand);
                }
            }
        }
        x = (&x * 73_794 * x.sqrt().sqrt()) / 27_011;
    }
    None
}

/// Greatest common divisor of two polynomials with integer coefficients.
///
/// The result is normalized to a positive lex-leading coefficient;
/// `gcd(0, 0) = 0`. Both inputs must be polynomials (no negative exponents).
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    debug_assert!(a.is_polynomial() && b.is_polynomial());
    if !a.is_zero() && !b.is_zero() {
        let g = a.content().gcd(&b.content());
        let (pa, pb) = (primitive_integer(a.clone()), primitive_integer(b.clone()));
        if let Some(h) = heu_gcd(&pa, &pb) {
            return h.scale(&g);
        }
    }
    prs_gcd(a, b)
}

fn prs_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    let n = a.nvars();
    let (va, vb) = (main_var(a), main_var(b));
    let v = match (va, vb) {
        (None, None) => {
            let g: BigInt = a.content().gcd(&b.content());
            return LaurentPoly::constant(n, g);
        }
        (Some(x), None) | (None, Some(x)) => x,
        (Some(x), Some(y)) => x.max(y),
    };
    if a.degree_in(v) == 0 {
        return poly_gcd(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return poly_gcd(&content_in(a, v), b);
    }
    // Fast path: one operand divides the other.
    if a.div_exact_poly(b).is_some() {
        return normalize_sign(b.clone());
    }
    if b.div_exact_poly(a).is_some() {
        return normalize_sign(a.clone());
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = poly_gcd(&ca, &cb);
    let mut p = a.div_exact_poly(&ca).expect("content divides");
    let mut q = b.div_exact_poly(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break primitive_part(&q, v);
        }
        if r.degree_in(v) == 0 {
            break LaurentPoly::one(n);
        }
        p = q;
        q = primitive_part(&r, v);
    };
    normalize_sign(&c * &g)
}

/// Integer gcd helper that treats zero as the identity.
pub(crate) fn int_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let g = a.gcd(b);
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(n: usize, i: usize) -> LaurentPoly {
        LaurentPoly::var(n, i)
    }

    fn c(n: usize, k: i64) -> LaurentPoly {
        LaurentPoly::constant(n, k)
    }

    #[test]
    fn univariate() {
        // (y+1)(y+2) and (y+1)(y-3)
        let a = &(&y(1, 0) + &c(1, 1)) * &(&y(1, 0) + &c(1, 2));
        let b = &(&y(1, 0) + &c(1, 1)) * &(&y(1, 0) - &c(1, 3));
        assert_eq!(poly_gcd(&a, &b), &y(1, 0) + &c(1, 1));
    }

    #[test]
    fn integer_content() {
        let a = &y(2, 0).scale(&6.into()) + &c(2, 4);
        let b = &y(2, 0).scale(&9.into()) + &c(2, 6);
        assert_eq!(poly_gcd(&a, &b), &y(2, 0).scale(&3.into()) + &c(2, 2));
    }

    #[test]
    fn bivariate_common_factor() {
        let n = 2;
        let f = &(&y(n, 0) * &y(n, 1)) + &c(n, 1);
        let g1 = &y(n, 0) + &y(n, 1);
        let g2 = &(&y(n, 0) * &y(n, 0)) - &y(n, 1);
        let a = &f * &g1;
        let b = &f * &g2;
        assert_eq!(poly_gcd(&a, &b), f);
    }

    #[test]
    fn coprime() {
        let a = &y(3, 0) + &y(3, 2);
        let b = &y(3, 1) + &c(3, 1);
        assert!(poly_gcd(&a, &b).is_one());
    }

    #[test]
    fn sign_normalized() {
        let a = -(&y(1, 0) + &c(1, 1));
        let g = poly_gcd(&a, &LaurentPoly::zero(1));
        assert_eq!(g, &y(1, 0) + &c(1, 1));
    }

    #[test]
    fn heuristic_agrees_with_prs() {
        let n = 2;
        let f = &(&(&y(n, 0) * &y(n, 1)) - &c(n, 3)) * &(&y(n, 1) + &c(n, 2));
        let g1 = &(&y(n, 0) * &y(n, 0)).scale(&5.into()) + &y(n, 1);
        let g2 = &(&y(n, 1) * &y(n, 1) * &y(n, 1)) - &y(n, 0).scale(&7.into());
        let a = &f * &g1;
        let b = &f * &g2;
        let h = poly_gcd(&a, &b);
        assert_eq!(h, normalize_sign(f));
        assert_eq!(h, prs_gcd(&a, &b));
    }
}
