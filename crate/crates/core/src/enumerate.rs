//! Exhaustive search for positive-integer patterns in finite type, the a
//! priori entry bound, and tropical Y-friezes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cartan::{matmul, CartanError, CartanMatrix, IntMatrix};
use crate::frieze::{check_glide, ensemble_image, knit, FriezeError, PatternKind};
use crate::semiring::SemiringId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Frieze(#[from] FriezeError),
    #[error("cap must give one positive maximum per row")]
    BadCap,
    #[error("pattern values exceed 128-bit integers")]
    Overflow,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

fn big_strings<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(v) => s.collect_seq(v.iter().map(|x| x.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub cartan: String,
    pub kind: PatternKind,
    pub cap: Vec<u64>,
    #[serde(serialize_with = "big_strings")]
    pub bound: Option<Vec<BigInt>>,
    /// Column-0 vectors, sorted, without duplicates.
    pub patterns: Vec<Vec<u64>>,
    /// Every cap covers the proven bound.
    pub complete: bool,
}

impl EnumerationReport {
    pub fn count(&self) -> usize {
        self.patterns.len()
    }

    /// Largest value seen in each row of the column-0 vectors.
    pub fn row_maxima(&self) -> Vec<u64> {
        let r = self.cap.len();
        (0..r)
            .map(|i| self.patterns.iter().map(|p| p[i]).max().unwrap_or(0))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Exponents `e_i` with `b_i = 2^{e_i} = prod_{j != i} 2^{-a_ji}`.
fn bound_exponents(a: &CartanMatrix) -> Vec<i64> {
    let r = a.rank();
    (0..r)
        .map(|i| (0..r).filter(|&j| j != i).map(|j| -a.get(j, i)).sum())
        .collect()
}

/// Exact rational inverse by Gauss-Jordan elimination.
fn rational_inverse(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let r = m.len();
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<BigRational> = row.iter().map(|&x| q(x)).collect();
            v.extend((0..r).map(|j| q(i64::from(i == j))));
            v
        })
        .collect();
    for c in 0..r {
        let p = (c..r).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..r {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(pivot) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[r..].to_vec()).collect())
}

/// Componentwise entry bound `floor(2^{p sum_i e_i (A^{-1})_{ij}})` with
/// `p = h + 2` for arithmetic Y-frieze patterns.
///
/// The product of the `p` entries of row `j` over a period is at most the
/// `j`-th component, so every entry is too.
pub fn theorem_bound(a: &CartanMatrix) -> Result<Vec<BigInt>, EnumerateError> {
    if !a.is_indecomposable() {
        return Err(CartanError::NotFiniteType.into());
    }
    let h = a.coxeter_number()?;
    let p = h + 2;
    let inv = rational_inverse(a.entries()).ok_or(CartanError::NotFiniteType)?;
    let e = bound_exponents(a);
    let r = a.rank();
    Ok((0..r)
        .map(|j| {
            let mut x = BigRational::zero();
            for (i, &ei) in e.iter().enumerate() {
                x += &inv[i][j] * BigInt::from(ei * p);
            }
            // floor(2^{n/d}) = floor(d-th root of 2^n)
            let n = x.numer().to_u32().expect("nonnegative exponent");
            let d = x.denom().to_u32().expect("small denominator");
            (BigInt::one() << n).nth_root(d)
        })
        .collect())
}

/// Rows feeding each relation: `(j, -a_ji)` for `j != i` with `a_ji != 0`.
struct Relations {
    kind: PatternKind,
    below: Vec<Vec<(usize, u32)>>,
    above: Vec<Vec<(usize, u32)>>,
    /// Largest `j > i` entering row `i`, or `i` itself.
    reach: Vec<usize>,
}

impl Relations {
    fn new(a: &CartanMatrix, kind: PatternKind) -> Self {
        let r = a.rank();
        let mut below = vec![Vec::new(); r];
        let mut above = vec![Vec::new(); r];
        for i in 0..r {
            for j in 0..r {
                let e = -a.get(j, i);
                if j == i || e == 0 {
                    continue;
                }
                if j > i {
                    above[i].push((j, e as u32));
                } else {
                    below[i].push((j, e as u32));
                }
            }
        }
        let reach = (0..r)
            .map(|i| above[i].iter().map(|&(j, _)| j).max().unwrap_or(i))
            .collect();
        Relations {
            kind,
            below,
            above,
            reach,
        }
    }

    /// `v(i,m+1)` from column `m` and the rows of column `m+1` below `i`;
    /// `Some(None)` when the quotient is not an integer, `None` on overflow.
    fn next(&self, i: usize, prev: &[i128], next: &[i128]) -> Option<Option<i128>> {
        let mut prod: i128 = 1;
        let factors = self.above[i]
            .iter()
            .map(|&(j, e)| (prev[j], e))
            .chain(self.below[i].iter().map(|&(j, e)| (next[j], e)));
        for (v, e) in factors {
            let base = match self.kind {
                PatternKind::Frieze => v,
                PatternKind::YFrieze => v.checked_add(1)?,
            };
            prod = prod.checked_mul(base.checked_pow(e)?)?;
        }
        let rhs = match self.kind {
            PatternKind::Frieze => prod.checked_add(1)?,
            PatternKind::YFrieze => prod,
        };
        Some((rhs % prev[i] == 0).then(|| rhs / prev[i]))
    }
}

/// Depth-first search over column 0 in row order. Each new entry extends
/// every later column as far as its inputs are known, and a non-integral
/// quotient prunes the branch.
struct Search<'a> {
    rel: &'a Relations,
    r: usize,
    cap: &'a [u64],
    cols: Vec<Vec<i128>>,
    found: Vec<Vec<u64>>,
    overflow: bool,
}

impl Search<'_> {
    /// Extends columns after a new entry in column 0; false prunes.
    fn propagate(&mut self) -> bool {
        for c in 0..self.cols.len() - 1 {
            loop {
                let i = self.cols[c + 1].len();
                let known = self.cols[c].len();
                if i >= self.r || i >= known || self.rel.reach[i] >= known {
                    break;
                }
                let (head, tail) = self.cols.split_at_mut(c + 1);
                match self.rel.next(i, &head[c], &tail[0]) {
                    Some(Some(v)) if v > 0 => tail[0].push(v),
                    Some(_) => return false,
                    None => {
                        self.overflow = true;
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize) {
        if depth == self.r {
            let last = self.cols.last().unwrap();
            if last.len() == self.r && last == &self.cols[0] {
                self.found.push(self.cols[0].iter().map(|&v| v as u64).collect());
            }
            return;
        }
        for v in 1..=self.cap[depth] {
            let saved: Vec<usize> = self.cols.iter().map(Vec::len).collect();
            self.cols[0].push(v as i128);
            if self.propagate() {
                self.run(depth + 1);
            }
            for (c, n) in self.cols.iter_mut().zip(saved) {
                c.truncate(n);
            }
        }
    }
}

/// All positive-integer patterns of the given kind whose column-0 entries
/// respect the per-row caps.
///
/// Candidates are knitted over one full period `h+2` and accepted when they
/// return to column 0; each accepted pattern is then re-knitted exactly and
/// checked for the relations and the glide symmetry.
pub fn enumerate_patterns(
    a: &CartanMatrix,
    kind: PatternKind,
    cap: &[u64],
) -> Result<EnumerationReport, EnumerateError> {
    let r = a.rank();
    if cap.len() != r || cap.contains(&0) {
        return Err(EnumerateError::BadCap);
    }
    let h = a.coxeter_number()?;
    let ncols = (h + 3) as usize;
    let rel = Relations::new(a, kind);
    let mut patterns: Vec<Vec<u64>> = (1..=cap[0])
        .into_par_iter()
        .map(|v0| {
            let mut s = Search {
                rel: &rel,
                r,
                cap,
                cols: vec![Vec::with_capacity(r); ncols],
                found: Vec::new(),
                overflow: false,
            };
            s.cols[0].push(v0 as i128);
            if s.propagate() {
                s.run(1);
            }
            (s.found, s.overflow)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .map(|(found, overflow)| if overflow { Err(EnumerateError::Overflow) } else { Ok(found) })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    patterns.sort();
    patterns.dedup();

    let zpos = SemiringId::PositiveIntegers;
    for p in &patterns {
        let init = p
            .iter()
            .map(|&v| zpos.from_int(v))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| EnumerateError::InvariantViolation(e.to_string()))?;
        let w = knit(a, zpos, kind, &init, 0, h + 2)?;
        if !w.has_period(h + 2) || w.first_violation().is_some() || !check_glide(&w)? {
            return Err(EnumerateError::InvariantViolation(format!(
                "accepted vector {p:?} does not give a periodic glide-invariant pattern"
            )));
        }
    }

    let bound = match kind {
        PatternKind::YFrieze if a.is_indecomposable() => Some(theorem_bound(a)?),
        _ => None,
    };
    let complete = bound
        .as_ref()
        .is_some_and(|b| b.iter().zip(cap).all(|(k, &c)| BigInt::from(c) >= *k));
    Ok(EnumerationReport {
        cartan: a.name(),
        kind,
        cap: cap.to_vec(),
        bound,
        patterns,
        complete,
    })
}

/// Whether column 1 of every listed pattern is again listed.
pub fn translation_closed(a: &CartanMatrix, report: &EnumerationReport) -> Result<bool, EnumerateError> {
    let zpos = SemiringId::PositiveIntegers;
    let set: BTreeSet<&Vec<u64>> = report.patterns.iter().collect();
    for p in &report.patterns {
        let init: Vec<_> = p.iter().map(|&v| zpos.from_int(v).expect("positive")).collect();
        let w = knit(a, zpos, report.kind, &init, 0, 1)?;
        let next: Option<Vec<u64>> = w.column(1).iter().map(|v| v.as_integer()?.to_u64()).collect();
        if !next.is_some_and(|n| set.contains(&n)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One step `f_{m+1} = C f_m` of the tropical Y-frieze recursion. On
/// nonnegative values `1 + k` is `max(0, k) = k`, so the relation is linear.
fn tropical_step(a: &CartanMatrix, f: &[i64]) -> Vec<i64> {
    let r = a.rank();
    let mut next: Vec<i64> = Vec::with_capacity(r);
    for i in 0..r {
        let mut s = -f[i];
        for j in 0..r {
            let e = -a.get(j, i);
            if j == i || e == 0 {
                continue;
            }
            let v = if j > i { f[j] } else { next[j] };
            s += e * v;
        }
        next.push(s);
    }
    next
}

/// The matrix of the tropical step on nonnegative vectors, column by column.
pub fn tropical_matrix(a: &CartanMatrix) -> IntMatrix {
    let r = a.rank();
    let cols: Vec<Vec<i64>> = (0..r)
        .map(|k| {
            let e: Vec<i64> = (0..r).map(|i| i64::from(i == k)).collect();
            tropical_step(a, &e)
        })
        .collect();
    (0..r).map(|i| (0..r).map(|k| cols[k][i]).collect()).collect()
}

/// `I + C + ... + C^{h-1}` for the Coxeter companion `C`.
pub fn coxeter_orbit_sum(a: &CartanMatrix) -> Result<IntMatrix, EnumerateError> {
    let h = a.coxeter_number()? as usize;
    let c = a.coxeter_companion().companion;
    let r = a.rank();
    let mut power: IntMatrix = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    let mut sum = vec![vec![0; r]; r];
    for _ in 0..h {
        for (srow, prow) in sum.iter_mut().zip(&power) {
            for (s, p) in srow.iter_mut().zip(prow) {
                *s += p;
            }
        }
        power = matmul(&c, &power);
    }
    Ok(sum)
}

/// All tropical Y-friezes with values in the nonnegative integers, as
/// column-0 vectors.
///
/// On nonnegative vectors the relation is the linear map `C`, and
/// `I + C + ... + C^{h-1} = 0` forces every nonnegative orbit to vanish;
/// both facts are checked here rather than assumed.
pub fn tropical_y_friezes(a: &CartanMatrix) -> Result<Vec<Vec<i64>>, EnumerateError> {
    if !a.is_indecomposable() {
        return Err(CartanError::NotFiniteType.into());
    }
    let c = a.coxeter_companion().companion;
    if tropical_matrix(a) != c {
        return Err(EnumerateError::InvariantViolation(
            "tropical step differs from the Coxeter companion".into(),
        ));
    }
    let sum = coxeter_orbit_sum(a)?;
    if sum.iter().flatten().any(|&x| x != 0) {
        return Err(EnumerateError::InvariantViolation(
            "I + C + ... + C^{h-1} is not zero".into(),
        ));
    }
    // the orbit of a nonnegative f_0 sums to zero, so every term is zero
    let zero = vec![0; a.rank()];
    let h = a.coxeter_number()?;
    let mut f = zero.clone();
    for _ in 0..h {
        f = tropical_step(a, &f);
        if f != zero {
            return Err(EnumerateError::InvariantViolation("zero orbit left zero".into()));
        }
    }
    Ok(vec![zero])
}

/// Comparison of the ensemble images of all enumerated friezes with the
/// enumerated Y-friezes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub cartan: String,
    pub friezes: usize,
    pub y_friezes: usize,
    /// Distinct column-0 vectors of the images.
    pub image: Vec<Vec<u64>>,
    /// Y-friezes not in the image.
    pub missing: Vec<Vec<u64>>,
    /// Images not among the enumerated Y-friezes; empty unless the caps are
    /// too small.
    pub stray: Vec<Vec<u64>>,
}

pub fn image_coverage(
    a: &CartanMatrix,
    frieze_cap: &[u64],
    y_cap: &[u64],
) -> Result<CoverageReport, EnumerateError> {
    let h = a.coxeter_number()?;
    let fr = enumerate_patterns(a, PatternKind::Frieze, frieze_cap)?;
    let yr = enumerate_patterns(a, PatternKind::YFrieze, y_cap)?;
    let zpos = SemiringId::PositiveIntegers;
    let mut image = BTreeSet::new();
    for p in &fr.patterns {
        let init: Vec<_> = p.iter().map(|&v| zpos.from_int(v).expect("positive")).collect();
        let w = knit(a, zpos, PatternKind::Frieze, &init, 0, h + 2)?;
        let img = ensemble_image(&w)?;
        if img.first_violation().is_some() {
            return Err(EnumerateError::InvariantViolation(format!("image of {p:?} does not verify")));
        }
        let col: Vec<u64> = img
            .column(0)
            .iter()
            .map(|v| v.as_integer().and_then(|x| x.to_u64()).expect("small positive"))
            .collect();
        image.insert(col);
    }
    let ys: BTreeSet<Vec<u64>> = yr.patterns.iter().cloned().collect();
    Ok(CoverageReport {
        cartan: a.name(),
        friezes: fr.count(),
        y_friezes: yr.count(),
        missing: ys.difference(&image).cloned().collect(),
        stray: image.difference(&ys).cloned().collect(),
        image: image.into_iter().collect(),
    })
}

/// Sign check used by callers that hold a bound and a cap.
pub fn cap_covers(bound: &[BigInt], cap: &[u64]) -> bool {
    bound.len() == cap.len() && bound.iter().zip(cap).all(|(b, &c)| !b.is_negative() && BigInt::from(c) >= *b)
}
