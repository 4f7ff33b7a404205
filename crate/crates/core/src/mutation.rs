//! Matrix and seed mutation, the belt walk, and the checks built on it.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::cartan::{CartanMatrix, IntMatrix};
use crate::frieze::{FriezeError, PatternKind, PatternWindow};
use crate::semiring::SemiringId;
use crate::symbolic::{LaurentPoly, RationalFn, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MutationError {
    #[error("matrix is not skew-symmetrizable")]
    NotSkewSymmetrizable,
    #[error("direction {0} out of range")]
    BadDirection(usize),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Frieze(#[from] FriezeError),
}

/// Skew-symmetrizable integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MutationMatrix {
    b: IntMatrix,
}

impl MutationMatrix {
    pub fn new(b: IntMatrix) -> Result<Self, MutationError> {
        let r = b.len();
        if b.iter().any(|row| row.len() != r) {
            return Err(MutationError::NotSkewSymmetrizable);
        }
        if skew_symmetrizer(&b).is_none() {
            return Err(MutationError::NotSkewSymmetrizable);
        }
        Ok(MutationMatrix { b })
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.b
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    /// Mutation in direction `k` (0-based).
    pub fn mutate(&self, k: usize) -> MutationMatrix {
        MutationMatrix {
            b: mutate_matrix(&self.b, k),
        }
    }

    pub fn negated(&self) -> MutationMatrix {
        MutationMatrix {
            b: self.b.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        }
    }
}

impl fmt::Debug for MutationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.b)
    }
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

/// `b'_ij = -b_ij` if `k` is `i` or `j`, else
/// `b_ij + [b_ik]_+ [b_kj]_+ - [-b_ik]_+ [-b_kj]_+`.
pub fn mutate_matrix(b: &IntMatrix, k: usize) -> IntMatrix {
    let r = b.len();
    assert!(k < r, "direction {k} out of range");
    let mut out = b.clone();
    for i in 0..r {
        for j in 0..r {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + pos(b[i][k]) * pos(b[k][j]) - pos(-b[i][k]) * pos(-b[k][j])
            };
        }
    }
    out
}

/// Positive `d` with `d_i b_ij = -d_j b_ji`.
fn skew_symmetrizer(b: &IntMatrix) -> Option<Vec<i64>> {
    let r = b.len();
    for i in 0..r {
        if b[i][i] != 0 {
            return None;
        }
        for j in 0..r {
            let (x, y) = (b[i][j], b[j][i]);
            if (x == 0) != (y == 0) || (x != 0 && x.signum() == y.signum()) {
                return None;
            }
        }
    }
    let mut d: Vec<Option<(i64, i64)>> = vec![None; r];
    for s in 0..r {
        if d[s].is_some() {
            continue;
        }
        d[s] = Some((1, 1));
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            let (ni, di) = d[i].unwrap();
            for j in 0..r {
                if b[i][j] == 0 {
                    continue;
                }
                // d_j = d_i * b_ij / (-b_ji)
                let (mut n, mut dd) = (ni * b[i][j], -di * b[j][i]);
                let g = n.gcd(&dd);
                n /= g;
                dd /= g;
                if dd < 0 {
                    n = -n;
                    dd = -dd;
                }
                match d[j] {
                    None => {
                        d[j] = Some((n, dd));
                        queue.push_back(j);
                    }
                    Some((nj, dj)) if nj * dd != n * dj => return None,
                    _ => {}
                }
            }
        }
    }
    let l = d.iter().fold(1i64, |acc, x| acc.lcm(&x.unwrap().1));
    Some(d.into_iter().map(|x| x.unwrap().0 * (l / x.unwrap().1)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Flavor {
    A,
    Y,
}

impl Flavor {
    pub fn prefix(self) -> &'static str {
        match self {
            Flavor::A => "x",
            Flavor::Y => "y",
        }
    }

    pub fn pattern_kind(self) -> PatternKind {
        match self {
            Flavor::A => PatternKind::Frieze,
            Flavor::Y => PatternKind::YFrieze,
        }
    }
}

/// Variables (as functions of the root variables) together with a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub vars: Vec<RationalFn>,
    pub matrix: MutationMatrix,
    pub flavor: Flavor,
}

impl Seed {
    /// Seed whose variables are the coordinate functions.
    pub fn initial(matrix: MutationMatrix, flavor: Flavor) -> Seed {
        let r = matrix.rank();
        Seed {
            vars: (0..r).map(|i| RationalFn::var(r, i)).collect(),
            matrix,
            flavor,
        }
    }

    pub fn rank(&self) -> usize {
        self.vars.len()
    }

    /// Mutation in direction `k` (0-based).
    pub fn mutate(&self, k: usize) -> Result<Seed, MutationError> {
        let r = self.rank();
        if k >= r {
            return Err(MutationError::BadDirection(k));
        }
        let b = &self.matrix;
        let n = self.vars[0].nvars();
        let mut vars = self.vars.clone();
        match self.flavor {
            Flavor::A => {
                let mut plus = RationalFn::one(n);
                let mut minus = RationalFn::one(n);
                for j in 0..r {
                    let e = b.get(j, k);
                    if e > 0 {
                        plus = &plus * &self.vars[j].pow(e as i32)?;
                    } else if e < 0 {
                        minus = &minus * &self.vars[j].pow((-e) as i32)?;
                    }
                }
                vars[k] = (&plus + &minus).checked_div(&self.vars[k])?;
            }
            Flavor::Y => {
                let yk = &self.vars[k];
                let one_plus = &RationalFn::one(n) + yk;
                for (j, v) in vars.iter_mut().enumerate() {
                    if j == k {
                        continue;
                    }
                    let e = b.get(k, j);
                    if e == 0 {
                        continue;
                    }
                    let mut t = &*v * &one_plus.pow(-e as i32)?;
                    if e > 0 {
                        t = &t * &yk.pow(e as i32)?;
                    }
                    *v = t;
                }
                vars[k] = yk.inv()?;
            }
        }
        Ok(Seed {
            vars,
            matrix: b.mutate(k),
            flavor: self.flavor,
        })
    }
}

/// Seeds along the belt: the chain of vertices `t(i,m)` joined by
/// `t(i,m) -i- t(i+1,m)` and `t(r,m) -r- t(1,m+1)`, rooted at `t(1,0)`.
#[derive(Debug, Clone)]
pub struct Belt {
    cartan: CartanMatrix,
    flavor: Flavor,
    lo: i64,
    hi: i64,
    /// seeds[p - lo*r] is the seed at chain position p = m*r + i
    seeds: Vec<Seed>,
}

/// Walks the belt over columns `lo..=hi` starting from the root seed
/// `(coordinates, B_A)`.
pub fn belt(a: &CartanMatrix, flavor: Flavor, lo: i64, hi: i64) -> Result<Belt, MutationError> {
    assert!(lo <= 0 && hi >= 0, "column range must contain 0");
    let r = a.rank() as i64;
    let b = MutationMatrix::new(a.exchange_matrix())?;
    let root = Seed::initial(b, flavor);
    let first = lo * r;
    let last = hi * r + r - 1;
    let mut fwd = vec![root.clone()];
    for p in 0..last {
        let k = p.rem_euclid(r) as usize;
        let next = fwd.last().unwrap().mutate(k)?;
        fwd.push(next);
    }
    let mut back = Vec::new();
    let mut cur = root;
    for p in (first..0).rev() {
        // from position p+1 to p along the edge labelled by p's row
        let k = p.rem_euclid(r) as usize;
        cur = cur.mutate(k)?;
        back.push(cur.clone());
    }
    back.reverse();
    back.extend(fwd);
    Ok(Belt {
        cartan: a.clone(),
        flavor,
        lo,
        hi,
        seeds: back,
    })
}

impl Belt {
    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn contains(&self, m: i64) -> bool {
        (self.lo..=self.hi).contains(&m)
    }

    /// Seed at vertex `t(i,m)`, 0-based `i`.
    pub fn seed(&self, i: usize, m: i64) -> &Seed {
        assert!(self.contains(m), "column {m} outside belt {}..{}", self.lo, self.hi);
        let r = self.rank() as i64;
        &self.seeds[(m * r + i as i64 - self.lo * r) as usize]
    }

    /// `x(i,m)` or `y(i,m)`: variable `i` of the seed at `t(i,m)`.
    pub fn var(&self, i: usize, m: i64) -> &RationalFn {
        &self.seed(i, m).vars[i]
    }

    /// Variable name such as `y(2,1)` (1-based row).
    pub fn name(&self, i: usize, m: i64) -> String {
        format!("{}({},{m})", self.flavor.prefix(), i + 1)
    }

    /// Right side of the exchange relation for `v(i,m) v(i,m+1)`.
    fn relation_rhs(&self, i: usize, m: i64) -> Result<RationalFn, MutationError> {
        let r = self.rank();
        let n = r;
        let one = RationalFn::one(n);
        let mut prod = RationalFn::one(n);
        for j in 0..r {
            let e = -self.cartan.get(j, i);
            if j == i || e == 0 {
                continue;
            }
            let v = if j > i { self.var(j, m) } else { self.var(j, m + 1) };
            let base = match self.flavor {
                Flavor::A => v.clone(),
                Flavor::Y => &one + v,
            };
            prod = &prod * &base.pow(e as i32)?;
        }
        Ok(match self.flavor {
            Flavor::A => &one + &prod,
            Flavor::Y => prod,
        })
    }

    /// Exchange relations between consecutive columns, checked symbolically.
    pub fn relations_hold(&self) -> Result<bool, MutationError> {
        for m in self.lo..self.hi {
            for i in 0..self.rank() {
                let lhs = self.var(i, m) * self.var(i, m + 1);
                if lhs != self.relation_rhs(i, m)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Every belt variable is a Laurent polynomial with nonnegative
    /// coefficients in the root variables; a failure is an invariant
    /// violation.
    pub fn check_laurent_positive(&self) -> Result<(), MutationError> {
        for m in self.lo..=self.hi {
            for i in 0..self.rank() {
                let v = self.var(i, m);
                match v.as_laurent() {
                    Some(p) if p.has_nonneg_coeffs() => {}
                    _ => {
                        return Err(MutationError::InvariantViolation(format!(
                            "{} = {} is not a positive Laurent polynomial",
                            self.name(i, m),
                            v.render(self.flavor.prefix())
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    /// `B_{t(i,m)} = B_{t(i,0)}` and `B_{t(i,m)} e_i = (-a_{j,i})_j` off the
    /// diagonal.
    pub fn matrices_hold(&self) -> bool {
        let r = self.rank();
        for i in 0..r {
            let base = self.contains(0).then(|| self.seed(i, 0).matrix.clone());
            for m in self.lo..=self.hi {
                let b = &self.seed(i, m).matrix;
                if base.as_ref().is_some_and(|b0| b0 != b) {
                    return false;
                }
                for j in 0..r {
                    let want = if j == i { 0 } else { -self.cartan.get(j, i) };
                    if b.get(j, i) != want {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Cluster at `t(i,m)` is `(x(1,m+1), .., x(i-1,m+1), x(i,m), .., x(r,m))`.
    pub fn layout_holds(&self) -> bool {
        let r = self.rank();
        for m in self.lo..self.hi {
            for i in 0..r {
                let s = self.seed(i, m);
                for j in 0..r {
                    let want = if j < i { self.var(j, m + 1) } else { self.var(j, m) };
                    if &s.vars[j] != want {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Evaluation of every variable at the all-ones point.
    pub fn unitary_values(&self) -> Result<Vec<Vec<BigRational>>, MutationError> {
        let ones = vec![BigRational::one(); self.rank()];
        (0..self.rank())
            .map(|i| {
                (self.lo..=self.hi)
                    .map(|m| self.var(i, m).eval(&ones).map_err(MutationError::from))
                    .collect()
            })
            .collect()
    }

    /// JSON list of `{name, value}` in grid order.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Entry {
            name: String,
            value: String,
        }
        #[derive(Serialize)]
        struct Table {
            cartan: String,
            flavor: Flavor,
            cols: [i64; 2],
            vars: Vec<Entry>,
        }
        let mut vars = Vec::new();
        for m in self.lo..=self.hi {
            for i in 0..self.rank() {
                vars.push(Entry {
                    name: self.name(i, m),
                    value: self.var(i, m).render(self.flavor.prefix()),
                });
            }
        }
        let t = Table {
            cartan: self.cartan.name(),
            flavor: self.flavor,
            cols: [self.lo, self.hi],
            vars,
        };
        serde_json::to_string_pretty(&t).expect("serializable")
    }
}

/// Exchange relations and (for both flavors) Laurent positivity over
/// columns `lo..=hi`.
///
/// Returns `Ok(false)` when a relation fails and an `InvariantViolation`
/// when a variable is not a positive Laurent polynomial.
pub fn check_relations(a: &CartanMatrix, flavor: Flavor, lo: i64, hi: i64) -> Result<bool, MutationError> {
    let b = belt(a, flavor, lo, hi)?;
    b.check_laurent_positive()?;
    Ok(b.relations_hold()? && b.matrices_hold() && (flavor == Flavor::Y || b.layout_holds()))
}

/// The monomial `ŷ(i,m) = x_{t(i,m)}^{B_{t(i,m)} e_i}` in belt variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnsembleMonomial {
    /// `((row, col), exponent)` with 0-based rows, sorted.
    pub factors: Vec<((usize, i64), u32)>,
    /// The monomial expanded in the root cluster.
    pub value: RationalFn,
}

impl EnsembleMonomial {
    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|&((j, n), e)| {
                if e == 1 {
                    format!("x({},{n})", j + 1)
                } else {
                    format!("x({},{n})^{e}", j + 1)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// `ŷ(i,m)` read off an A-flavor belt; needs columns `m` and `m+1`.
pub fn ensemble_pullback(xbelt: &Belt, i: usize, m: i64) -> Result<EnsembleMonomial, MutationError> {
    assert_eq!(xbelt.flavor, Flavor::A, "ensemble pullback needs the A-flavor belt");
    let a = &xbelt.cartan;
    let r = a.rank();
    let seed = xbelt.seed(i, m);
    let mut factors = Vec::new();
    let mut value = RationalFn::one(r);
    for j in 0..r {
        let e = seed.matrix.get(j, i);
        if e == 0 {
            continue;
        }
        if e < 0 {
            return Err(MutationError::InvariantViolation(format!(
                "B_t({},{m}) e_{} has a negative entry",
                i + 1,
                i + 1
            )));
        }
        // cluster layout at t(i,m)
        let at = if j < i { (j, m + 1) } else { (j, m) };
        factors.push((at, e as u32));
        value = &value * &seed.vars[j].pow(e as i32)?;
    }
    factors.sort();
    Ok(EnsembleMonomial { factors, value })
}

/// Images `p*(y_j) = prod_l x_l^{b_lj}` of the root Y-variables.
pub fn root_ensemble_images(a: &CartanMatrix) -> Vec<RationalFn> {
    let b = a.exchange_matrix();
    let r = a.rank();
    (0..r)
        .map(|j| {
            let e: Vec<i32> = (0..r).map(|l| b[l][j] as i32).collect();
            RationalFn::from_laurent(LaurentPoly::monomial(r, e, 1))
        })
        .collect()
}

/// Compares `ŷ(i,m)` with `p*(y(i,m))` for every `(i,m)` with both columns
/// `m, m+1` in range.
pub fn check_ensemble(xbelt: &Belt, ybelt: &Belt) -> Result<bool, MutationError> {
    let images = root_ensemble_images(&xbelt.cartan);
    let lo = xbelt.lo.max(ybelt.lo);
    let hi = xbelt.hi.min(ybelt.hi);
    for m in lo..hi {
        for i in 0..xbelt.rank() {
            let yhat = ensemble_pullback(xbelt, i, m)?;
            let pulled = ybelt.var(i, m).substitute(&images)?;
            if pulled != yhat.value {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Pattern obtained by evaluating every belt variable at the all-ones point
/// of the root cluster.
pub fn unitary_pattern(a: &CartanMatrix, flavor: Flavor, lo: i64, hi: i64) -> Result<PatternWindow, MutationError> {
    let b = belt(a, flavor, lo, hi)?;
    let vals = b.unitary_values()?;
    let s = SemiringId::PositiveIntegers;
    let rows = vals
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|q| {
                    if !q.is_integer() {
                        return Err(MutationError::InvariantViolation(format!(
                            "unitary value {q} is not an integer"
                        )));
                    }
                    s.from_int(q.to_integer())
                        .map_err(|e| MutationError::InvariantViolation(e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let w = PatternWindow::new(flavor.pattern_kind(), a.clone(), s, lo, rows, None)?;
    if !crate::frieze::verify(&w) {
        return Err(MutationError::InvariantViolation("unitary pattern does not verify".into()));
    }
    Ok(w)
}

/// Matrices reachable by iterated single mutations, breadth first, stopping
/// after `limit` distinct matrices. Returned sorted.
pub fn matrix_orbit(b: &MutationMatrix, limit: usize) -> Vec<MutationMatrix> {
    let mut seen: BTreeSet<MutationMatrix> = BTreeSet::from([b.clone()]);
    let mut queue = VecDeque::from([b.clone()]);
    while let Some(m) = queue.pop_front() {
        for k in 0..m.rank() {
            let n = m.mutate(k);
            if seen.len() >= limit {
                break;
            }
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    seen.into_iter().collect()
}

/// Integer value of a rational function at the all-ones point, if integral.
pub fn unitary_integer(f: &RationalFn) -> Option<BigInt> {
    let q = f.eval(&vec![BigRational::one(); f.nvars()]).ok()?;
    q.is_integer().then(|| q.to_integer())
}

/// Convenience for small integer outputs.
pub fn to_i64(v: &BigInt) -> Option<i64> {
    v.to_i64()
}
