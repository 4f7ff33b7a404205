//! Cartan matrices: validation, finite-type test, standard labellings,
//! exchange and Coxeter companion matrices, glide data.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CartanError {
    #[error("not a Cartan matrix: {0}")]
    NotCartan(String),
    #[error("Cartan matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("Cartan matrix is not of finite type")]
    NotFiniteType,
    #[error("no standard labelling matches this matrix")]
    UnrecognizedLabelling,
    #[error("cannot parse Cartan matrix: {0}")]
    Parse(String),
}

/// A validated symmetrizable generalized Cartan matrix.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct CartanMatrix {
    entries: IntMatrix,
    label: Option<String>,
    #[serde(skip)]
    symmetrizer: Vec<i64>,
    #[serde(skip)]
    indecomposable: bool,
}

/// Check the defining conditions and build a [`CartanMatrix`].
pub fn validate_cartan(entries: IntMatrix) -> Result<CartanMatrix, CartanError> {
    let r = entries.len();
    if r == 0 {
        return Err(CartanError::NotCartan("empty matrix".into()));
    }
    for (i, row) in entries.iter().enumerate() {
        if row.len() != r {
            return Err(CartanError::NotCartan(format!(
                "row {} has {} entries, expected {r}",
                i + 1,
                row.len()
            )));
        }
    }
    for i in 0..r {
        if entries[i][i] != 2 {
            return Err(CartanError::NotCartan(format!(
                "diagonal entry ({0},{0}) is {1}, expected 2",
                i + 1,
                entries[i][i]
            )));
        }
        for j in 0..r {
            if i == j {
                continue;
            }
            if entries[i][j] > 0 {
                return Err(CartanError::NotCartan(format!(
                    "positive off-diagonal entry at ({},{})",
                    i + 1,
                    j + 1
                )));
            }
            if (entries[i][j] == 0) != (entries[j][i] == 0) {
                return Err(CartanError::NotCartan(format!(
                    "zero pattern not symmetric at ({},{})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let symmetrizer = find_symmetrizer(&entries).ok_or(CartanError::NotSymmetrizable)?;
    let indecomposable = components(&entries).len() == 1;
    Ok(CartanMatrix {
        entries,
        label: None,
        symmetrizer,
        indecomposable,
    })
}

/// Positive integer diagonal `d` with `d_i a_ij = d_j a_ji`, normalized so
/// that each connected component has gcd 1.
fn find_symmetrizer(a: &IntMatrix) -> Option<Vec<i64>> {
    let r = a.len();
    // rationals as (num, den)
    let mut d: Vec<Option<(i64, i64)>> = vec![None; r];
    for comp in components(a) {
        let root = comp[0];
        d[root] = Some((1, 1));
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let (ni, di) = d[i].unwrap();
            for j in 0..r {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                // d_j = d_i * a_ij / a_ji
                let num = ni * a[i][j];
                let den = di * a[j][i];
                let g = num.gcd(&den);
                let (mut num, mut den) = (num / g, den / g);
                if den < 0 {
                    num = -num;
                    den = -den;
                }
                match d[j] {
                    None => {
                        d[j] = Some((num, den));
                        queue.push_back(j);
                    }
                    Some((nj, dj)) => {
                        if nj * den != num * dj {
                            return None;
                        }
                    }
                }
            }
        }
        let l = comp.iter().fold(1i64, |acc, &i| acc.lcm(&d[i].unwrap().1));
        let vals: Vec<i64> = comp.iter().map(|&i| {
            let (n, dd) = d[i].unwrap();
            n * (l / dd)
        }).collect();
        let g = vals.iter().fold(0i64, |acc, v| acc.gcd(v));
        for (&i, v) in comp.iter().zip(vals) {
            d[i] = Some((v / g, 1));
        }
    }
    Some(d.into_iter().map(|x| x.unwrap().0).collect())
}

fn components(a: &IntMatrix) -> Vec<Vec<usize>> {
    let r = a.len();
    let mut seen = vec![false; r];
    let mut out = Vec::new();
    for s in 0..r {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            k += 1;
            for j in 0..r {
                if i != j && a[i][j] != 0 && !seen[j] {
                    seen[j] = true;
                    comp.push(j);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn submatrix(a: &IntMatrix, idx: &[usize]) -> Vec<Vec<BigInt>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| BigInt::from(a[i][j])).collect())
        .collect()
}

/// Dynkin types with a built-in standard labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FiniteType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl FiniteType {
    pub fn rank(self) -> usize {
        match self {
            FiniteType::A(r)
            | FiniteType::B(r)
            | FiniteType::C(r)
            | FiniteType::D(r)
            | FiniteType::E(r) => r,
            FiniteType::F4 => 4,
            FiniteType::G2 => 2,
        }
    }

    pub fn is_valid(self) -> bool {
        match self {
            FiniteType::A(r) => r >= 1,
            FiniteType::B(r) | FiniteType::C(r) => r >= 2,
            FiniteType::D(r) => r >= 4,
            FiniteType::E(r) => (6..=8).contains(&r),
            FiniteType::F4 | FiniteType::G2 => true,
        }
    }

    pub fn coxeter_number(self) -> i64 {
        match self {
            FiniteType::A(r) => r as i64 + 1,
            FiniteType::B(r) | FiniteType::C(r) => 2 * r as i64,
            FiniteType::D(r) => 2 * r as i64 - 2,
            FiniteType::E(6) => 12,
            FiniteType::E(7) => 18,
            FiniteType::E(8) => 30,
            FiniteType::E(_) => unreachable!("invalid E type"),
            FiniteType::F4 => 12,
            FiniteType::G2 => 6,
        }
    }

    /// Whether the glide involution is a nontrivial diagram automorphism.
    fn has_twist(self) -> bool {
        match self {
            FiniteType::A(r) => r >= 2,
            FiniteType::D(r) => r % 2 == 1,
            FiniteType::E(6) => true,
            _ => false,
        }
    }

    /// Involution `i -> i*` on 0-based indices of the standard labelling.
    fn standard_involution(self) -> Vec<usize> {
        let r = self.rank();
        let mut p: Vec<usize> = (0..r).collect();
        if !self.has_twist() {
            return p;
        }
        match self {
            FiniteType::A(_) => p.reverse(),
            FiniteType::D(_) => p.swap(r - 2, r - 1),
            FiniteType::E(6) => {
                p.swap(0, 4);
                p.swap(1, 3);
            }
            _ => unreachable!(),
        }
        p
    }

    /// Matrix entries in the standard labelling.
    pub fn entries(self) -> IntMatrix {
        assert!(self.is_valid(), "invalid type {self}");
        let r = self.rank();
        let mut a = vec![vec![0i64; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut edge = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self {
            FiniteType::A(_) | FiniteType::B(_) | FiniteType::C(_) => {
                for i in 0..r - 1 {
                    edge(i, i + 1);
                }
            }
            FiniteType::D(_) => {
                for i in 0..r - 2 {
                    edge(i, i + 1);
                }
                edge(r - 3, r - 1);
            }
            FiniteType::E(_) => {
                for i in 0..r - 2 {
                    edge(i, i + 1);
                }
                // the extra vertex hangs off chain vertex r-3 (1-based)
                edge(r - 4, r - 1);
            }
            FiniteType::F4 => {
                for i in 0..3 {
                    edge(i, i + 1);
                }
            }
            FiniteType::G2 => edge(0, 1),
        }
        match self {
            FiniteType::B(_) => a[r - 1][r - 2] = -2,
            FiniteType::C(_) => a[r - 2][r - 1] = -2,
            FiniteType::F4 => a[1][2] = -2,
            FiniteType::G2 => a[1][0] = -3,
            _ => {}
        }
        a
    }

    pub fn cartan(self) -> CartanMatrix {
        let mut c = validate_cartan(self.entries()).expect("built-in types are valid");
        c.label = Some(self.to_string());
        c
    }

    /// All valid types of the given rank.
    pub fn of_rank(r: usize) -> Vec<FiniteType> {
        let mut v = vec![
            FiniteType::A(r),
            FiniteType::B(r),
            FiniteType::C(r),
            FiniteType::D(r),
            FiniteType::E(r),
        ];
        if r == 4 {
            v.push(FiniteType::F4);
        }
        if r == 2 {
            v.push(FiniteType::G2);
        }
        v.retain(|t| t.is_valid());
        v
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(r) => write!(f, "A{r}"),
            FiniteType::B(r) => write!(f, "B{r}"),
            FiniteType::C(r) => write!(f, "C{r}"),
            FiniteType::D(r) => write!(f, "D{r}"),
            FiniteType::E(r) => write!(f, "E{r}"),
            FiniteType::F4 => f.write_str("F4"),
            FiniteType::G2 => f.write_str("G2"),
        }
    }
}

impl FromStr for FiniteType {
    type Err = CartanError;
    fn from_str(s: &str) -> Result<Self, CartanError> {
        let s = s.trim();
        let bad = || CartanError::Parse(format!("unknown type '{s}'"));
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let r: usize = chars.as_str().parse().map_err(|_| bad())?;
        let t = match letter {
            'A' => FiniteType::A(r),
            'B' => FiniteType::B(r),
            'C' => FiniteType::C(r),
            'D' => FiniteType::D(r),
            'E' => FiniteType::E(r),
            'F' if r == 4 => FiniteType::F4,
            'G' if r == 2 => FiniteType::G2,
            _ => return Err(bad()),
        };
        if !t.is_valid() {
            return Err(bad());
        }
        Ok(t)
    }
}

/// Matrices `L_A`, `U_A` and `C = (-L_A U_A^{-1})^T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxeterCompanion {
    pub lower: IntMatrix,
    pub upper: IntMatrix,
    pub companion: IntMatrix,
}

/// Glide involution and shifts; `F(i, m) = (i*, m + m_{i*} + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlideData {
    /// `involution[i] = i*`, 0-based.
    pub involution: Vec<usize>,
    pub shifts: Vec<i64>,
    pub coxeter_number: i64,
    pub period: i64,
}

impl GlideData {
    /// Image of grid point `(i, m)` (0-based row) under the glide.
    pub fn apply(&self, i: usize, m: i64) -> (usize, i64) {
        let j = self.involution[i];
        (j, m + self.shifts[j] + 1)
    }
}

/// Identification of a matrix with a standard labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recognition {
    pub ty: FiniteType,
    /// `perm[s]` is the row of the matrix playing the role of standard
    /// vertex `s`.
    pub perm: Vec<usize>,
}

impl Recognition {
    pub fn is_standard(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

impl CartanMatrix {
    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Positive integer diagonal of a symmetrizer `D` (`D A` symmetric).
    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn is_indecomposable(&self) -> bool {
        self.indecomposable
    }

    /// Name used for display: the label if set, otherwise the matrix literal.
    pub fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.literal())
    }

    /// Matrix literal such as `2,-1;-1,2`.
    pub fn literal(&self) -> String {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Whether every principal minor is positive.
    pub fn is_finite_type(&self) -> bool {
        let r = self.rank();
        if r <= 12 {
            for mask in 1u32..(1u32 << r) {
                let idx: Vec<usize> = (0..r).filter(|&i| mask >> i & 1 == 1).collect();
                if !determinant(&submatrix(&self.entries, &idx)).is_positive() {
                    return false;
                }
            }
            true
        } else {
            // Leading minors of the symmetrized matrix (Sylvester).
            let da: Vec<Vec<BigInt>> = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| BigInt::from(self.symmetrizer[i] * self.entries[i][j]))
                        .collect()
                })
                .collect();
            (1..=r).all(|k| {
                let m: Vec<Vec<BigInt>> = da[..k].iter().map(|row| row[..k].to_vec()).collect();
                determinant(&m).is_positive()
            })
        }
    }

    /// Acyclic exchange matrix `B_A`.
    pub fn exchange_matrix(&self) -> IntMatrix {
        let r = self.rank();
        let mut b = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in 0..r {
                b[i][j] = match i.cmp(&j) {
                    std::cmp::Ordering::Less => self.entries[i][j],
                    std::cmp::Ordering::Greater => -self.entries[i][j],
                    std::cmp::Ordering::Equal => 0,
                };
            }
        }
        b
    }

    pub fn coxeter_companion(&self) -> CoxeterCompanion {
        let r = self.rank();
        let mut lower = identity(r);
        let mut upper = identity(r);
        for i in 0..r {
            for j in 0..r {
                if i > j {
                    lower[i][j] = self.entries[i][j];
                } else if i < j {
                    upper[i][j] = self.entries[i][j];
                }
            }
        }
        let uinv = unit_upper_inverse(&upper);
        let lu = matmul(&lower, &uinv);
        let mut companion = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in 0..r {
                companion[j][i] = -lu[i][j];
            }
        }
        CoxeterCompanion {
            lower,
            upper,
            companion,
        }
    }

    /// Order of the Coxeter companion matrix, searched up to `limit`.
    pub fn coxeter_order(&self, limit: usize) -> Option<usize> {
        let c = self.coxeter_companion().companion;
        let id = identity(self.rank());
        let mut p = c.clone();
        for k in 1..=limit {
            if p == id {
                return Some(k);
            }
            p = matmul(&p, &c);
        }
        None
    }

    /// Matches the matrix against the built-in standard labellings, first
    /// literally, then up to relabelling of the rows.
    pub fn recognize(&self) -> Option<Recognition> {
        if !self.indecomposable || !self.is_finite_type() {
            return None;
        }
        let r = self.rank();
        let types = FiniteType::of_rank(r);
        for &ty in &types {
            if ty.entries() == self.entries {
                return Some(Recognition {
                    ty,
                    perm: (0..r).collect(),
                });
            }
        }
        for &ty in &types {
            if let Some(perm) = find_isomorphism(&ty.entries(), &self.entries) {
                return Some(Recognition { ty, perm });
            }
        }
        None
    }

    pub fn finite_type(&self) -> Option<FiniteType> {
        self.recognize().map(|r| r.ty)
    }

    pub fn coxeter_number(&self) -> Result<i64, CartanError> {
        if !self.is_finite_type() || !self.indecomposable {
            return Err(CartanError::NotFiniteType);
        }
        self.finite_type()
            .map(FiniteType::coxeter_number)
            .ok_or(CartanError::UnrecognizedLabelling)
    }

    pub fn glide_data(&self) -> Result<GlideData, CartanError> {
        if !self.indecomposable || !self.is_finite_type() {
            return Err(CartanError::NotFiniteType);
        }
        let rec = self.recognize().ok_or(CartanError::UnrecognizedLabelling)?;
        let r = self.rank();
        let h = rec.ty.coxeter_number();
        let std_inv = rec.ty.standard_involution();
        let mut involution = vec![0; r];
        for s in 0..r {
            involution[rec.perm[s]] = rec.perm[std_inv[s]];
        }
        let shifts: Vec<i64> = if rec.ty.has_twist() {
            (0..r)
                .map(|i| {
                    let path = self.tree_path(i, involution[i]);
                    let (mut toward_star, mut toward_i) = (0i64, 0i64);
                    for w in path.windows(2) {
                        let (u, v) = (w[0], w[1]);
                        // twisted types are simply laced: every edge carries
                        // the arrow from the smaller to the larger index
                        if u < v {
                            toward_star += 1;
                        } else {
                            toward_i += 1;
                        }
                    }
                    let twice = h + toward_star - toward_i;
                    debug_assert!(twice % 2 == 0);
                    twice / 2
                })
                .collect()
        } else {
            vec![h / 2; r]
        };
        let period = h + 2;
        for i in 0..r {
            let j = involution[i];
            assert_eq!(involution[j], i, "glide involution not self-inverse");
            assert_eq!(shifts[i] + shifts[j] + 2, period, "glide shifts inconsistent");
        }
        Ok(GlideData {
            involution,
            shifts,
            coxeter_number: h,
            period,
        })
    }

    /// Vertices of the unique path between `a` and `b` in a tree-shaped
    /// Dynkin diagram.
    fn tree_path(&self, a: usize, b: usize) -> Vec<usize> {
        let r = self.rank();
        let mut parent = vec![usize::MAX; r];
        parent[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            for v in 0..r {
                if v != u && self.entries[u][v] != 0 && parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}

fn identity(r: usize) -> IntMatrix {
    (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub(crate) fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

fn unit_upper_inverse(u: &IntMatrix) -> IntMatrix {
    let r = u.len();
    let mut inv = identity(r);
    // solve U X = I column by column, bottom up
    for col in 0..r {
        for i in (0..r).rev() {
            let mut s = i64::from(i == col);
            for k in i + 1..r {
                s -= u[i][k] * inv[k][col];
            }
            inv[i][col] = s;
        }
    }
    inv
}

/// Permutation `perm` with `target[perm[i]][perm[j]] == pattern[i][j]`.
fn find_isomorphism(pattern: &IntMatrix, target: &IntMatrix) -> Option<Vec<usize>> {
    let r = pattern.len();
    if target.len() != r {
        return None;
    }
    // visit pattern vertices in BFS order so each has an assigned neighbour
    let mut order = Vec::with_capacity(r);
    let mut seen = vec![false; r];
    for s in 0..r {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push(s);
        let mut k = order.len() - 1;
        while k < order.len() {
            let u = order[k];
            k += 1;
            for v in 0..r {
                if v != u && pattern[u][v] != 0 && !seen[v] {
                    seen[v] = true;
                    order.push(v);
                }
            }
        }
    }
    let degree = |m: &IntMatrix, i: usize| (0..r).filter(|&j| j != i && m[i][j] != 0).count();
    let mut perm = vec![usize::MAX; r];
    let mut used = vec![false; r];

    fn go(
        k: usize,
        order: &[usize],
        pattern: &IntMatrix,
        target: &IntMatrix,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        degree: &dyn Fn(&IntMatrix, usize) -> usize,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let s = order[k];
        for t in 0..target.len() {
            if used[t] || degree(pattern, s) != degree(target, t) {
                continue;
            }
            let ok = order[..k].iter().all(|&p| {
                let q = perm[p];
                pattern[s][p] == target[t][q] && pattern[p][s] == target[q][t]
            });
            if !ok {
                continue;
            }
            perm[s] = t;
            used[t] = true;
            if go(k + 1, order, pattern, target, perm, used, degree) {
                return true;
            }
            used[t] = false;
            perm[s] = usize::MAX;
        }
        false
    }

    go(0, &order, pattern, target, &mut perm, &mut used, &degree).then_some(perm)
}

/// Parses a type name (`A3`, `G2`, `A1~`) or a matrix literal (`2,-1;-1,2`).
pub fn parse_cartan(s: &str) -> Result<CartanMatrix, CartanError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("A1~") {
        return Ok(validate_cartan(vec![vec![2, -2], vec![-2, 2]])?.with_label("A1~"));
    }
    let is_literal = s.contains(',') || s.contains(';') || s.parse::<i64>().is_ok();
    if !is_literal {
        return Ok(s.parse::<FiniteType>()?.cartan());
    }
    let rows: Result<IntMatrix, CartanError> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| CartanError::Parse(format!("bad entry '{}'", x.trim())))
                })
                .collect()
        })
        .collect();
    let c = validate_cartan(rows?)?;
    let label = c
        .recognize()
        .filter(Recognition::is_standard)
        .map(|rec| rec.ty.to_string());
    Ok(match label {
        Some(l) => c.with_label(l),
        None => c,
    })
}

impl FromStr for CartanMatrix {
    type Err = CartanError;
    fn from_str(s: &str) -> Result<Self, CartanError> {
        parse_cartan(s)
    }
}

impl fmt::Debug for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CartanMatrix({})", self.name())?;
        if self.label.is_some() {
            write!(f, "[{}]", self.literal())?;
        }
        Ok(())
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `sum_{k<n} M^k` over the integers.
pub fn power_sum(m: &IntMatrix, n: usize) -> IntMatrix {
    let r = m.len();
    let mut acc = vec![vec![0i64; r]; r];
    let mut p = identity(r);
    for _ in 0..n {
        for i in 0..r {
            for j in 0..r {
                acc[i][j] += p[i][j];
            }
        }
        p = matmul(&p, m);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_types_up_to(r: usize) -> Vec<FiniteType> {
        (1..=r).flat_map(FiniteType::of_rank).collect()
    }

    #[test]
    fn a2_valid() {
        let c = validate_cartan(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(c.finite_type(), Some(FiniteType::A(2)));
    }

    #[test]
    fn g2_orientation() {
        let c = validate_cartan(vec![vec![2, -1], vec![-3, 2]]).unwrap();
        assert_eq!(c.finite_type(), Some(FiniteType::G2));
        assert_eq!(c.symmetrizer(), &[3, 1]);
        assert!(c.recognize().unwrap().is_standard());
    }

    #[test]
    fn positive_off_diagonal_rejected() {
        let e = validate_cartan(vec![vec![2, 1], vec![-1, 2]]);
        assert!(matches!(e, Err(CartanError::NotCartan(_))));
    }

    #[test]
    fn zero_pattern_asymmetry_rejected() {
        let e = validate_cartan(vec![vec![2, 0], vec![-1, 2]]);
        assert!(matches!(e, Err(CartanError::NotCartan(_))));
    }

    #[test]
    fn non_symmetrizable_cycle() {
        // triangle with product a12 a23 a31 != a21 a32 a13
        let e = validate_cartan(vec![vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]]);
        assert_eq!(e.unwrap_err(), CartanError::NotSymmetrizable);
    }

    #[test]
    fn finite_type_examples() {
        assert!(FiniteType::A(2).cartan().is_finite_type());
        assert!(FiniteType::G2.cartan().is_finite_type());
        assert!(!parse_cartan("A1~").unwrap().is_finite_type());
        for b in 1..6 {
            for c in 1..6 {
                let m = validate_cartan(vec![vec![2, -b], vec![-c, 2]]).unwrap();
                assert_eq!(m.is_finite_type(), b * c < 4, "b={b} c={c}");
            }
        }
    }

    #[test]
    fn g2_minors() {
        let a = FiniteType::G2.entries();
        let full = determinant(&submatrix(&a, &[0, 1]));
        assert_eq!(full, BigInt::from(1));
    }

    #[test]
    fn builtin_types_finite_and_indecomposable() {
        for t in all_types_up_to(8) {
            let c = t.cartan();
            assert!(c.is_finite_type(), "{t}");
            assert!(c.is_indecomposable(), "{t}");
            assert_eq!(c.finite_type(), Some(t), "{t}");
        }
    }

    #[test]
    fn exchange_matrices() {
        let a2 = FiniteType::A(2).cartan().exchange_matrix();
        assert_eq!(a2, vec![vec![0, -1], vec![1, 0]]);
        let a3 = FiniteType::A(3).cartan().exchange_matrix();
        assert_eq!(a3, vec![vec![0, -1, 0], vec![1, 0, -1], vec![0, 1, 0]]);
        assert_eq!(FiniteType::A(1).cartan().exchange_matrix(), vec![vec![0]]);
    }

    #[test]
    fn exchange_matrix_skew_symmetrized_by_d() {
        for t in all_types_up_to(8) {
            let c = t.cartan();
            let b = c.exchange_matrix();
            let d = c.symmetrizer();
            for i in 0..c.rank() {
                for j in 0..c.rank() {
                    assert_eq!(d[i] * b[i][j], -d[j] * b[j][i], "{t}");
                }
            }
        }
    }

    #[test]
    fn companion_a2() {
        let cc = FiniteType::A(2).cartan().coxeter_companion();
        assert_eq!(cc.lower, vec![vec![1, 0], vec![-1, 1]]);
        assert_eq!(cc.upper, vec![vec![1, -1], vec![0, 1]]);
        assert_eq!(cc.companion, vec![vec![-1, 1], vec![-1, 0]]);
        assert_eq!(FiniteType::A(1).cartan().coxeter_companion().companion, vec![vec![-1]]);
    }

    #[test]
    fn coxeter_identity_all_types() {
        for t in all_types_up_to(8) {
            let c = t.cartan();
            let h = t.coxeter_number() as usize;
            let s = power_sum(&c.coxeter_companion().companion, h);
            assert!(s.iter().flatten().all(|&x| x == 0), "{t}");
            assert_eq!(c.coxeter_order(100), Some(h), "{t}");
        }
    }

    #[test]
    fn glide_examples() {
        let g = FiniteType::A(3).cartan().glide_data().unwrap();
        assert_eq!(g.involution, vec![2, 1, 0]);
        assert_eq!(g.shifts, vec![3, 2, 1]);
        assert_eq!(g.period, 6);
        let g = FiniteType::G2.cartan().glide_data().unwrap();
        assert_eq!(g.involution, vec![0, 1]);
        assert_eq!(g.shifts, vec![3, 3]);
        assert_eq!(g.period, 8);
        let g = FiniteType::A(1).cartan().glide_data().unwrap();
        assert_eq!((g.shifts[0], g.period), (1, 4));
    }

    #[test]
    fn glide_e6() {
        let g = FiniteType::E(6).cartan().glide_data().unwrap();
        assert_eq!(g.involution, vec![4, 3, 2, 1, 0, 5]);
        assert_eq!(g.shifts, vec![8, 7, 6, 5, 4, 6]);
    }

    #[test]
    fn glide_a_n_shifts() {
        for n in 1..=8 {
            let g = FiniteType::A(n).cartan().glide_data().unwrap();
            let want: Vec<i64> = (1..=n as i64).map(|i| n as i64 + 1 - i).collect();
            assert_eq!(g.shifts, want);
        }
    }

    #[test]
    fn glide_shift_sum_all_types() {
        for t in all_types_up_to(8) {
            let g = t.cartan().glide_data().unwrap();
            for i in 0..t.rank() {
                assert_eq!(g.shifts[i] + g.shifts[g.involution[i]] + 2, g.period, "{t}");
            }
        }
    }

    #[test]
    fn glide_errors() {
        let aff = parse_cartan("A1~").unwrap();
        assert_eq!(aff.glide_data().unwrap_err(), CartanError::NotFiniteType);
    }

    #[test]
    fn relabelled_matrix_recognized() {
        // A3 with middle vertex listed first
        let c = parse_cartan("2,-1,-1;-1,2,0;-1,0,2").unwrap();
        let rec = c.recognize().unwrap();
        assert_eq!(rec.ty, FiniteType::A(3));
        assert!(!rec.is_standard());
        let g = c.glide_data().unwrap();
        assert_eq!(g.involution, vec![0, 2, 1]);
        assert_eq!(g.shifts[0], 2);
    }

    #[test]
    fn parse_formats() {
        assert_eq!(parse_cartan("A3").unwrap().entries(), &FiniteType::A(3).entries());
        assert_eq!(parse_cartan("2,-1;-3,2").unwrap().label(), Some("G2"));
        assert_eq!(parse_cartan("2").unwrap().label(), Some("A1"));
        assert!(parse_cartan("Q3").is_err());
        assert!(parse_cartan("D3").is_err());
        assert!(parse_cartan("2,-1;-1").is_err());
    }

    #[test]
    fn standard_shapes() {
        assert_eq!(FiniteType::C(2).entries(), vec![vec![2, -2], vec![-1, 2]]);
        assert_eq!(FiniteType::B(2).entries(), vec![vec![2, -1], vec![-2, 2]]);
        let e6 = FiniteType::E(6).entries();
        assert_eq!(e6[2][5], -1);
        let e8 = FiniteType::E(8).entries();
        assert_eq!(e8[4][7], -1);
        let d4 = FiniteType::D(4).entries();
        assert_eq!((d4[1][2], d4[1][3]), (-1, -1));
    }
}
