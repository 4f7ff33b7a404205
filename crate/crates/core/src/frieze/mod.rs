//! Frieze and Y-frieze patterns: knitting, verification, the ensemble map
//! and glide symmetry.

mod render;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cartan::{CartanError, CartanMatrix};
use crate::semiring::{sr_add, sr_mul, sr_try_div, SemiringError, SemiringId, SemiringValue};

pub use render::{render_csv, render_grid, render_json, window_from_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    Frieze,
    #[serde(rename = "y")]
    YFrieze,
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternKind::Frieze => "frieze",
            PatternKind::YFrieze => "y",
        })
    }
}

impl FromStr for PatternKind {
    type Err = FriezeError;
    fn from_str(s: &str) -> Result<Self, FriezeError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "frieze" | "a" => Ok(PatternKind::Frieze),
            "y" | "yfrieze" | "y-frieze" => Ok(PatternKind::YFrieze),
            other => Err(FriezeError::Parse(format!("unknown pattern kind '{other}'"))),
        }
    }
}

/// Grid point `(row, col)` with a 0-based row.
///
/// Ordered by column first, then row, which is the order knitting visits
/// cells. Displayed 1-based as `(i,m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GridPoint {
    pub row: usize,
    pub col: i64,
}

impl GridPoint {
    pub fn new(row: usize, col: i64) -> Self {
        GridPoint { row, col }
    }
}

impl Ord for GridPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.col.cmp(&other.col).then(self.row.cmp(&other.row))
    }
}

impl PartialOrd for GridPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row + 1, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FriezeError {
    #[error("knitting failed at {at} ({direction:?}): no solution in the semiring")]
    KnitFailure { at: GridPoint, direction: Direction },
    #[error("window too narrow for this operation")]
    WindowTooNarrow,
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error("malformed window: {0}")]
    Shape(String),
    #[error("{0}")]
    Parse(String),
}

/// Values of a pattern on rows `0..r` and columns `lo..=hi`.
#[derive(Clone, PartialEq, Eq)]
pub struct PatternWindow {
    kind: PatternKind,
    cartan: CartanMatrix,
    semiring: SemiringId,
    lo: i64,
    hi: i64,
    /// `rows[i][m - lo]`
    rows: Vec<Vec<SemiringValue>>,
    period: Option<i64>,
}

impl PatternWindow {
    pub fn new(
        kind: PatternKind,
        cartan: CartanMatrix,
        semiring: SemiringId,
        lo: i64,
        rows: Vec<Vec<SemiringValue>>,
        period: Option<i64>,
    ) -> Result<Self, FriezeError> {
        if rows.len() != cartan.rank() {
            return Err(FriezeError::Shape(format!(
                "{} rows for a rank {} matrix",
                rows.len(),
                cartan.rank()
            )));
        }
        let width = rows[0].len();
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(FriezeError::Shape("rows must be nonempty and of equal length".into()));
        }
        if let Some(v) = rows.iter().flatten().find(|v| v.id() != semiring) {
            return Err(SemiringError::MixedSemirings(semiring, v.id()).into());
        }
        if period.is_some_and(|p| p <= 0) {
            return Err(FriezeError::Shape("period must be positive".into()));
        }
        Ok(PatternWindow {
            kind,
            cartan,
            semiring,
            lo,
            hi: lo + width as i64 - 1,
            rows,
            period,
        })
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn semiring(&self) -> SemiringId {
        self.semiring
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn period(&self) -> Option<i64> {
        self.period
    }

    pub fn with_period(mut self, p: Option<i64>) -> Self {
        self.period = p;
        self
    }

    pub fn contains(&self, col: i64) -> bool {
        (self.lo..=self.hi).contains(&col)
    }

    /// Value at 0-based row `i`, column `m`.
    pub fn get(&self, i: usize, m: i64) -> &SemiringValue {
        assert!(self.contains(m), "column {m} outside window {}..{}", self.lo, self.hi);
        &self.rows[i][(m - self.lo) as usize]
    }

    pub fn rows(&self) -> &[Vec<SemiringValue>] {
        &self.rows
    }

    pub fn column(&self, m: i64) -> Vec<SemiringValue> {
        (0..self.rank()).map(|i| self.get(i, m).clone()).collect()
    }

    /// Replaces one value; used to build deliberately broken windows.
    pub fn set(&mut self, i: usize, m: i64, v: SemiringValue) -> Result<(), FriezeError> {
        if v.id() != self.semiring {
            return Err(SemiringError::MixedSemirings(self.semiring, v.id()).into());
        }
        let lo = self.lo;
        self.rows[i][(m - lo) as usize] = v;
        Ok(())
    }

    /// Restriction to columns `lo..=hi`.
    pub fn slice(&self, lo: i64, hi: i64) -> Result<PatternWindow, FriezeError> {
        if lo > hi || !self.contains(lo) || !self.contains(hi) {
            return Err(FriezeError::WindowTooNarrow);
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r[(lo - self.lo) as usize..=(hi - self.lo) as usize].to_vec())
            .collect();
        PatternWindow::new(self.kind, self.cartan.clone(), self.semiring, lo, rows, self.period)
    }

    /// First cell (in the grid order) where a fully contained relation, or
    /// the declared period, fails.
    pub fn first_violation(&self) -> Option<GridPoint> {
        let r = self.rank();
        for m in self.lo..self.hi {
            for i in 0..r {
                let lhs = sr_mul(self.get(i, m), self.get(i, m + 1));
                let rhs = relation_rhs(self.kind, &self.cartan, self.semiring, i, |j| {
                    self.get(j, m)
                }, |j| self.get(j, m + 1));
                match (lhs, rhs) {
                    (Ok(a), Ok(b)) if a == b => {}
                    _ => return Some(GridPoint::new(i, m)),
                }
            }
        }
        if let Some(p) = self.period {
            for m in self.lo..=self.hi - p {
                for i in 0..r {
                    if self.get(i, m) != self.get(i, m + p) {
                        return Some(GridPoint::new(i, m + p));
                    }
                }
            }
        }
        None
    }

    /// True when `values(i, m + p) = values(i, m)` wherever both are present.
    pub fn has_period(&self, p: i64) -> bool {
        (self.lo..=self.hi - p)
            .all(|m| (0..self.rank()).all(|i| self.get(i, m) == self.get(i, m + p)))
    }
}

impl fmt::Debug for PatternWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PatternWindow")
            .field("kind", &self.kind)
            .field("cartan", &self.cartan)
            .field("semiring", &self.semiring)
            .field("cols", &(self.lo, self.hi))
            .field("rows", &self.rows)
            .field("period", &self.period)
            .finish()
    }
}

/// Right-hand side of the relation for `v(i,m) v(i,m+1)`, with `col_m(j)`
/// and `col_next(j)` giving the values at columns `m` and `m+1`. Only rows
/// `j > i` of `col_m` and rows `j < i` of `col_next` are read.
fn relation_rhs<'a>(
    kind: PatternKind,
    a: &CartanMatrix,
    s: SemiringId,
    i: usize,
    col_m: impl Fn(usize) -> &'a SemiringValue,
    col_next: impl Fn(usize) -> &'a SemiringValue,
) -> Result<SemiringValue, SemiringError> {
    let one = s.one();
    let mut prod = s.one();
    for j in 0..a.rank() {
        if j == i {
            continue;
        }
        let e = -a.get(j, i);
        if e == 0 {
            continue;
        }
        let v = if j > i { col_m(j) } else { col_next(j) };
        let base = match kind {
            PatternKind::Frieze => v.clone(),
            PatternKind::YFrieze => sr_add(&one, v)?,
        };
        prod = sr_mul(&prod, &base.pow(e as i32)?)?;
    }
    match kind {
        PatternKind::Frieze => sr_add(&one, &prod),
        PatternKind::YFrieze => Ok(prod),
    }
}

/// Knitting: extends the column-0 values to columns `lo..=hi`.
///
/// Forward steps solve for `v(i,m+1)` in increasing row order, backward steps
/// for `v(i,m)` in decreasing row order, each by one exact division.
pub fn knit(
    a: &CartanMatrix,
    s: SemiringId,
    kind: PatternKind,
    initial: &[SemiringValue],
    lo: i64,
    hi: i64,
) -> Result<PatternWindow, FriezeError> {
    let r = a.rank();
    if initial.len() != r {
        return Err(FriezeError::Shape(format!(
            "{} initial values for rank {r}",
            initial.len()
        )));
    }
    if lo > 0 || hi < 0 {
        return Err(FriezeError::Shape(format!("column range {lo}..{hi} must contain 0")));
    }
    if let Some(v) = initial.iter().find(|v| v.id() != s) {
        return Err(SemiringError::MixedSemirings(s, v.id()).into());
    }
    let width = (hi - lo + 1) as usize;
    let z = (-lo) as usize;
    let mut cols: Vec<Option<Vec<SemiringValue>>> = vec![None; width];
    cols[z] = Some(initial.to_vec());

    let fail = |i: usize, m: i64, direction| FriezeError::KnitFailure {
        at: GridPoint::new(i, m),
        direction,
    };

    for c in z..width - 1 {
        let m = lo + c as i64;
        let prev = cols[c].clone().unwrap();
        let mut next: Vec<SemiringValue> = Vec::with_capacity(r);
        for i in 0..r {
            let rhs = relation_rhs(kind, a, s, i, |j| &prev[j], |j| &next[j])?;
            let v = sr_try_div(&rhs, &prev[i]).map_err(|e| match e {
                SemiringError::DivisionFailure(_) => fail(i, m + 1, Direction::Forward),
                other => other.into(),
            })?;
            next.push(v);
        }
        cols[c + 1] = Some(next);
    }
    for c in (0..z).rev() {
        let m = lo + c as i64;
        let next = cols[c + 1].clone().unwrap();
        let mut cur: Vec<Option<SemiringValue>> = vec![None; r];
        for i in (0..r).rev() {
            let rhs = relation_rhs(
                kind,
                a,
                s,
                i,
                |j| cur[j].as_ref().expect("rows below are filled first"),
                |j| &next[j],
            )?;
            let v = sr_try_div(&rhs, &next[i]).map_err(|e| match e {
                SemiringError::DivisionFailure(_) => fail(i, m, Direction::Backward),
                other => other.into(),
            })?;
            cur[i] = Some(v);
        }
        cols[c] = Some(cur.into_iter().map(Option::unwrap).collect());
    }
    let rows = (0..r)
        .map(|i| cols.iter().map(|c| c.as_ref().unwrap()[i].clone()).collect())
        .collect();
    PatternWindow::new(kind, a.clone(), s, lo, rows, None)
}

/// Independent re-check of every relation contained in the window.
pub fn verify(w: &PatternWindow) -> bool {
    w.first_violation().is_none()
}

/// Image of a frieze under `p(f)(i,m) = prod_{j>i} f(j,m)^{-a_ji} prod_{j<i} f(j,m+1)^{-a_ji}`.
///
/// The output covers columns `lo..=hi-1` of the input.
pub fn ensemble_image(f: &PatternWindow) -> Result<PatternWindow, FriezeError> {
    if f.kind != PatternKind::Frieze {
        return Err(FriezeError::Shape("ensemble image takes a frieze pattern".into()));
    }
    if f.hi == f.lo {
        return Err(FriezeError::WindowTooNarrow);
    }
    let a = &f.cartan;
    let s = f.semiring;
    let r = a.rank();
    let mut rows = vec![Vec::new(); r];
    for m in f.lo..f.hi {
        for (i, row) in rows.iter_mut().enumerate() {
            let mut prod = s.one();
            for j in 0..r {
                let e = -a.get(j, i);
                if j == i || e == 0 {
                    continue;
                }
                let v = if j > i { f.get(j, m) } else { f.get(j, m + 1) };
                prod = sr_mul(&prod, &v.pow(e as i32)?)?;
            }
            row.push(prod);
        }
    }
    PatternWindow::new(PatternKind::YFrieze, a.clone(), s, f.lo, rows, f.period)
}

/// Checks `values(i,m) = values(F(i,m))` for every cell whose glide image
/// lies in the window.
pub fn check_glide(w: &PatternWindow) -> Result<bool, FriezeError> {
    let g = w.cartan.glide_data()?;
    let r = w.rank();
    let mut covered = vec![false; r];
    for m in w.lo..=w.hi {
        for i in 0..r {
            let (j, n) = g.apply(i, m);
            if !w.contains(n) {
                continue;
            }
            covered[i] = true;
            covered[j] = true;
            if w.get(i, m) != w.get(j, n) {
                return Ok(false);
            }
        }
    }
    if covered.iter().any(|c| !c) {
        return Err(FriezeError::WindowTooNarrow);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{parse_cartan, FiniteType};

    fn zpos(v: &[i64]) -> Vec<SemiringValue> {
        v.iter()
            .map(|&x| SemiringId::PositiveIntegers.from_int(x).unwrap())
            .collect()
    }

    fn ints(w: &PatternWindow) -> Vec<Vec<i64>> {
        w.rows()
            .iter()
            .map(|r| r.iter().map(|v| v.as_integer().unwrap().try_into().unwrap()).collect())
            .collect()
    }

    #[test]
    fn grid_order() {
        assert!(GridPoint::new(2, 0) < GridPoint::new(0, 1));
        assert!(GridPoint::new(0, 1) < GridPoint::new(1, 1));
        assert_eq!(GridPoint::new(0, 1).to_string(), "(1,1)");
    }

    #[test]
    fn a2_y_knit() {
        let a = FiniteType::A(2).cartan();
        let w = knit(&a, SemiringId::PositiveIntegers, PatternKind::YFrieze, &zpos(&[2, 1]), 0, 4).unwrap();
        assert_eq!(ints(&w), vec![vec![2, 1, 3, 1, 2], vec![1, 2, 2, 1, 3]]);
        assert!(verify(&w));
    }

    #[test]
    fn affine_a1_growth() {
        let a = parse_cartan("A1~").unwrap();
        let w = knit(&a, SemiringId::PositiveIntegers, PatternKind::YFrieze, &zpos(&[4, 1]), 0, 3).unwrap();
        assert_eq!(ints(&w), vec![vec![4, 1, 25, 1156], vec![1, 4, 169, 7921]]);
    }

    #[test]
    fn knit_failure_point() {
        let a = FiniteType::A(2).cartan();
        let e = knit(&a, SemiringId::PositiveIntegers, PatternKind::YFrieze, &zpos(&[2, 2]), 0, 4).unwrap_err();
        assert_eq!(
            e,
            FriezeError::KnitFailure {
                at: GridPoint::new(0, 1),
                direction: Direction::Forward
            }
        );
    }

    #[test]
    fn a1_y_constant() {
        let a = FiniteType::A(1).cartan();
        let w = knit(&a, SemiringId::PositiveIntegers, PatternKind::YFrieze, &zpos(&[1]), -3, 3).unwrap();
        assert!(ints(&w)[0].iter().all(|&x| x == 1));
    }

    #[test]
    fn backward_matches_forward() {
        let a = FiniteType::A(2).cartan();
        let s = SemiringId::PositiveIntegers;
        let w = knit(&a, s, PatternKind::YFrieze, &zpos(&[2, 1]), -5, 5).unwrap();
        assert!(verify(&w));
        let w2 = knit(&a, s, PatternKind::YFrieze, &w.column(-5), 0, 10).unwrap();
        for m in -5..=5 {
            assert_eq!(w.column(m), w2.column(m + 5));
        }
    }

    #[test]
    fn verify_detects_change() {
        let a = FiniteType::A(2).cartan();
        let mut w = knit(&a, SemiringId::PositiveIntegers, PatternKind::YFrieze, &zpos(&[2, 1]), 0, 4).unwrap();
        w.set(1, 2, SemiringId::PositiveIntegers.from_int(3).unwrap()).unwrap();
        assert!(!verify(&w));
    }

    #[test]
    fn a3_unitary_rows_verify() {
        let a = FiniteType::A(3).cartan();
        let rows = [[1, 3, 3, 1], [2, 8, 2, 2], [3, 3, 1, 3]]
            .iter()
            .map(|r| zpos(r))
            .collect();
        let w = PatternWindow::new(PatternKind::YFrieze, a, SemiringId::PositiveIntegers, 0, rows, None).unwrap();
        assert!(verify(&w));
        assert!(check_glide(&w).unwrap());
    }

    #[test]
    fn ensemble_image_a2() {
        let a = FiniteType::A(2).cartan();
        let f = knit(&a, SemiringId::PositiveIntegers, PatternKind::Frieze, &zpos(&[1, 1]), 0, 4).unwrap();
        assert_eq!(ints(&f), vec![vec![1, 2, 2, 1, 3], vec![1, 3, 1, 2, 2]]);
        let y = ensemble_image(&f).unwrap();
        assert!(verify(&y));
        assert_eq!(ints(&y).iter().map(|r| r[0]).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn ensemble_image_a1_trivial() {
        let a = FiniteType::A(1).cartan();
        let f = knit(&a, SemiringId::PositiveIntegers, PatternKind::Frieze, &zpos(&[1]), 0, 4).unwrap();
        assert_eq!(ints(&f)[0], vec![1, 2, 1, 2, 1]);
        let y = ensemble_image(&f).unwrap();
        assert!(y.rows()[0].iter().all(SemiringValue::is_one));
    }

    #[test]
    fn glide_on_a2_fixture() {
        let a = FiniteType::A(2).cartan();
        let w = knit(&a, SemiringId::PositiveIntegers, PatternKind::YFrieze, &zpos(&[2, 1]), 0, 4).unwrap();
        assert!(check_glide(&w).unwrap());
    }

    #[test]
    fn glide_too_narrow() {
        let a = FiniteType::A(2).cartan();
        let w = knit(&a, SemiringId::PositiveIntegers, PatternKind::YFrieze, &zpos(&[2, 1]), 0, 1).unwrap();
        assert_eq!(check_glide(&w).unwrap_err(), FriezeError::WindowTooNarrow);
    }

    #[test]
    fn declared_period_checked() {
        let a = FiniteType::A(2).cartan();
        let w = knit(&a, SemiringId::PositiveIntegers, PatternKind::YFrieze, &zpos(&[2, 1]), 0, 10).unwrap();
        assert!(verify(&w.clone().with_period(Some(5))));
        assert!(!verify(&w.with_period(Some(4))));
    }

    #[test]
    fn universal_generic_pattern() {
        let a = FiniteType::A(2).cartan();
        let u = SemiringId::Universal(2);
        let init = vec![u.variable(0).unwrap(), u.variable(1).unwrap()];
        let w = knit(&a, u, PatternKind::YFrieze, &init, -2, 6).unwrap();
        assert!(verify(&w));
        assert!(w.has_period(5));
        assert_eq!(w.get(0, 1).render(), "(1 + y2)/y1");
    }
}
