use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gcd::{int_gcd, poly_gcd};
use super::{LaurentPoly, SymbolicError};

/// Rational function `num / den` in a fixed number of variables.
///
/// Both parts are stored as polynomials. Construction through [`RationalFn::new`]
/// moves all monomial factors to one side, divides out the polynomial gcd and
/// makes the lex-leading coefficient of the denominator positive, so equal
/// functions normally have identical parts. Equality nevertheless compares by
/// cross-multiplication, which also covers the partially reduced values built
/// by [`RationalFn::new_subtraction_free`].
#[derive(Clone)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

struct Parts {
    mono: Vec<i32>,
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Clears monomials and integer content, leaving `num / den = x^mono * N / D`.
fn cleared(num: &LaurentPoly, den: &LaurentPoly) -> Parts {
    let (en, mut n) = num.split_monomial();
    let (ed, mut d) = den.split_monomial();
    let mono = en.iter().zip(&ed).map(|(a, b)| a - b).collect();
    let g = int_gcd(&n.content(), &d.content());
    if !g.is_one() {
        n = n.div_scalar_exact(&g);
        d = d.div_scalar_exact(&g);
    }
    Parts { mono, num: n, den: d }
}

fn assemble(p: Parts) -> RationalFn {
    let Parts { mono, mut num, mut den } = p;
    if den.leading_term().is_some_and(|(_, c)| c.is_negative()) {
        num = -num;
        den = -den;
    }
    let pos: Vec<i32> = mono.iter().map(|&k| k.max(0)).collect();
    let neg: Vec<i32> = mono.iter().map(|&k| (-k).max(0)).collect();
    RationalFn {
        num: num.shift(&pos),
        den: den.shift(&neg),
    }
}

impl RationalFn {
    /// Canonical `num / den`.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, SymbolicError> {
        assert_eq!(num.nvars(), den.nvars(), "nvars mismatch");
        if den.is_zero() {
            return Err(SymbolicError::DivideByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.nvars()));
        }
        let mut p = cleared(&num, &den);
        if !p.den.is_constant() && !p.num.is_constant() {
            let g = poly_gcd(&p.num, &p.den);
            if !g.is_one() {
                p.num = p.num.div_exact_poly(&g).expect("gcd divides");
                p.den = p.den.div_exact_poly(&g).expect("gcd divides");
            }
        }
        Ok(assemble(p))
    }

    /// Like [`RationalFn::new`], but the common factor is only cancelled when
    /// both reduced parts keep nonnegative coefficients. Monomials and integer
    /// content are always cleared.
    pub fn new_subtraction_free(num: LaurentPoly, den: LaurentPoly) -> Result<Self, SymbolicError> {
        assert_eq!(num.nvars(), den.nvars(), "nvars mismatch");
        if den.is_zero() {
            return Err(SymbolicError::DivideByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.nvars()));
        }
        let mut p = cleared(&num, &den);
        if !p.den.is_constant() && !p.num.is_constant() {
            let g = poly_gcd(&p.num, &p.den);
            if !g.is_one() {
                let n2 = p.num.div_exact_poly(&g).expect("gcd divides");
                let d2 = p.den.div_exact_poly(&g).expect("gcd divides");
                let sign_ok = |q: &LaurentPoly| {
                    q.has_nonneg_coeffs() || (-q).has_nonneg_coeffs()
                };
                if sign_ok(&n2) && sign_ok(&d2) {
                    p.num = n2;
                    p.den = d2;
                }
            }
        }
        Ok(assemble(p))
    }

    pub fn zero(nvars: usize) -> Self {
        RationalFn {
            num: LaurentPoly::zero(nvars),
            den: LaurentPoly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        RationalFn {
            num: LaurentPoly::constant(nvars, c),
            den: LaurentPoly::one(nvars),
        }
    }

    pub fn from_rational(nvars: usize, q: &BigRational) -> Self {
        RationalFn {
            num: LaurentPoly::constant(nvars, q.numer().clone()),
            den: LaurentPoly::constant(nvars, q.denom().clone()),
        }
    }

    /// Variable with 0-based index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_laurent(LaurentPoly::var(nvars, i))
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        let n = p.nvars();
        Self::new(p, LaurentPoly::one(n)).expect("nonzero denominator")
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The value as a rational number when the function is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(BigRational::new(n, d))
    }

    pub fn inv(&self) -> Result<Self, SymbolicError> {
        if self.num.is_zero() {
            return Err(SymbolicError::DivideByZero);
        }
        let mut out = RationalFn {
            num: self.den.clone(),
            den: self.num.clone(),
        };
        if out.den.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            out.num = -out.num;
            out.den = -out.den;
        }
        Ok(out)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, SymbolicError> {
        if rhs.is_zero() {
            return Err(SymbolicError::DivideByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, k: i32) -> Result<Self, SymbolicError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RationalFn {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// The Laurent polynomial equal to this function, if there is one.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        self.num.div_exact(&self.den)
    }

    pub fn is_laurent(&self) -> bool {
        self.as_laurent().is_some()
    }

    /// True when numerator and denominator can be chosen with nonnegative
    /// coefficients in the stored form.
    pub fn has_nonneg_coeffs(&self) -> bool {
        self.num.has_nonneg_coeffs() && self.den.has_nonneg_coeffs()
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, SymbolicError> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(SymbolicError::PoleAtPoint);
        }
        Ok(self.num.eval(point)? / d)
    }

    /// Substitutes the `i`-th variable by `vals[i]`.
    pub fn substitute(&self, vals: &[RationalFn]) -> Result<RationalFn, SymbolicError> {
        assert_eq!(vals.len(), self.nvars(), "substitution arity");
        let m = vals.first().map_or(0, |v| v.nvars());
        let n = subst_poly(&self.num, vals, m)?;
        let d = subst_poly(&self.den, vals, m)?;
        n.checked_div(&d)
    }

    /// Whether substituting `vals` gives `target`, compared by
    /// cross-multiplication without reducing the substituted fraction.
    pub fn substitute_eq(&self, vals: &[RationalFn], target: &RationalFn) -> Result<bool, SymbolicError> {
        assert_eq!(vals.len(), self.nvars(), "substitution arity");
        let m = vals.first().map_or(0, |v| v.nvars());
        let (nn, nd) = subst_parts(&self.num, vals, m)?;
        let (dn, dd) = subst_parts(&self.den, vals, m)?;
        if dn.is_zero() {
            return Err(SymbolicError::DivideByZero);
        }
        // (nn/nd) / (dn/dd) == t.num / t.den
        Ok(&(&nn * &dd) * &target.den == &(&nd * &dn) * &target.num)
    }

    /// Rendering as `numerator` or `numerator/denominator`.
    pub fn render(&self, prefix: &str) -> String {
        let n = self.num.render(prefix);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.render(prefix);
        let n = if self.num.len() > 1 { format!("({n})") } else { n };
        let d = if self.den.len() > 1 || d.contains('*') {
            format!("({d})")
        } else {
            d
        };
        format!("{n}/{d}")
    }
}

fn subst_poly(p: &LaurentPoly, vals: &[RationalFn], m: usize) -> Result<RationalFn, SymbolicError> {
    let (num, den) = subst_parts(p, vals, m)?;
    RationalFn::new(num, den)
}

/// Unreduced numerator and denominator of a substituted polynomial.
fn subst_parts(
    p: &LaurentPoly,
    vals: &[RationalFn],
    m: usize,
) -> Result<(LaurentPoly, LaurentPoly), SymbolicError> {
    // Common denominator prod_v den_v^{P_v} num_v^{N_v}, with P_v and N_v the
    // largest positive and negative exponents of variable v.
    let n = vals.len();
    let mut hi = vec![0u32; n];
    let mut lo = vec![0u32; n];
    for (e, _) in p.terms() {
        for (v, &k) in e.iter().enumerate() {
            if k > 0 {
                hi[v] = hi[v].max(k as u32);
            } else {
                lo[v] = lo[v].max((-k) as u32);
            }
        }
    }
    if vals.iter().zip(&lo).any(|(v, &l)| l > 0 && v.is_zero()) {
        return Err(SymbolicError::DivideByZero);
    }
    let mut num_pows: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
    let mut den_pows: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
    for v in 0..n {
        let top = (hi[v] + lo[v]) as usize;
        let mut np = vec![LaurentPoly::one(m)];
        let mut dp = vec![LaurentPoly::one(m)];
        for j in 0..top {
            np.push(&np[j] * &vals[v].num);
            dp.push(&dp[j] * &vals[v].den);
        }
        num_pows.push(np);
        den_pows.push(dp);
    }
    let mut num = LaurentPoly::zero(m);
    for (e, c) in p.terms() {
        let mut t = LaurentPoly::constant(m, c.clone());
        for (v, &k) in e.iter().enumerate() {
            let a = (k + lo[v] as i32) as usize;
            let b = (hi[v] as i32 - k) as usize;
            if a > 0 {
                t = &t * &num_pows[v][a];
            }
            if b > 0 {
                t = &t * &den_pows[v][b];
            }
        }
        num = &num + &t;
    }
    let mut den = LaurentPoly::one(m);
    for v in 0..n {
        den = &den * &den_pows[v][hi[v] as usize];
        den = &den * &num_pows[v][lo[v] as usize];
    }
    Ok((num, den))
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFn {}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("y"))
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({})", self.render("y"))
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        let r = if self.den == rhs.den {
            RationalFn::new(&self.num + &rhs.num, self.den.clone())
        } else {
            RationalFn::new(
                &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
                &self.den * &rhs.den,
            )
        };
        r.expect("nonzero denominator")
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: RationalFn) -> RationalFn {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: &RationalFn) -> RationalFn {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}
