//! The group ring `Z[Z^d]` and the graded pieces `I^k / I^{k+1}` of its
//! augmentation-ideal filtration.
//!
//! Laurent monomials are written in the translations `x, y, z`. The graded
//! piece `I^k / I^{k+1}` is identified with homogeneous degree-`k` integer
//! polynomials in the difference variables `u_i = 1 - x_i`; a Laurent
//! polynomial is pushed there by substituting `x_i = 1 - u_i` and
//! `x_i^{-1} = sum_m u_i^m` and truncating.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

const VAR_NAMES: [char; MAX_DIM] = ['x', 'y', 'z'];

pub fn var_name(axis: usize) -> char {
    VAR_NAMES[axis]
}

/// Exponent vector of a Laurent monomial. Slots past the ambient dimension
/// are always zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(pub [i64; MAX_DIM]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_DIM])
    }

    pub fn new(exps: &[i64]) -> Self {
        assert!(exps.len() <= MAX_DIM);
        let mut e = [0; MAX_DIM];
        e[..exps.len()].copy_from_slice(exps);
        Monomial(e)
    }

    pub fn var(axis: usize) -> Self {
        let mut e = [0; MAX_DIM];
        e[axis] = 1;
        Monomial(e)
    }

    pub fn exp(&self, axis: usize) -> i64 {
        self.0[axis]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(e)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.map(|e| -e))
    }

    /// `self + n * v` on exponent vectors.
    pub fn shifted(&self, v: &[i64], n: i64) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(v.iter()) {
            *a += n * b;
        }
        Monomial(e)
    }

    fn fits(&self, dim: usize) -> bool {
        self.0[dim..].iter().all(|&e| e == 0)
    }
}

/// Exponent vector of a `u`-monomial `prod u_i^{a_i}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MultiIndex(pub [u32; MAX_DIM]);

impl MultiIndex {
    pub fn new(a: &[u32]) -> Self {
        assert!(a.len() <= MAX_DIM);
        let mut e = [0; MAX_DIM];
        e[..a.len()].copy_from_slice(a);
        MultiIndex(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        MultiIndex(e)
    }

    pub fn unit(axis: usize) -> Self {
        let mut e = [0; MAX_DIM];
        e[axis] = 1;
        MultiIndex(e)
    }

    /// All multi-indices of total degree `k` in `dim` variables, in
    /// lexicographically ascending order.
    pub fn all(dim: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = [0u32; MAX_DIM];
        fn rec(dim: usize, axis: usize, left: u32, cur: &mut [u32; MAX_DIM], out: &mut Vec<MultiIndex>) {
            if axis + 1 == dim {
                cur[axis] = left;
                out.push(MultiIndex(*cur));
                cur[axis] = 0;
                return;
            }
            for a in 0..=left {
                cur[axis] = a;
                rec(dim, axis + 1, left - a, cur, out);
            }
            cur[axis] = 0;
        }
        if dim == 0 {
            if k == 0 {
                out.push(MultiIndex::default());
            }
            return out;
        }
        rec(dim, 0, k as u32, &mut cur, &mut out);
        out
    }

    /// The same enumeration restricted to indices with `a_skip = 0`.
    pub fn all_without(dim: usize, k: usize, skip: usize) -> Vec<MultiIndex> {
        MultiIndex::all(dim, k)
            .into_iter()
            .filter(|a| a.get(skip) == 0)
            .collect()
    }

    /// `(1-x)^a(1-y)^b(1-z)^c` with unit exponents and zero factors omitted.
    pub fn factor_label(&self) -> String {
        let mut s = String::new();
        for (axis, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            s.push_str("(1-");
            s.push(var_name(axis));
            s.push(')');
            if a > 1 {
                s.push('^');
                s.push_str(&alloc::format!("{}", a));
            }
        }
        s
    }
}

/// Membership depth of an element in the augmentation filtration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Filtration {
    /// In `I^k` but not in `I^{k+1}`.
    Exact(usize),
    /// In `I^k` for every `k` up to the bound that was examined.
    AtLeast(usize),
}

impl Filtration {
    pub fn at_least(&self, k: usize) -> bool {
        match *self {
            Filtration::Exact(d) => d >= k,
            Filtration::AtLeast(d) => d >= k,
        }
    }
}

/// Element of `Z[Z^d]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} unsupported");
        LaurentPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(dim, Monomial::one(), BigInt::one())
    }

    pub fn monomial(dim: usize, m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(m, c.into());
        p
    }

    pub fn constant(dim: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(dim, Monomial::one(), c)
    }

    pub fn var(dim: usize, axis: usize) -> Self {
        assert!(axis < dim);
        Self::monomial(dim, Monomial::var(axis), 1)
    }

    /// `1 - x_axis`.
    pub fn one_minus(dim: usize, axis: usize) -> Self {
        let mut p = Self::one(dim);
        p.add_term(Monomial::var(axis), BigInt::from(-1));
        p
    }

    /// `prod_i (1 - x_i)^{a_i}`.
    pub fn difference_power(dim: usize, a: &MultiIndex) -> Self {
        let mut p = Self::one(dim);
        for axis in 0..dim {
            for _ in 0..a.get(axis) {
                p = &p * &Self::one_minus(dim, axis);
            }
        }
        p
    }

    pub fn from_terms<I, C>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            p.add_term(m, c.into());
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        assert!(m.fits(self.dim), "monomial outside dimension {}", self.dim);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut p = self.clone();
        for (m, c) in other.terms.iter() {
            p.add_term(*m, c.clone());
        }
        Ok(p)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut p = Self::zero(self.dim);
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in other.terms.iter() {
                p.add_term(m1.times(m2), c1 * c2);
            }
        }
        Ok(p)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Multiplication by the monomial `g`.
    pub fn translate(&self, g: &Monomial) -> Self {
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.times(g), a.clone())).collect(),
        }
    }

    /// Sum of coefficients; `I` is its kernel.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Apply `f` to every exponent vector, collecting like terms.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        let mut p = Self::zero(self.dim);
        for (m, c) in self.terms.iter() {
            p.add_term(f(m), c.clone());
        }
        p
    }

    /// Substitute `x_axis = 1`.
    pub fn at_one(&self, axis: usize) -> Self {
        self.map_monomials(|m| {
            let mut e = m.0;
            e[axis] = 0;
            Monomial(e)
        })
    }

    /// Exact quotient by `1 - x_axis`; requires `self` to vanish at `x_axis = 1`.
    pub fn div_one_minus(&self, axis: usize) -> Result<Self> {
        // Group by the exponents of the other variables; within a fibre
        // c_n = q_n - q_{n-1}, so q is the running sum of c.
        let mut fibres: BTreeMap<Monomial, BTreeMap<i64, BigInt>> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let mut rest = m.0;
            rest[axis] = 0;
            fibres.entry(Monomial(rest)).or_default().insert(m.exp(axis), c.clone());
        }
        let mut q = Self::zero(self.dim);
        for (rest, fibre) in fibres {
            let lo = *fibre.keys().next().unwrap();
            let hi = *fibre.keys().next_back().unwrap();
            let mut run = BigInt::zero();
            for n in lo..=hi {
                if let Some(c) = fibre.get(&n) {
                    run += c;
                }
                if n < hi {
                    let mut e = rest.0;
                    e[axis] = n;
                    q.add_term(Monomial(e), run.clone());
                }
            }
            if !run.is_zero() {
                return Err(Error::InvalidArgument(alloc::format!(
                    "polynomial does not vanish at {} = 1",
                    var_name(axis)
                )));
            }
        }
        Ok(q)
    }

    /// Coefficients of the `u`-expansion of `self` in every degree `<= maxdeg`.
    pub fn u_expansion(&self, maxdeg: usize) -> BTreeMap<MultiIndex, BigInt> {
        let mut series_cache: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
        let mut out: BTreeMap<MultiIndex, BigInt> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let mut acc: Vec<(MultiIndex, BigInt)> = vec![(MultiIndex::default(), c.clone())];
            for axis in 0..self.dim {
                let e = m.exp(axis);
                if e == 0 {
                    continue;
                }
                let series = series_cache.entry(e).or_insert_with(|| power_series(e, maxdeg));
                let mut next = Vec::with_capacity(acc.len() * 2);
                for (alpha, a) in acc.iter() {
                    let room = maxdeg - alpha.degree();
                    for (deg, s) in series.iter().enumerate().take(room + 1) {
                        if s.is_zero() {
                            continue;
                        }
                        let mut beta = *alpha;
                        beta.0[axis] += deg as u32;
                        next.push((beta, a * s));
                    }
                }
                acc = next;
            }
            for (alpha, a) in acc {
                let slot = out.entry(alpha).or_insert_with(BigInt::zero);
                *slot += a;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Largest `k <= maxdeg` with `self` in `I^k`, or `AtLeast(maxdeg + 1)`.
    pub fn filtration_degree(&self, maxdeg: usize) -> Filtration {
        let exp = self.u_expansion(maxdeg);
        match exp.keys().map(|a| a.degree()).min() {
            Some(d) => Filtration::Exact(d),
            None => Filtration::AtLeast(maxdeg + 1),
        }
    }

    /// Class of `self` in `I^k / I^{k+1}`.
    pub fn reduce_mod_filtration(&self, k: usize) -> Result<AugClass> {
        let exp = self.u_expansion(k);
        let mut class = AugClass::zero(self.dim, k);
        for (alpha, c) in exp {
            let d = alpha.degree();
            if d < k {
                return Err(Error::FiltrationViolation { required: k, found: d });
            }
            class.add_term(alpha, c);
        }
        Ok(class)
    }

    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        let terms = parse_terms(s, |name| {
            let mut chars = name.chars();
            let c = chars.next()?;
            if chars.next().is_some() {
                return None;
            }
            VAR_NAMES[..dim].iter().position(|&v| v == c)
        })?;
        let mut p = Self::zero(dim);
        for (coef, factors) in terms {
            let mut m = Monomial::one();
            for (axis, e) in factors {
                m.0[axis] += e;
            }
            p.add_term(m, coef);
        }
        Ok(p)
    }
}

/// Coefficients of `u^0 .. u^maxdeg` in `(1 - u)^e`, a generalized binomial
/// series for negative `e`.
fn power_series(e: i64, maxdeg: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(maxdeg + 1);
    let mut c = BigInt::one();
    for m in 0..=maxdeg {
        out.push(c.clone());
        // (-1)^{m+1} C(e, m+1) = (-1)^m C(e, m) * -(e - m) / (m + 1)
        c = c * BigInt::from(m as i64 - e) / BigInt::from(m as i64 + 1);
    }
    out
}

/// Product of two truncated `u`-series, dropping degrees above `maxdeg`.
pub fn series_mul(
    a: &BTreeMap<MultiIndex, BigInt>,
    b: &BTreeMap<MultiIndex, BigInt>,
    maxdeg: usize,
) -> BTreeMap<MultiIndex, BigInt> {
    let mut out: BTreeMap<MultiIndex, BigInt> = BTreeMap::new();
    for (alpha, x) in a.iter() {
        for (beta, y) in b.iter() {
            if alpha.degree() + beta.degree() > maxdeg {
                continue;
            }
            *out.entry(alpha.plus(beta)).or_insert_with(BigInt::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(&-rhs).expect("dimension mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("dimension mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().map(|(m, c)| {
                let factors: Vec<(String, i64)> = (0..self.dim)
                    .filter(|&a| m.exp(a) != 0)
                    .map(|a| (String::from(var_name(a)), m.exp(a)))
                    .collect();
                (c, factors)
            }),
        )
    }
}

/// Element of `I^k / I^{k+1}` as a homogeneous degree-`k` polynomial in `u_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AugClass {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, BigInt>,
}

impl AugClass {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} unsupported");
        AugClass {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_multi(dim: usize, alpha: MultiIndex, c: impl Into<BigInt>) -> Self {
        let mut a = Self::zero(dim, alpha.degree());
        a.add_term(alpha, c.into());
        a
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> BigInt {
        self.coeffs.get(alpha).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: BigInt) {
        assert_eq!(alpha.degree(), self.degree, "inhomogeneous term");
        assert!(alpha.0[self.dim..].iter().all(|&a| a == 0));
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(alpha).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&alpha);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(alloc::format!(
                "degree mismatch {} vs {}",
                self.degree,
                other.degree
            )));
        }
        let mut a = self.clone();
        for (alpha, c) in other.coeffs.iter() {
            a.add_term(*alpha, c.clone());
        }
        Ok(a)
    }

    /// Graded product `I^j/I^{j+1} x I^m/I^{m+1} -> I^{j+m}/I^{j+m+1}`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (a, c) in self.coeffs.iter() {
            for (b, d) in other.coeffs.iter() {
                out.add_term(a.plus(b), c * d);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (a, x) in self.coeffs.iter() {
            out.add_term(*a, x * c);
        }
        out
    }

    /// Linear change of variables `u_i -> sum_j forms[i][j] u_j`.
    pub fn substitute(&self, forms: &[[i64; MAX_DIM]]) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (alpha, c) in self.coeffs.iter() {
            let mut acc = Self::from_multi(self.dim, MultiIndex::default(), c.clone());
            for (axis, f) in forms.iter().enumerate().take(self.dim) {
                let form = linear_form(self.dim, f);
                for _ in 0..alpha.get(axis) {
                    acc = acc.try_mul(&form).expect("same dimension");
                }
            }
            out = out.try_add(&acc).expect("same degree");
        }
        out
    }

    /// A Laurent polynomial representing this class: `u_i -> 1 - x_i`.
    pub fn to_poly(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero(self.dim);
        for (alpha, c) in self.coeffs.iter() {
            p = &p + &LaurentPoly::difference_power(self.dim, alpha).scale(c);
        }
        p
    }

    pub fn parse(s: &str, dim: usize, degree: usize) -> Result<Self> {
        let terms = parse_terms(s, |name| {
            let rest = name.strip_prefix("u_")?;
            let mut chars = rest.chars();
            let c = chars.next()?;
            if chars.next().is_some() {
                return None;
            }
            VAR_NAMES[..dim].iter().position(|&v| v == c)
        })?;
        let mut a = Self::zero(dim, degree);
        for (coef, factors) in terms {
            let mut alpha = MultiIndex::default();
            for (axis, e) in factors {
                if e < 0 {
                    return Err(Error::parse(0, "negative power of a u-variable"));
                }
                alpha.0[axis] += e as u32;
            }
            if alpha.degree() != degree {
                return Err(Error::parse(
                    0,
                    alloc::format!("term of degree {} in a degree-{} class", alpha.degree(), degree),
                ));
            }
            a.add_term(alpha, coef);
        }
        Ok(a)
    }
}

fn linear_form(dim: usize, form: &[i64; MAX_DIM]) -> AugClass {
    let mut a = AugClass::zero(dim, 1);
    for (axis, &c) in form.iter().enumerate().take(dim) {
        a.add_term(MultiIndex::unit(axis), BigInt::from(c));
    }
    a
}

impl fmt::Display for AugClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs.iter().map(|(alpha, c)| {
                let factors: Vec<(String, i64)> = (0..self.dim)
                    .filter(|&a| alpha.get(a) != 0)
                    .map(|a| (alloc::format!("u_{}", var_name(a)), alpha.get(a) as i64))
                    .collect();
                (c, factors)
            }),
        )
    }
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a BigInt, Vec<(String, i64)>)>,
) -> fmt::Result {
    let mut first = true;
    for (c, factors) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        let mono: Vec<String> = factors
            .iter()
            .map(|(name, e)| {
                if *e == 1 {
                    name.clone()
                } else {
                    alloc::format!("{}^{}", name, e)
                }
            })
            .collect();
        if mono.is_empty() {
            write!(f, "{}", mag)?;
        } else if mag.is_one() {
            f.write_str(&mono.join("*"))?;
        } else {
            write!(f, "{}*{}", mag, mono.join("*"))?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

type ParsedTerm = (BigInt, Vec<(usize, i64)>);

/// Shared grammar for the polynomial text forms:
///
/// ```text
/// poly   := ['-'] term (('+' | '-') term)*
/// term   := factor ('*' factor)*
/// factor := integer | name ['^' ['-'] integer]
/// ```
fn parse_terms(s: &str, var: impl Fn(&str) -> Option<usize>) -> Result<Vec<ParsedTerm>> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let read_int = |pos: &mut usize| -> Option<BigInt> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return None;
        }
        s[start..*pos].parse::<BigInt>().ok()
    };

    let mut out = Vec::new();
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(Error::parse(0, "empty expression"));
    }
    if s.trim() == "0" {
        return Ok(out);
    }
    let mut sign = BigInt::one();
    if bytes[pos] == b'-' {
        sign = -sign;
        pos += 1;
    } else if bytes[pos] == b'+' {
        pos += 1;
    }
    loop {
        let mut coef = sign.clone();
        let mut factors = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                return Err(Error::parse(pos, "expected a factor"));
            }
            if bytes[pos].is_ascii_digit() {
                coef *= read_int(&mut pos).ok_or_else(|| Error::parse(pos, "bad integer"))?;
            } else {
                let start = pos;
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                let name = &s[start..pos];
                let axis =
                    var(name).ok_or_else(|| Error::parse(start, alloc::format!("unknown variable '{}'", name)))?;
                skip_ws(&mut pos);
                let mut e = 1i64;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let neg = pos < bytes.len() && bytes[pos] == b'-';
                    if neg {
                        pos += 1;
                    }
                    let n = read_int(&mut pos)
                        .and_then(|n| n.to_i64())
                        .ok_or_else(|| Error::parse(pos, "bad exponent"))?;
                    e = if neg { -n } else { n };
                }
                factors.push((axis, e));
            }
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                continue;
            }
            break;
        }
        out.push((coef, factors));
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        sign = match bytes[pos] {
            b'+' => BigInt::one(),
            b'-' => -BigInt::one(),
            _ => return Err(Error::parse(pos, "expected '+' or '-'")),
        };
        pos += 1;
    }
    Ok(out)
}
