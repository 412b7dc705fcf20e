//! Free-group words, truncated Magnus expansion, Hall bases and the maps
//! `phi_k` from the lower central series into `I^{k-2} J / I^{k-1} J`.
//!
//! Conventions: `[a, b] = a b a^-1 b^-1`, `a^b = b a b^-1`, and
//! `[a, b, c] = [[a, b], c]`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{cycle_to_plaquettes, word_to_cycle, Ambient};
use crate::linalg::{bareiss_rank, IntMatrix};
use crate::modules::{basis_j, normal_form_j, PlaquetteChain};
use crate::ring::{var_name, Filtration, LaurentPoly};

/// Freely reduced word; letters are `(generator, +-1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<(usize, i8)>,
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        FreeWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, g: usize) -> Self {
        assert!(g < rank);
        FreeWord {
            rank,
            letters: vec![(g, 1)],
        }
    }

    /// Freely reduces the given letters.
    pub fn from_letters(rank: usize, letters: impl IntoIterator<Item = (usize, i8)>) -> Self {
        let mut out: Vec<(usize, i8)> = Vec::new();
        for (g, e) in letters {
            assert!(g < rank && (e == 1 || e == -1));
            match out.last() {
                Some(&(h, f)) if h == g && f == -e => {
                    out.pop();
                }
                _ => out.push((g, e)),
            }
        }
        FreeWord { rank, letters: out }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        assert_eq!(self.rank, other.rank);
        FreeWord::from_letters(self.rank, self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `[self, other] = self other self^-1 other^-1`.
    pub fn commutator(&self, other: &FreeWord) -> FreeWord {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    /// `self^by = by self by^-1`.
    pub fn conjugate(&self, by: &FreeWord) -> FreeWord {
        by.mul(self).mul(&by.inverse())
    }

    /// Exponent sums per generator.
    pub fn abelianization(&self) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        for &(g, e) in self.letters.iter() {
            v[g] += e as i64;
        }
        v
    }

    /// Parses the word syntax: letters `x y z` (in a rank-3 group), `'` for
    /// inverse, `[a, b, ...]` for left-normed commutators, parentheses,
    /// `^n` for integer powers, `^w` for conjugation, and `1` for the
    /// identity. Juxtaposition (optionally with `*`) multiplies.
    pub fn parse(s: &str, rank: usize) -> Result<FreeWord> {
        let mut p = WordParser {
            src: s.as_bytes(),
            pos: 0,
            rank,
        };
        let w = p.product()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse(p.pos, "unexpected character"));
        }
        Ok(w)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, &(g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", var_name(g), if e < 0 { "'" } else { "" })?;
        }
        Ok(())
    }
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
}

impl WordParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn product(&mut self) -> Result<FreeWord> {
        let mut w = FreeWord::identity(self.rank);
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if c == b'[' || c == b'(' || c == b'1' || c.is_ascii_alphabetic() => {
                    let f = self.factor()?;
                    w = w.mul(&f);
                }
                _ => return Ok(w),
            }
        }
    }

    fn factor(&mut self) -> Result<FreeWord> {
        let mut w = self.atom()?;
        loop {
            match self.peek() {
                Some(b'\'') => {
                    self.pos += 1;
                    w = w.inverse();
                }
                Some(b'^') => {
                    self.pos += 1;
                    match self.peek() {
                        Some(c) if c == b'-' || c.is_ascii_digit() => {
                            let n = self.integer()?;
                            w = w.pow(n);
                        }
                        _ => {
                            let by = self.atom()?;
                            w = w.conjugate(&by);
                        }
                    }
                }
                _ => return Ok(w),
            }
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        core::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse::<i64>().ok())
            .filter(|n| n.unsigned_abs() <= 64)
            .ok_or_else(|| Error::parse(start, "bad exponent"))
    }

    fn atom(&mut self) -> Result<FreeWord> {
        let Some(c) = self.peek() else {
            return Err(Error::parse(self.pos, "unexpected end of word"));
        };
        let at = self.pos;
        match c {
            b'1' => {
                self.pos += 1;
                Ok(FreeWord::identity(self.rank))
            }
            b'(' => {
                self.pos += 1;
                let w = self.product()?;
                self.expect(b')')?;
                Ok(w)
            }
            b'[' => {
                self.pos += 1;
                let mut w = self.product()?;
                self.expect(b',')?;
                loop {
                    let next = self.product()?;
                    w = w.commutator(&next);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        _ => break,
                    }
                }
                self.expect(b']')?;
                Ok(w)
            }
            c => {
                let g = ['x', 'y', 'z']
                    .iter()
                    .position(|&v| v as u8 == c)
                    .filter(|&g| g < self.rank)
                    .ok_or_else(|| Error::parse(at, format!("unknown letter '{}'", c as char)))?;
                self.pos += 1;
                Ok(FreeWord::generator(self.rank, g))
            }
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }
}

/// Truncated Magnus expansion `x_i -> 1 + X_i`; keys are noncommutative
/// monomials as generator sequences.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MagnusSeries {
    rank: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<u8>, i64>,
}

impl MagnusSeries {
    pub fn one(rank: usize, degree: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Vec::new(), 1);
        MagnusSeries { rank, degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, word: &[u8]) -> i64 {
        self.coeffs.get(word).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &i64)> {
        self.coeffs.iter()
    }

    /// Right multiplication by the image of one letter.
    fn push_letter(&mut self, g: usize, e: i8) {
        let mut out: BTreeMap<Vec<u8>, i64> = BTreeMap::new();
        for (m, &c) in self.coeffs.iter() {
            let room = self.degree - m.len();
            let mut key = m.clone();
            // (1 + X)^{+-1} = sum_n (+-1)^n X^n, cut at one term for +1
            for n in 0..=room {
                let s = if e > 0 {
                    if n > 1 {
                        break;
                    }
                    1
                } else if n % 2 == 0 {
                    1
                } else {
                    -1
                };
                *out.entry(key.clone()).or_insert(0) += s * c;
                key.push(g as u8);
            }
        }
        out.retain(|_, c| *c != 0);
        self.coeffs = out;
    }

    pub fn mul(&self, other: &MagnusSeries) -> MagnusSeries {
        assert_eq!(self.rank, other.rank);
        let degree = self.degree.min(other.degree);
        let mut coeffs: BTreeMap<Vec<u8>, i64> = BTreeMap::new();
        for (a, &c) in self.coeffs.iter() {
            for (b, &d) in other.coeffs.iter() {
                if a.len() + b.len() > degree {
                    continue;
                }
                let mut k = a.clone();
                k.extend_from_slice(b);
                *coeffs.entry(k).or_insert(0) += c * d;
            }
        }
        coeffs.retain(|_, c| *c != 0);
        MagnusSeries {
            rank: self.rank,
            degree,
            coeffs,
        }
    }

    /// Coefficients of all length-`k` monomials in lexicographic order.
    pub fn homogeneous(&self, k: usize) -> Vec<i64> {
        let n = self.rank.pow(k as u32);
        let mut out = vec![0; n];
        for (m, &c) in self.coeffs.iter() {
            if m.len() == k {
                let idx = m.iter().fold(0usize, |acc, &g| acc * self.rank + g as usize);
                out[idx] = c;
            }
        }
        out
    }
}

impl fmt::Display for MagnusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Vec<u8>, &i64)> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0)));
        let mut first = true;
        for (m, &c) in terms {
            let name: String = if m.is_empty() {
                String::from("1")
            } else {
                m.iter().map(|&g| var_name(g as usize).to_ascii_uppercase()).collect()
            };
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            first = false;
            if mag != 1 && !m.is_empty() {
                write!(f, "{mag}*{name}")?;
            } else if m.is_empty() {
                write!(f, "{mag}")?;
            } else {
                f.write_str(&name)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub fn magnus(w: &FreeWord, degree: usize) -> MagnusSeries {
    let mut s = MagnusSeries::one(w.rank, degree);
    for &(g, e) in w.letters.iter() {
        s.push_letter(g, e);
    }
    s
}

/// Smallest length of a nonempty monomial in the Magnus expansion, i.e.
/// the largest `k` with `w` in the `k`-th lower central term.
pub fn lcs_depth(w: &FreeWord, degree: usize) -> Filtration {
    magnus(w, degree)
        .coeffs
        .keys()
        .filter(|m| !m.is_empty())
        .map(|m| m.len())
        .min()
        .map_or(Filtration::AtLeast(degree + 1), Filtration::Exact)
}

/// Left-normed `[... [[x_1, x_2], x_3], ..., x_k]`.
pub fn basic_commutator(letters: &[usize], rank: usize) -> Result<FreeWord> {
    if letters.len() < 2 {
        return Err(Error::InvalidArgument(String::from(
            "a commutator needs at least two letters",
        )));
    }
    if letters.iter().any(|&g| g >= rank) {
        return Err(Error::InvalidArgument(String::from("letter outside the free group")));
    }
    if letters[0] == letters[1] {
        return Err(Error::DegenerateCommutator);
    }
    let mut w = FreeWord::generator(rank, letters[0]);
    for &g in letters[1..].iter() {
        w = w.commutator(&FreeWord::generator(rank, g));
    }
    Ok(w)
}

/// Rank of `F_k / F_{k+1}` for the free group of rank `d`:
/// `(1/k) sum_{e | k} mu(e) d^{k/e}`.
pub fn witt_rank(d: usize, k: usize) -> u64 {
    assert!(k >= 1);
    let mut total: i128 = 0;
    for e in 1..=k {
        if k.is_multiple_of(e) {
            total += mobius(e) as i128 * (d as i128).pow((k / e) as u32);
        }
    }
    (total / k as i128) as u64
}

fn mobius(n: usize) -> i32 {
    let mut n = n;
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Bracket {
    Gen(usize),
    Comm(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    pub fn word(&self, rank: usize) -> FreeWord {
        match self {
            Bracket::Gen(g) => FreeWord::generator(rank, *g),
            Bracket::Comm(a, b) => a.word(rank).commutator(&b.word(rank)),
        }
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracket::Gen(g) => write!(f, "{}", var_name(*g)),
            Bracket::Comm(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HallElement {
    pub weight: usize,
    pub bracket: Bracket,
    /// Indices of the two factors in the enclosing list.
    pub parts: Option<(usize, usize)>,
}

/// Basic commutators of weight `<= max_weight` on `rank` generators, ordered
/// by weight and then by construction order: `[c_i, c_j]` with
/// `c_i > c_j`, and `c_t <= c_j` whenever `c_i = [c_s, c_t]`.
pub fn hall_basis(rank: usize, max_weight: usize) -> Vec<HallElement> {
    let mut out: Vec<HallElement> = (0..rank)
        .map(|g| HallElement {
            weight: 1,
            bracket: Bracket::Gen(g),
            parts: None,
        })
        .collect();
    for n in 2..=max_weight {
        let existing = out.len();
        for i in 0..existing {
            for j in 0..i {
                if out[i].weight + out[j].weight != n {
                    continue;
                }
                if let Some((_, t)) = out[i].parts {
                    if t > j {
                        continue;
                    }
                }
                let bracket = Bracket::Comm(Box::new(out[i].bracket.clone()), Box::new(out[j].bracket.clone()));
                out.push(HallElement {
                    weight: n,
                    bracket,
                    parts: Some((i, j)),
                });
            }
        }
    }
    out
}

/// Rank of the lattice spanned by the degree-`k` Magnus coefficients of
/// the weight-`k` basic commutators.
pub fn hall_span_rank(rank: usize, k: usize) -> usize {
    let rows: Vec<Vec<i64>> = hall_basis(rank, k)
        .iter()
        .filter(|h| h.weight == k)
        .map(|h| magnus(&h.bracket.word(rank), k).homogeneous(k))
        .collect();
    if rows.is_empty() {
        return 0;
    }
    bareiss_rank(&IntMatrix::from_rows(&rows))
}

/// Coordinates in [`basis_j`]`(k - 2)` of the class of the cycle traced by `w`.
pub fn phi_k(w: &FreeWord, k: usize, ambient: Ambient) -> Result<Vec<BigInt>> {
    if k < 2 {
        return Err(Error::InvalidArgument(String::from("phi_k needs k >= 2")));
    }
    if w.abelianization().iter().any(|&e| e != 0) {
        return Err(Error::NotInCommutatorSubgroup);
    }
    if let Filtration::Exact(depth) = lcs_depth(w, k) {
        if depth < k {
            return Err(Error::NotInLowerCentral { required: k, depth });
        }
    }
    let chain = cycle_to_plaquettes(&word_to_cycle(w, ambient)?)?;
    normal_form_j(&chain, k - 2)
}

/// The plaquette named by `[a, b]`, with sign, or `None` if the commutator
/// has no vertical edges (relative model, `[x, y]`).
fn commutator_plaquette(a: usize, b: usize, ambient: Ambient) -> Option<(usize, i64)> {
    match ambient {
        Ambient::Torus => {
            // [x,y] -> P_z, [y,z] -> P_x, [z,x] -> P_y
            let i = 3 - a - b;
            Some((i, if (i + 1) % 3 == a { 1 } else { -1 }))
        }
        Ambient::Relative => match (a, b) {
            (2, 1) => Some((0, 1)),
            (1, 2) => Some((0, -1)),
            (2, 0) => Some((1, 1)),
            (0, 2) => Some((1, -1)),
            _ => None,
        },
    }
}

/// `(1 - x_3) ... (1 - x_k) P([x_1, x_2])` in [`basis_j`]`(k - 2)`; in the
/// relative model `z` acts trivially.
pub fn phi_closed_form(letters: &[usize], ambient: Ambient) -> Result<Vec<BigInt>> {
    if letters.len() < 2 {
        return Err(Error::InvalidArgument(String::from(
            "a commutator needs at least two letters",
        )));
    }
    if letters[0] == letters[1] {
        return Err(Error::DegenerateCommutator);
    }
    let d = ambient.dim();
    let k = letters.len();
    let Some((generator, sign)) = commutator_plaquette(letters[0], letters[1], ambient) else {
        return Ok(vec![BigInt::zero(); basis_j(k - 2, ambient).len()]);
    };
    let mut coeff = LaurentPoly::constant(d, sign);
    for &g in letters[2..].iter() {
        coeff = if g < d {
            &coeff * &LaurentPoly::one_minus(d, g)
        } else {
            LaurentPoly::zero(d)
        };
    }
    normal_form_j(&PlaquetteChain::generator(ambient, generator, coeff), k - 2)
}

/// One surjectivity witness: a basic commutator hitting a basis element.
#[derive(Clone, Debug)]
pub struct Witness {
    pub label: String,
    pub letters: Vec<usize>,
    pub word: FreeWord,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct SurjectivityReport {
    pub k: usize,
    pub ambient: Ambient,
    pub witnesses: Vec<Witness>,
}

impl SurjectivityReport {
    pub fn all_ok(&self) -> bool {
        self.witnesses.iter().all(|w| w.ok)
    }
}

/// For every basis element `C P_i` of `I^{k-2} J / I^{k-1} J`, evaluates
/// `phi_k` on `[a, b, x^a, y^b, z^c]` where `[a, b]` traces `P_i`.
pub fn phi_surjectivity_check(k: usize, ambient: Ambient) -> Result<SurjectivityReport> {
    if k < 2 {
        return Err(Error::InvalidArgument(String::from("surjectivity needs k >= 2")));
    }
    let basis = basis_j(k - 2, ambient);
    let mut witnesses = Vec::with_capacity(basis.len());
    for (idx, e) in basis.elements.iter().enumerate() {
        let mut letters: Vec<usize> = match (ambient, e.generator) {
            (Ambient::Torus, 0) => vec![1, 2],
            (Ambient::Torus, 1) => vec![2, 0],
            (Ambient::Torus, _) => vec![0, 1],
            (Ambient::Relative, 0) => vec![2, 1],
            (Ambient::Relative, _) => vec![2, 0],
        };
        for axis in 0..ambient.dim() {
            for _ in 0..e.multiplier.get(axis) {
                letters.push(axis);
            }
        }
        let word = basic_commutator(&letters, 3)?;
        let v = phi_k(&word, k, ambient)?;
        let ok = v
            .iter()
            .enumerate()
            .all(|(j, x)| if j == idx { *x == BigInt::from(1) } else { x.is_zero() });
        witnesses.push(Witness {
            label: basis.labels[idx].clone(),
            letters,
            word,
            ok,
        });
    }
    Ok(SurjectivityReport { k, ambient, witnesses })
}

/// Dimension bookkeeping for `F_k -> I^{k-2} J / I^{k-1} J` in `T^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ses4Report {
    pub k: usize,
    pub witt: u64,
    pub target_rank: usize,
    pub image_rank: usize,
}

impl Ses4Report {
    pub fn kernel_rank(&self) -> i64 {
        self.witt as i64 - self.image_rank as i64
    }

    pub fn consistent(&self) -> bool {
        self.image_rank == self.target_rank && self.witt as usize >= self.target_rank
    }
}

pub fn ses4_check(k: usize) -> Result<Ses4Report> {
    if k < 2 {
        return Err(Error::InvalidArgument(String::from("needs k >= 2")));
    }
    let ambient = Ambient::Torus;
    let mut rows = Vec::new();
    for h in hall_basis(3, k).iter().filter(|h| h.weight == k) {
        rows.push(phi_k(&h.bracket.word(3), k, ambient)?);
    }
    Ok(Ses4Report {
        k,
        witt: witt_rank(3, k),
        target_rank: basis_j(k - 2, ambient).len(),
        image_rank: bareiss_rank(&IntMatrix::from_rows(&rows)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s, 3).unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(w("x y x' y'"), w("[x,y]"));
        assert_eq!(w("[[x,y],z]"), w("[x,y,z]"));
        assert_eq!(w("[x,y]^z"), w("z x y x' y' z'"));
        assert_eq!(w("x^3 x^-2"), w("x"));
        assert!(w("x x'").is_empty());
        assert!(FreeWord::parse("[x,y", 3).is_err());
        assert!(FreeWord::parse("w", 3).is_err());
        assert!(FreeWord::parse("z", 2).is_err());
        assert_eq!(w("[x,y]").to_string(), "x y x' y'");
        assert_eq!(FreeWord::parse(&w("[[x,y],z]").to_string(), 3).unwrap(), w("[[x,y],z]"));
    }

    #[test]
    fn magnus_examples() {
        assert_eq!(magnus(&w("x x'"), 4), MagnusSeries::one(3, 4));
        assert_eq!(magnus(&w("[x,y]"), 2).to_string(), "1 + XY - YX");
        assert_eq!(magnus(&w("x"), 3).to_string(), "1 + X");
    }

    #[test]
    fn depth_examples() {
        assert_eq!(lcs_depth(&w("[x,y]"), 5), Filtration::Exact(2));
        assert_eq!(lcs_depth(&w("[[x,y],z]"), 5), Filtration::Exact(3));
        assert_eq!(lcs_depth(&FreeWord::identity(3), 5), Filtration::AtLeast(6));
        let c = basic_commutator(&[0, 1, 2, 2], 3).unwrap();
        assert_eq!(c, w("[x,y,z,z]"));
        assert_eq!(lcs_depth(&c, 6), Filtration::Exact(4));
        assert_eq!(basic_commutator(&[1, 1, 0], 3), Err(Error::DegenerateCommutator));
    }

    #[test]
    fn witt_examples() {
        let r: Vec<u64> = (1..=5).map(|k| witt_rank(3, k)).collect();
        assert_eq!(r, [3, 3, 8, 18, 48]);
        assert_eq!(witt_rank(2, 4), 3);
    }

    #[test]
    fn hall_counts_and_spans() {
        let h = hall_basis(3, 5);
        for k in 1..=5 {
            let n = h.iter().filter(|e| e.weight == k).count() as u64;
            assert_eq!(n, witt_rank(3, k));
            assert_eq!(hall_span_rank(3, k) as u64, witt_rank(3, k));
        }
    }

    #[test]
    fn phi_examples() {
        let t = Ambient::Torus;
        let v = phi_k(&w("[[x,y],z]"), 3, t).unwrap();
        assert_eq!(v, phi_closed_form(&[0, 1, 2], t).unwrap());
        let v = phi_k(&w("[x,y]"), 2, t).unwrap();
        assert_eq!(v, [1, 0, 0].map(BigInt::from));
        assert_eq!(phi_k(&w("x"), 2, t), Err(Error::NotInCommutatorSubgroup));
        assert!(matches!(
            phi_k(&w("[x,y]"), 3, t),
            Err(Error::NotInLowerCentral { required: 3, depth: 2 })
        ));
    }

    #[test]
    fn surjectivity_small() {
        assert!(phi_surjectivity_check(2, Ambient::Relative).unwrap().all_ok());
        assert!(phi_surjectivity_check(3, Ambient::Torus).unwrap().all_ok());
    }

    fn arb_word(max: usize) -> impl Strategy<Value = FreeWord> {
        proptest::collection::vec((0usize..3, prop_oneof![Just(1i8), Just(-1i8)]), 0..max)
            .prop_map(|ls| FreeWord::from_letters(3, ls))
    }

    fn at_least(f: Filtration) -> usize {
        match f {
            Filtration::Exact(d) | Filtration::AtLeast(d) => d,
        }
    }

    proptest! {
        #[test]
        fn magnus_is_multiplicative(a in arb_word(8), b in arb_word(8), d in 1usize..7) {
            prop_assert_eq!(magnus(&a.mul(&b), d), magnus(&a, d).mul(&magnus(&b, d)));
        }

        #[test]
        fn depth_is_superadditive(a in arb_word(6), b in arb_word(6)) {
            let c = a.commutator(&b);
            let da = at_least(lcs_depth(&a, 6));
            let db = at_least(lcs_depth(&b, 6));
            let dc = at_least(lcs_depth(&c, 6));
            prop_assert!(dc >= (da + db).min(7));
        }
    }
}
