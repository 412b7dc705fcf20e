//! Exact integer linear algebra: fraction-free elimination, Smith and
//! Hermite normal forms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone().into());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(l, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += a * self.get(i, j);
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + q * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(m: &IntMatrix) -> usize {
    bareiss(m).0
}

/// Determinant of a square matrix by Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    if m.rows == 0 {
        return BigInt::one();
    }
    let (rank, last, sign) = bareiss(m);
    if rank < m.rows {
        return BigInt::zero();
    }
    last * sign
}

fn bareiss(m: &IntMatrix) -> (usize, BigInt, i32) {
    let mut a = m.clone();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut sign = 1;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            a.swap_rows(p, r);
            sign = -sign;
        }
        let piv = a.get(r, c).clone();
        for i in r + 1..a.rows {
            let lead = a.get(i, c).clone();
            for j in c + 1..a.cols {
                let v = (&piv * a.get(i, j) - &lead * a.get(r, j)) / &prev;
                a.set(i, j, v);
            }
            a.set(i, c, BigInt::zero());
        }
        prev = piv;
        r += 1;
    }
    (r, prev, sign)
}

/// `p * m * q = d` with `p`, `q` unimodular and `d` diagonal with
/// `d_1 | d_2 | ...`, all nonnegative.
#[derive(Clone, Debug)]
pub struct Smith {
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub diagonal: Vec<BigInt>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Nonzero invariant factors different from one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    /// Rows of `p` spanning the integer left kernel `{v : v m = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<BigInt>> {
        let r = self.rank();
        (r..self.p.rows()).map(|i| self.p.row(i).to_vec()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let mut a = m.clone();
    let mut p = IntMatrix::identity(m.rows);
    let mut q = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut diagonal = Vec::with_capacity(n);

    for t in 0..n {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        a.swap_rows(t, bi);
        p.swap_rows(t, bi);
        a.swap_cols(t, bj);
        q.swap_cols(t, bj);

        loop {
            let mut dirty = false;
            for i in t + 1..a.rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let quot = -a.get(i, t).div_floor(a.get(t, t));
                a.add_row(i, t, &quot);
                p.add_row(i, t, &quot);
                if !a.get(i, t).is_zero() {
                    a.swap_rows(t, i);
                    p.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..a.cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let quot = -a.get(t, j).div_floor(a.get(t, t));
                a.add_col(j, t, &quot);
                q.add_col(j, t, &quot);
                if !a.get(t, j).is_zero() {
                    a.swap_cols(t, j);
                    q.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let piv = a.get(t, t).clone();
            let bad = (t + 1..a.rows).find(|&i| (t + 1..a.cols).any(|j| !a.get(i, j).is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    p.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            p.negate_row(t);
        }
        diagonal.push(a.get(t, t).clone());
    }
    while diagonal.len() < n {
        diagonal.push(BigInt::zero());
    }
    Smith { p, q, diagonal }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows
/// are dropped. Pivots are positive and entries above a pivot are reduced
/// into `[0, pivot)`.
pub fn hermite_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut a = IntMatrix::from_rows(rows);
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..a.rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                if best.is_none_or(|b| a.get(i, c).abs() < a.get(b, c).abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else {
                break;
            };
            a.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..a.rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let quot = -a.get(i, c).div_floor(a.get(r, c));
                a.add_row(i, r, &quot);
                if !a.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(r, c).is_zero() {
            continue;
        }
        if a.get(r, c).is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let quot = -a.get(i, c).div_floor(a.get(r, c));
            a.add_row(i, r, &quot);
        }
        r += 1;
    }
    (0..r).map(|i| a.row(i).to_vec()).collect()
}

/// Hermite-reduced basis of the integer left kernel of `m`.
pub fn left_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    hermite_rows(&smith_normal_form(m).left_kernel())
}
