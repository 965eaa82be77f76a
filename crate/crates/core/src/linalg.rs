//! Dense matrices and row spaces over a prime field F_q.
//!
//! Every matrix carries its modulus `q`; entries are stored one digit per
//! byte in row-major order. Row spaces are kept in reduced row echelon form,
//! which makes equality and hashing of subspaces a byte comparison.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted as a base field size (digits are stored as `u8`).
pub const MAX_PRIME: u32 = 251;

pub(crate) fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiplicative inverse in F_q for prime `q`, `a != 0`.
#[inline]
pub(crate) fn inv_mod(a: u32, q: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(q));
    // Fermat: a^(q-2)
    let mut base = (a % q) as u64;
    let mut e = q as u64 - 2;
    let m = q as u64;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u32
}

/// `dst += c * src` over F_q.
#[inline]
pub(crate) fn axpy(dst: &mut [u8], c: u32, src: &[u8], q: u32) {
    debug_assert_eq!(dst.len(), src.len());
    if c == 0 {
        return;
    }
    if q == 2 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= *s;
        }
    } else {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = ((*d as u32 + c * *s as u32) % q) as u8;
        }
    }
}

#[inline]
fn scale(row: &mut [u8], c: u32, q: u32) {
    if c == 1 {
        return;
    }
    for x in row.iter_mut() {
        *x = ((*x as u32 * c) % q) as u8;
    }
}

/// A dense `rows x cols` matrix over F_q.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(q: u32, rows: usize, cols: usize) -> Matrix {
        Matrix {
            q,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(q: u32, n: usize) -> Matrix {
        let mut m = Matrix::zeros(q, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from explicit rows, checking shape and digit range.
    pub fn from_rows<R: AsRef<[u8]>>(q: u32, cols: usize, rows: &[R]) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::WrongLength {
                    expected: cols,
                    found: r.len(),
                });
            }
            if let Some(&bad) = r.iter().find(|&&d| d as u32 >= q) {
                return Err(Error::InvalidInput(format!(
                    "digit {bad} out of range for q = {q}"
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            q,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub(crate) fn from_raw(q: u32, rows: usize, cols: usize, data: Vec<u8>) -> Matrix {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { q, rows, cols, data }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        debug_assert!((v as u32) < self.q);
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> + '_ {
        // chunks_exact panics on a zero chunk size
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&d| d == 0)
    }

    pub fn push_row(&mut self, row: &[u8]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        assert_eq!(self.q, rhs.q);
        let mut out = Matrix::zeros(self.q, self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let c = self.get(i, l) as u32;
                if c != 0 {
                    let (src_start, src_end) = (l * rhs.cols, (l + 1) * rhs.cols);
                    let src = &rhs.data[src_start..src_end];
                    axpy(out.row_mut(i), c, src, self.q);
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.q, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.q, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(rhs.row(r));
        }
        Matrix::from_raw(self.q, self.rows, cols, data)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix::from_raw(self.q, self.rows + rhs.rows, self.cols, data)
    }

    /// In-place reduction to reduced row echelon form. Returns the pivot
    /// columns; zero rows end up at the bottom.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let q = self.q;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if p != lead {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, lead * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(lead, c) as u32, q);
            scale(self.row_mut(lead), inv, q);
            let pivot_row = self.row(lead).to_vec();
            for r in 0..self.rows {
                if r != lead {
                    let v = self.get(r, c) as u32;
                    if v != 0 {
                        axpy(self.row_mut(r), q - v, &pivot_row, q);
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.q, self.cols);
        for r in self.row_iter() {
            e.insert(r);
        }
        e.rank()
    }

    /// Basis of the right null space `{x : self * x^T = 0}` as rows, in RREF.
    pub fn kernel(&self) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let q = self.q;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(q, free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            out.set(i, f, 1);
            for (r, &p) in pivots.iter().enumerate() {
                let v = m.get(r, f) as u32;
                if v != 0 {
                    out.set(i, p, (q - v) as u8);
                }
            }
        }
        out.rref_in_place();
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{}", self.rows, self.cols, self.q)?;
        for r in self.row_iter() {
            let s: Vec<String> = r.iter().map(|d| d.to_string()).collect();
            writeln!(f, "  [{}]", s.join(" "))?;
        }
        Ok(())
    }
}

/// Incremental row echelon basis, used for rank computations with early exit.
#[derive(Clone, Debug)]
pub struct Echelon {
    q: u32,
    cols: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(q: u32, cols: usize) -> Echelon {
        Echelon {
            q,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Seeds the basis with the rows of a matrix already in RREF.
    pub fn from_rref(m: &Matrix, pivots: &[usize]) -> Echelon {
        Echelon {
            q: m.q,
            cols: m.cols,
            rows: m.row_iter().map(|r| r.to_vec()).collect(),
            pivots: pivots.to_vec(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u8]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p] as u32;
            if c != 0 {
                axpy(v, self.q - c, row, self.q);
            }
        }
    }

    /// Reduces `v` against the basis; returns true if it was independent.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&d| d != 0) else {
            return false;
        };
        let inv = inv_mod(v[p] as u32, self.q);
        scale(&mut v, inv, self.q);
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|&d| d == 0)
    }
}

/// A subspace of F_q^n stored as the unique RREF basis of its row space.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RowSpace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(generators: &Matrix) -> RowSpace {
        let mut m = generators.clone();
        let pivots = m.rref_in_place();
        let r = pivots.len();
        m.data.truncate(r * m.cols);
        m.rows = r;
        RowSpace { basis: m, pivots }
    }

    pub fn zero(q: u32, n: usize) -> RowSpace {
        RowSpace {
            basis: Matrix::zeros(q, 0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(q: u32, n: usize) -> RowSpace {
        RowSpace {
            basis: Matrix::identity(q, n),
            pivots: (0..n).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn q(&self) -> u32 {
        self.basis.q
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::from_rref(&self.basis, &self.pivots)
    }

    pub fn contains_vector(&self, v: &[u8]) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains(&self, other: &RowSpace) -> bool {
        let e = self.echelon();
        other.basis.row_iter().all(|r| e.contains(r))
    }

    pub fn sum(&self, other: &RowSpace) -> RowSpace {
        RowSpace::new(&self.basis.vstack(&other.basis))
    }

    pub fn sum_dim(&self, other: &RowSpace) -> usize {
        let mut e = self.echelon();
        for r in other.basis.row_iter() {
            e.insert(r);
        }
        e.rank()
    }

    pub fn intersection_dim(&self, other: &RowSpace) -> usize {
        self.dim() + other.dim() - self.sum_dim(other)
    }

    /// Exact intersection by the Zassenhaus algorithm.
    pub fn intersection(&self, other: &RowSpace) -> RowSpace {
        let (q, n) = (self.q(), self.ambient_dim());
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Matrix::zeros(q, other.dim(), n));
        let mut z = top.vstack(&bottom);
        let pivots = z.rref_in_place();
        let mut out = Matrix::zeros(q, 0, n);
        for (r, &p) in pivots.iter().enumerate() {
            if p >= n {
                out.push_row(&z.row(r)[n..]);
            }
        }
        RowSpace::new(&out)
    }

    /// Orthogonal complement under the standard dot product.
    pub fn dual(&self) -> RowSpace {
        if self.dim() == 0 {
            return RowSpace::full(self.q(), self.ambient_dim());
        }
        RowSpace::new(&self.basis.kernel())
    }

    /// Subspace distance `dim V + dim W - 2 dim(V ∩ W)`.
    pub fn distance(&self, other: &RowSpace) -> usize {
        2 * self.sum_dim(other) - self.dim() - other.dim()
    }

    /// All vectors of the space, in the order of base-q coefficient tuples.
    pub fn vectors(&self) -> Vec<Vec<u8>> {
        let (q, k, n) = (self.q(), self.dim(), self.ambient_dim());
        let total = (q as usize).pow(k as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut v = vec![0u8; n];
            let mut rem = idx;
            for r in 0..k {
                let c = (rem % q as usize) as u32;
                rem /= q as usize;
                axpy(&mut v, c, self.basis.row(r), q);
            }
            out.push(v);
        }
        out
    }
}

/// Matrix payload for JSON: `{"q", "rows": [[..]..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub q: u32,
    pub rows: Vec<Vec<u8>>,
}
