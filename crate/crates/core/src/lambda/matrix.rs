use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{LambdaRing, LocalizedScalar};
use crate::{Error, Result};

/// Dense row-major matrix over a single `Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaMatrix {
    rows: usize,
    cols: usize,
    ring: LambdaRing,
    data: Vec<LocalizedScalar>,
}

impl LambdaMatrix {
    pub fn new(ring: LambdaRing, rows: usize, cols: usize, data: Vec<LocalizedScalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if let Some(bad) = data.iter().find(|x| x.ring() != ring) {
            return Err(Error::RingMismatch { left: ring.base(), right: bad.ring().base() });
        }
        Ok(LambdaMatrix { rows, cols, ring, data })
    }

    pub fn zeros(ring: LambdaRing, rows: usize, cols: usize) -> Self {
        LambdaMatrix { rows, cols, ring, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: LambdaRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_fn(
        ring: LambdaRing,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LocalizedScalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert!(x.ring() == ring, "entry ring differs from matrix ring");
                data.push(x);
            }
        }
        LambdaMatrix { rows, cols, ring, data }
    }

    pub fn from_i64(ring: LambdaRing, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        let data = entries.iter().map(|&x| ring.int(x)).collect();
        Self::new(ring, rows, cols, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(ring: LambdaRing, rows: usize, columns: &[Vec<LocalizedScalar>]) -> Result<Self> {
        let cols = columns.len();
        let mut m = Self::zeros(ring, rows, cols);
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                if x.ring() != ring {
                    return Err(Error::RingMismatch { left: ring.base(), right: x.ring().base() });
                }
                m.data[i * cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> LambdaRing {
        self.ring
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LocalizedScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: LocalizedScalar) {
        assert!(x.ring() == self.ring, "entry ring differs from matrix ring");
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[LocalizedScalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<LocalizedScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[LocalizedScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        LambdaMatrix::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &LambdaMatrix) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring.base(), right: other.ring.base() });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc += a.as_rational() * b.as_rational();
                }
                out.push(LocalizedScalar::from_rational_unchecked(self.ring, acc));
            }
        }
        Ok(LambdaMatrix { rows: self.rows, cols: other.cols, ring: self.ring, data: out })
    }

    pub fn mul_vec(&self, v: &[LocalizedScalar]) -> Result<Vec<LocalizedScalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        if let Some(bad) = v.iter().find(|x| x.ring() != self.ring) {
            return Err(Error::RingMismatch { left: self.ring.base(), right: bad.ring().base() });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a.as_rational() * b.as_rational();
                    }
                }
                LocalizedScalar::from_rational_unchecked(self.ring, acc)
            })
            .collect())
    }

    pub fn add(&self, other: &LambdaMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(LambdaMatrix { rows: self.rows, cols: self.cols, ring: self.ring, data })
    }

    pub fn sub(&self, other: &LambdaMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.try_sub(b)).collect::<Result<_>>()?;
        Ok(LambdaMatrix { rows: self.rows, cols: self.cols, ring: self.ring, data })
    }

    pub fn scale(&self, c: &LocalizedScalar) -> Result<Self> {
        let data = self.data.iter().map(|a| a.try_mul(c)).collect::<Result<_>>()?;
        Ok(LambdaMatrix { rows: self.rows, cols: self.cols, ring: self.ring, data })
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let x = self.get(i, j);
                if i == j { x.is_one() } else { x.is_zero() }
            }))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LocalizedScalar::is_zero)
    }

    /// Selects a rectangular block.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        LambdaMatrix::from_fn(self.ring, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Returns `(B, D)` with integer `B` and positive `D` such that `self = B / D`.
    pub fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let mut d = BigInt::one();
        for x in &self.data {
            if !x.denominator().is_one() {
                d = d.lcm(x.denominator());
            }
        }
        let b = self
            .data
            .iter()
            .map(|x| {
                if d.is_one() {
                    x.numerator().clone()
                } else {
                    x.numerator() * (&d / x.denominator())
                }
            })
            .collect();
        (b, d)
    }

    /// Exact determinant by fraction-free elimination on the cleared matrix.
    pub fn det(&self) -> Result<LocalizedScalar> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let (b, d) = self.integer_form();
        let db = bareiss_det(n, b);
        let value = BigRational::new(db, num_traits::pow(d, n));
        Ok(LocalizedScalar::from_rational_unchecked(self.ring, value))
    }

    /// Rank over `Q`.
    pub fn rank(&self) -> usize {
        let (b, _) = self.integer_form();
        bareiss_rank(self.rows, self.cols, b)
    }

    /// Inverse over `Λ`, which exists iff the determinant is a unit.
    ///
    /// Uses the adjugate up to dimension 4 and fraction-free Gauss-Jordan
    /// elimination above that.
    pub fn try_invert(&self) -> Result<Self> {
        let det = self.det()?;
        if !det.is_unit() {
            return Err(Error::NotInvertible { witness: det });
        }
        let n = self.rows;
        let (b, d) = self.integer_form();
        // self = B / D, so self^-1 = D * adj(B) / det(B)
        let (adj, det_b) = if n <= 4 { adjugate(n, &b) } else { bareiss_gauss_jordan(n, b) };
        let data = adj
            .into_iter()
            .map(|a| LocalizedScalar::from_rational_unchecked(self.ring, BigRational::new(a * &d, det_b.clone())))
            .collect();
        Ok(LambdaMatrix { rows: n, cols: n, ring: self.ring, data })
    }

    /// Solves `self * X = rhs` for `X`, where the columns of `self` are
    /// linearly independent. Fails if the system is inconsistent or the
    /// solution leaves `Λ`.
    pub fn solve_columns(&self, rhs: &LambdaMatrix) -> Result<Self> {
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: rhs.rows });
        }
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let width = k + m;
        let mut a: Vec<BigRational> = Vec::with_capacity(n * width);
        for i in 0..n {
            a.extend(self.row(i).iter().map(|x| x.as_rational().clone()));
            a.extend(rhs.row(i).iter().map(|x| x.as_rational().clone()));
        }
        let mut pivot_rows = Vec::with_capacity(k);
        let mut r = 0;
        for c in 0..k {
            let Some(p) = (r..n).find(|&i| !a[i * width + c].is_zero()) else {
                return Err(Error::RankDeficient { achieved: r, needed: k });
            };
            if p != r {
                for j in 0..width {
                    a.swap(p * width + j, r * width + j);
                }
            }
            let inv = a[r * width + c].recip();
            for j in 0..width {
                let v = &a[r * width + j] * &inv;
                a[r * width + j] = v;
            }
            for i in 0..n {
                if i == r || a[i * width + c].is_zero() {
                    continue;
                }
                let f = a[i * width + c].clone();
                for j in 0..width {
                    let v = &a[r * width + j] * &f;
                    a[i * width + j] -= v;
                }
            }
            pivot_rows.push(r);
            r += 1;
        }
        // rows past the pivots must be zero on the right-hand side
        for i in k..n {
            if (k..width).any(|j| !a[i * width + j].is_zero()) {
                return Err(Error::Internal("inconsistent linear system".into()));
            }
        }
        let mut data = Vec::with_capacity(k * m);
        for &pr in &pivot_rows {
            for j in 0..m {
                data.push(LocalizedScalar::from_rational(self.ring, a[pr * width + k + j].clone())?);
            }
        }
        Ok(LambdaMatrix { rows: k, cols: m, ring: self.ring, data })
    }

    /// Moves all entries to a larger ring.
    pub fn in_ring(&self, ring: LambdaRing) -> Result<Self> {
        let data = self.data.iter().map(|x| x.in_ring(ring)).collect::<Result<_>>()?;
        Ok(LambdaMatrix { rows: self.rows, cols: self.cols, ring, data })
    }
}

impl fmt::Display for LambdaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Bareiss determinant of an `n x n` integer matrix, pivoting on the first
/// nonzero entry of each column.
pub(crate) fn bareiss_det(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            for j in 0..n {
                a.swap(p * n + j, k * n + j);
            }
            sign = !sign;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let aik = a[i * n + k].clone();
            for j in k + 1..n {
                let mut v = &pivot * &a[i * n + j];
                if !aik.is_zero() {
                    let akj = &a[k * n + j];
                    if !akj.is_zero() {
                        v -= &aik * akj;
                    }
                }
                if !prev.is_one() {
                    v /= &prev;
                }
                a[i * n + j] = v;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if sign { -d } else { d }
}

fn bareiss_rank(rows: usize, cols: usize, mut a: Vec<BigInt>) -> usize {
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let pivot = a[r * cols + c].clone();
        for i in r + 1..rows {
            let aic = a[i * cols + c].clone();
            for j in c + 1..cols {
                let v = (&pivot * &a[i * cols + j] - &aic * &a[r * cols + j]) / &prev;
                a[i * cols + j] = v;
            }
            a[i * cols + c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Returns `(adj(B), det(B))` via cofactors.
fn adjugate(n: usize, b: &[BigInt]) -> (Vec<BigInt>, BigInt) {
    let det = bareiss_det(n, b.to_vec());
    if n == 1 {
        return (vec![BigInt::one()], det);
    }
    let mut adj = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut minor = Vec::with_capacity((n - 1) * (n - 1));
            for r in (0..n).filter(|&r| r != i) {
                for c in (0..n).filter(|&c| c != j) {
                    minor.push(b[r * n + c].clone());
                }
            }
            let m = bareiss_det(n - 1, minor);
            // adj(B)[j][i] = (-1)^(i+j) M_ij
            adj[j * n + i] = if (i + j) % 2 == 0 { m } else { -m };
        }
    }
    (adj, det)
}

/// Fraction-free Gauss-Jordan on `[B | I]`. Returns `(X, d)` with
/// `B^-1 = X / d`. `B` must be nonsingular.
fn bareiss_gauss_jordan(n: usize, b: Vec<BigInt>) -> (Vec<BigInt>, BigInt) {
    let w = 2 * n;
    let mut a = vec![BigInt::zero(); n * w];
    for i in 0..n {
        for j in 0..n {
            a[i * w + j] = b[i * n + j].clone();
        }
        a[i * w + n + i] = BigInt::one();
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i * w + k].is_zero()).expect("singular matrix in Gauss-Jordan");
        if p != k {
            for j in 0..w {
                a.swap(p * w + j, k * w + j);
            }
        }
        let pivot = a[k * w + k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let aik = a[i * w + k].clone();
            for j in 0..w {
                if j == k {
                    continue;
                }
                let mut v = &pivot * &a[i * w + j];
                if !aik.is_zero() {
                    let akj = &a[k * w + j];
                    if !akj.is_zero() {
                        v -= &aik * akj;
                    }
                }
                if !prev.is_one() {
                    debug_assert!(v.is_multiple_of(&prev));
                    v /= &prev;
                }
                a[i * w + j] = v;
            }
            a[i * w + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let d = a[(n - 1) * w + (n - 1)].clone();
    let mut x = Vec::with_capacity(n * n);
    for i in 0..n {
        debug_assert_eq!(a[i * w + i], d);
        for j in 0..n {
            x.push(a[i * w + n + j].clone());
        }
    }
    let (x, d) = if d.is_negative() { (x.into_iter().map(|v| -v).collect(), -d) } else { (x, d) };
    (x, d)
}
