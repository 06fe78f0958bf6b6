//! Dense row-major matrices over an arbitrary scalar.
//!
//! The same container backs the exact rational layer (`DenseMatrix<BigRational>`)
//! and the floating point layer (`DenseMatrix<f64>`). Indices are 0-based here;
//! graph vertices are 1-based and translated at the call sites.

use std::fmt;
use std::ops::{Index, IndexMut, Neg};

use num::{BigRational, Num, ToPrimitive};

use crate::error::{Error, Result};

/// Scalar types usable in [`DenseMatrix`] arithmetic.
pub trait Scalar: Num + Clone + Neg<Output = Self> + Send + Sync + fmt::Debug {}

impl<T> Scalar for T where T: Num + Clone + Neg<Output = T> + Send + Sync + fmt::Debug {}

#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Column vector from a slice.
    pub fn column(v: &[T]) -> Self {
        DenseMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        DenseMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    let slot = &mut out.data[i * other.cols + j];
                    *slot = slot.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(DenseMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|a| a.clone() * s.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// `A + s I`.
    pub fn shifted(&self, s: &T) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = m[(i, i)].clone() + s.clone();
        }
        m
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Simultaneous row/column relabeling: entry `(i, j)` moves to
    /// `(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if !self.is_square() || perm.len() != self.rows {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        let mut m = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(perm[i], perm[j])] = self[(i, j)].clone();
            }
        }
        Ok(m)
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for DenseMatrix<T> {
    /// Text format: `rows cols` header followed by one line per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> =
                self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl DenseMatrix<f64> {
    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Averages `A` with its transpose in place.
    pub fn symmetrize(&mut self) {
        for i in 0..self.rows {
            for j in 0..i {
                let v = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = v;
                self[(j, i)] = v;
            }
        }
    }
}

/// Characteristic polynomial `det(tI - A)` by the division-free Berkowitz
/// recurrence. Coefficients lowest degree first; length `n + 1`.
pub fn charpoly<T: Scalar>(a: &DenseMatrix<T>) -> Result<Vec<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("characteristic polynomial of a non-square matrix".into()));
    }
    let n = a.rows();
    // Highest degree first while building.
    let mut p = vec![T::one()];
    for k in (0..n).rev() {
        let s = n - k;
        let rest: Vec<usize> = (k + 1..n).collect();
        let r: Vec<T> = rest.iter().map(|&j| a[(k, j)].clone()).collect();
        let mut v: Vec<T> = rest.iter().map(|&i| a[(i, k)].clone()).collect();
        let mut t = Vec::with_capacity(s + 1);
        t.push(T::one());
        t.push(-a[(k, k)].clone());
        for _ in 2..=s {
            let dot = r.iter().zip(&v).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
            t.push(-dot);
            v = rest
                .iter()
                .map(|&i| rest.iter().zip(&v).fold(T::zero(), |acc, (&j, y)| acc + a[(i, j)].clone() * y.clone()))
                .collect();
        }
        let next: Vec<T> = (0..=s)
            .map(|i| (0..s.min(i + 1)).fold(T::zero(), |acc, j| acc + t[i - j].clone() * p[j].clone()))
            .collect();
        p = next;
    }
    p.reverse();
    Ok(p)
}

pub type RatMatrix = DenseMatrix<BigRational>;

/// Lossy conversion of an exact matrix to floating point.
pub fn to_f64(m: &RatMatrix) -> DenseMatrix<f64> {
    m.map(|x| x.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_commutator() {
        let a = DenseMatrix::from_rows(vec![vec![1i64, 2], vec![3, 4]]).unwrap();
        let b = DenseMatrix::from_rows(vec![vec![0i64, 1], vec![1, 0]]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.row(0), &[2, 1]);
        let c = a.commutator(&b).unwrap();
        assert_eq!(c.row(0), &[-1, -3]);
        assert_eq!(c.row(1), &[3, 1]);
        assert!(a.mul(&DenseMatrix::<i64>::zeros(3, 1)).is_err());
    }

    #[test]
    fn permutation_relabels_both_sides() {
        let a = DenseMatrix::from_rows(vec![vec![1i64, 2], vec![2, 5]]).unwrap();
        let p = a.permuted(&[1, 0]).unwrap();
        assert_eq!(p.row(0), &[5, 2]);
        assert_eq!(p.row(1), &[2, 1]);
    }

    #[test]
    fn berkowitz_matches_small_cases() {
        let a = DenseMatrix::from_rows(vec![vec![2i64, 1], vec![1, 2]]).unwrap();
        assert_eq!(charpoly(&a).unwrap(), vec![3, -4, 1]);
        let b = DenseMatrix::from_rows(vec![vec![1i64, 2, 0], vec![3, 4, 5], vec![0, 6, 7]]).unwrap();
        // det(tI - B) = t^3 - 12t^2 + 3t + 44 from trace, principal minors and det.
        assert_eq!(charpoly(&b).unwrap(), vec![44, 3, -12, 1]);
        assert_eq!(charpoly(&DenseMatrix::<i64>::zeros(0, 0)).unwrap(), vec![1]);
    }

    #[test]
    fn direct_sum_blocks() {
        let a = DenseMatrix::from_rows(vec![vec![1i64]]).unwrap();
        let b = DenseMatrix::from_rows(vec![vec![2i64, 3], vec![3, 4]]).unwrap();
        let s = a.direct_sum(&b);
        assert_eq!(s.rows(), 3);
        assert_eq!(s[(0, 1)], 0);
        assert_eq!(s[(2, 1)], 3);
    }
}
