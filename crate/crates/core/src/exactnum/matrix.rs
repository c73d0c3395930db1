use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{DyadicScalar, Rational};
use crate::error::{Error, Result};

/// Exact ring element usable as a matrix entry.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl Scalar for Rational {}
impl Scalar for DyadicScalar {}

/// Dense row-major matrix. Values are immutable: every operation returns a
/// new matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T = Rational> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::MalformedMatrix(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::MalformedMatrix(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::MalformedMatrix("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn row_vector(entries: Vec<T>) -> Result<Self> {
        Self::new(1, entries.len(), entries)
    }

    pub fn column_vector(entries: Vec<T>) -> Result<Self> {
        Self::new(entries.len(), 1, entries)
    }

    /// Standard basis column vector `e_i` (0-based) of length `n`.
    pub fn basis_column(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n, 1);
        m.data[i] = T::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc + a.clone() * other.get(k, j).clone();
                }
                data.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    /// Kronecker product. Entry `(i·p + k, j·q + l)` is `a[i][j]·b[k][l]`
    /// where `b` is `p × q`, i.e. block `(i, j)` is `a[i][j]·b`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = other.shape();
        let rows = self.rows * p;
        let cols = self.cols * q;
        let mut data = vec![T::zero(); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..p {
                    for l in 0..q {
                        data[(i * p + k) * cols + j * q + l] = a.clone() * other.get(k, l).clone();
                    }
                }
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn trace(&self) -> Result<T> {
        self.require_square("trace")?;
        Ok((0..self.rows).fold(T::zero(), |acc, i| acc + self.get(i, i).clone()))
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        self.require_square("pow")?;
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mat_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mat_mul(&base)?;
            }
        }
        Ok(result)
    }

    pub(crate) fn require_square(&self, op: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

/// Sum of a non-empty list of equally shaped matrices.
pub fn sum_matrices<T: Scalar>(mats: &[Matrix<T>]) -> Result<Matrix<T>> {
    let (first, rest) = mats
        .split_first()
        .ok_or_else(|| Error::MalformedMatrix("sum of an empty list".into()))?;
    rest.iter().try_fold(first.clone(), |acc, m| acc.add(m))
}

impl Matrix<Rational> {
    /// Parse from row-major nested string fractions.
    pub fn from_strs(rows: &[&[&str]]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<Rational>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    /// Maximum absolute column sum (the induced 1-norm).
    pub fn norm1(&self) -> Rational {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| self.get(i, j).abs())
                    .sum::<Rational>()
            })
            .max()
            .expect("non-empty matrix")
    }

    /// Exact rank by Gaussian elimination over the rationals.
    pub fn rank(&self) -> usize {
        let mut m = self.to_rows();
        let (rows, cols) = self.shape();
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = m[rank][col].recip();
            for r in 0..rows {
                if r != rank && !m[r][col].is_zero() {
                    let factor = &m[r][col] * &inv;
                    for c in col..cols {
                        let delta = &factor * &m[rank][c];
                        m[r][c] -= &delta;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.cols)
            .map(|r| r.iter().map(Rational::to_f64).collect())
            .collect()
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.cols).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}{}", self.rows, self.cols, self)
    }
}

/// Serializes as row-major nested arrays.
impl<T: Serialize> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[T]> = self.data.chunks(self.cols).collect();
        rows.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]]) -> Matrix {
        Matrix::from_strs(rows).unwrap()
    }

    fn a0() -> Matrix {
        m(&[&["1", "-1/2"], &["0", "-1/2"]])
    }

    fn a1() -> Matrix {
        m(&[&["-1/2", "0"], &["-1/2", "1"]])
    }

    #[test]
    fn products_of_eta_digit_matrices() {
        assert_eq!(a0().mat_mul(&Matrix::identity(2)).unwrap(), a0());
        assert_eq!(
            a0().mat_mul(&a1()).unwrap(),
            m(&[&["-1/4", "-1/2"], &["1/4", "-1/2"]])
        );
        assert_eq!(
            a1().mat_mul(&a1()).unwrap(),
            m(&[&["1/4", "0"], &["-1/4", "1"]])
        );
    }

    #[test]
    fn mismatch_names_both_shapes() {
        let row = Matrix::row_vector(vec![Rational::from(1), Rational::from(2)]).unwrap();
        let err = row.mat_mul(&row).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(1, 2)"), "{msg}");
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                left: (1, 2),
                right: (1, 2),
                ..
            }
        ));
    }

    #[test]
    fn kron_examples() {
        let one = Matrix::identity(1);
        assert_eq!(one.kron(&a0()), a0());
        let d = m(&[&["1", "0"], &["0", "-1"]]);
        let k = d.kron(&a0());
        assert_eq!(
            k,
            m(&[
                &["1", "-1/2", "0", "0"],
                &["0", "-1/2", "0", "0"],
                &["0", "0", "-1", "1/2"],
                &["0", "0", "0", "1/2"],
            ])
        );
        let e1 = Matrix::row_vector(vec![Rational::from(1), Rational::from(0)]).unwrap();
        assert_eq!(
            e1.kron(&e1),
            Matrix::row_vector(vec![1.into(), 0.into(), 0.into(), 0.into()]).unwrap()
        );
    }

    #[test]
    fn rank_and_norm() {
        let s = m(&[&["1/2", "-1/2"], &["-1/2", "1/2"]]);
        assert_eq!(s.rank(), 1);
        assert_eq!(Matrix::<Rational>::identity(3).rank(), 3);
        assert_eq!(a0().norm1(), Rational::from(1));
        assert_eq!(m(&[&["0", "0"], &["0", "0"]]).rank(), 0);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let p = a0().pow(5).unwrap();
        let mut q = Matrix::identity(2);
        for _ in 0..5 {
            q = q.mat_mul(&a0()).unwrap();
        }
        assert_eq!(p, q);
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(Matrix::<Rational>::new(2, 2, vec![Rational::from(1)]).is_err());
        assert!(
            Matrix::<Rational>::from_rows(vec![vec![1.into()], vec![1.into(), 2.into()]]).is_err()
        );
        assert!(Matrix::<Rational>::new(0, 2, vec![]).is_err());
    }
}
