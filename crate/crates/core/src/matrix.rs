//! Small dense square matrices over exact rings.
//!
//! Group data is kept exact: [`SquareMatrix<BigRational>`] for general
//! isometries and [`IntMatrix`] (checked `i64`) for the hot loops of the orbit
//! engine. Floating-point geometry goes through `nalgebra` instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Row-major `dim × dim` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

/// Integer matrix used by the orbit engine; products are overflow-checked.
pub type IntMatrix = SquareMatrix<i64>;

impl<T> SquareMatrix<T> {
    /// Builds a matrix from row-major data. Panics if `data.len() != dim²`.
    pub fn from_vec(dim: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data must have dim² entries");
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.data[row * self.dim + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.dim)
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> SquareMatrix<T> {
    /// Builds a matrix from a list of rows. Returns `None` unless the rows
    /// form a non-empty square array.
    pub fn from_rows(rows: &[Vec<T>]) -> Option<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Self {
            dim,
            data: rows.iter().flat_map(|r| r.iter().cloned()).collect(),
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let data = (0..n * n)
            .map(|k| self.data[(k % n) * n + k / n].clone())
            .collect();
        Self { dim: n, data }
    }
}

impl<T> SquareMatrix<T>
where
    T: Clone + Zero + One,
{
    pub fn identity(dim: usize) -> Self {
        let data = (0..dim * dim)
            .map(|k| if k / dim == k % dim { T::one() } else { T::zero() })
            .collect();
        Self { dim, data }
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let dim = diag.len();
        let data = (0..dim * dim)
            .map(|k| {
                if k / dim == k % dim {
                    diag[k / dim].clone()
                } else {
                    T::zero()
                }
            })
            .collect();
        Self { dim, data }
    }

    pub fn is_identity(&self) -> bool
    where
        T: PartialEq,
    {
        *self == Self::identity(self.dim)
    }
}

impl<T> SquareMatrix<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc + self.data[i * n + k].clone() * rhs.data[k * n + j].clone();
                }
                data.push(acc);
            }
        }
        Self { dim: n, data }
    }

    /// Matrix–column-vector product.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

impl<T> SquareMatrix<T>
where
    T: Clone + Zero + Neg<Output = T>,
{
    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }
}

impl IntMatrix {
    /// Overflow-checked product.
    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc += self.data[i * n + k] as i128 * rhs.data[k * n + j] as i128;
                }
                data.push(i64::try_from(acc).ok()?);
            }
        }
        Some(Self { dim: n, data })
    }

    /// Overflow-checked matrix–vector product.
    pub fn checked_apply(&self, v: &[i64]) -> Option<Vec<i64>> {
        self.rows()
            .map(|row| {
                let acc: i128 = row.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum();
                i64::try_from(acc).ok()
            })
            .collect()
    }

    pub fn to_rational(&self) -> SquareMatrix<BigRational> {
        self.map(|&x| BigRational::from_integer(BigInt::from(x)))
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.map(|&x| x as f64).data)
    }
}

impl SquareMatrix<BigRational> {
    /// Returns the integer matrix if every entry is integral and fits `i64`.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let data = self
            .data
            .iter()
            .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix { dim: self.dim, data })
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let data: Vec<f64> = self
            .data
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect();
        DMatrix::from_row_slice(self.dim, self.dim, &data)
    }

    /// Exact determinant by fraction-carrying Gaussian elimination.
    pub fn determinant(&self) -> BigRational {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= p.clone();
            for r in col + 1..n {
                let factor = a[r * n + col].clone() / p.clone();
                if factor.is_zero() {
                    continue;
                }
                for k in col..n {
                    let delta = factor.clone() * a[col * n + k].clone();
                    a[r * n + k] -= delta;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                    inv.swap(pivot * n + k, col * n + k);
                }
            }
            let p = a[col * n + col].clone();
            for k in 0..n {
                a[col * n + k] = a[col * n + k].clone() / p.clone();
                inv[col * n + k] = inv[col * n + k].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for k in 0..n {
                    let da = factor.clone() * a[col * n + k].clone();
                    let di = factor.clone() * inv[col * n + k].clone();
                    a[r * n + k] -= da;
                    inv[r * n + k] -= di;
                }
            }
        }
        Some(Self { dim: n, data: inv })
    }
}

impl<T: fmt::Display> fmt::Display for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.dim).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

impl<T> Sub for &SquareMatrix<T>
where
    T: Clone + Sub<Output = T>,
{
    type Output = SquareMatrix<T>;

    fn sub(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}
