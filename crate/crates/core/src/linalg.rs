//! Dense kernels for the small matrices that show up in linear ODE systems.
//!
//! Everything here is row-major `f64` with no external linear-algebra
//! dependency: the systems of interest have a handful of states and the
//! O(n³) costs are negligible.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Relative pivot threshold below which a matrix is treated as singular.
pub const SINGULAR_PIVOT_RTOL: f64 = 1e-12;

/// Scaling target for the exponential: the argument is halved until its
/// infinity norm is at most this value before the Padé step.
const EXPM_NORM_TARGET: f64 = 0.5;

const PADE_DEGREE: usize = 6;

/// Square matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "matrix entry ({}, {}) is not finite",
                pos / n,
                pos % n
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let n = columns.len();
        let mut m = Self::zeros(n.max(1));
        for (j, col) in columns.iter().enumerate() {
            let col = col.as_ref();
            if col.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: col.len(),
                });
            }
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Self::new(n, m.data)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Self {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(self.n, x.len());
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// `out = self * x`, without allocating.
    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), x);
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn det(&self) -> Result<f64> {
        match Lu::factor(self) {
            Ok(lu) => Ok(lu.det()),
            Err(Error::Singular { .. }) => Ok(0.0),
            Err(e) => Err(e),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = (0..self.n).map(|i| self.row(i)).collect();
        f.debug_struct("Matrix").field("rows", &rows).finish()
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `e_i` in dimension `n`.
pub fn basis(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn factor(m: &Matrix) -> Result<Self> {
        let n = m.dim();
        let scale = m.max_abs();
        let threshold = SINGULAR_PIVOT_RTOL * scale;
        let mut lu = m.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;

        for col in 0..n {
            let (p, pivot_abs) = (col..n)
                .map(|r| (r, lu[r * n + col].abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot_abs > threshold) || scale == 0.0 {
                return Err(Error::Singular {
                    column: col,
                    pivot: pivot_abs,
                });
            }
            if p != col {
                for j in 0..n {
                    lu.swap(p * n + j, col * n + j);
                }
                perm.swap(p, col);
                sign = -sign;
            }
            let pivot = lu[col * n + col];
            for r in col + 1..n {
                let factor = lu[r * n + col] / pivot;
                lu[r * n + col] = factor;
                if factor != 0.0 {
                    for j in col + 1..n {
                        lu[r * n + j] -= factor * lu[col * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm, sign })
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: rhs.len(),
            });
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        Ok(x)
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Matrix> {
        let cols = b
            .columns()
            .iter()
            .map(|c| self.solve(c))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(&cols)
    }

    pub fn det(&self) -> f64 {
        (0..self.n).fold(self.sign, |d, i| d * self.lu[i * self.n + i])
    }
}

pub fn lu_solve(m: &Matrix, rhs: &[f64]) -> Result<Vec<f64>> {
    Lu::factor(m)?.solve(rhs)
}

/// `e^{A t}` by scaling and squaring with a diagonal Padé approximant.
pub fn mat_exp(a: &Matrix, t: f64) -> Result<Matrix> {
    let n = a.dim();
    if !t.is_finite() {
        return Err(Error::invalid(format!("time {t} is not finite")));
    }
    if t == 0.0 {
        return Ok(Matrix::identity(n));
    }
    let at = a.scaled(t);
    if !at.is_finite() {
        return Err(Error::NumericRange(format!("A*t overflows at t = {t}")));
    }
    let norm = at.norm_inf();
    let squarings = if norm > EXPM_NORM_TARGET {
        (norm / EXPM_NORM_TARGET).log2().ceil() as i32
    } else {
        0
    };
    let reduced = at.scaled((-squarings as f64).exp2());

    let mut result = pade(&reduced)?;
    for _ in 0..squarings {
        result = result.matmul(&result);
        if !result.is_finite() {
            return Err(Error::NumericRange(format!(
                "matrix exponential overflows at t = {t}"
            )));
        }
    }
    Ok(result)
}

/// `[N(X)] / [N(-X)]` with the (6,6) Padé numerator.
fn pade(x: &Matrix) -> Result<Matrix> {
    let n = x.dim();
    let coeffs = pade_coefficients();
    let mut num = Matrix::identity(n);
    let mut den = Matrix::identity(n);
    let mut power = Matrix::identity(n);
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        power = power.matmul(x);
        let term = power.scaled(*c);
        num = num.add(&term);
        den = if k % 2 == 0 {
            den.add(&term)
        } else {
            den.sub(&term)
        };
    }
    Lu::factor(&den)?.solve_matrix(&num)
}

fn pade_coefficients() -> [f64; PADE_DEGREE + 1] {
    // c_k = (2m - k)! m! / ((2m)! k! (m - k)!)
    let m = PADE_DEGREE as f64;
    let mut c = [1.0; PADE_DEGREE + 1];
    for k in 0..PADE_DEGREE {
        let kf = k as f64;
        c[k + 1] = c[k] * (m - kf) / ((kf + 1.0) * (2.0 * m - kf));
    }
    c
}

/// Columns of `e^{A t}`: the homogeneous solutions started from each basis vector.
pub fn fundamental_columns(a: &Matrix, t: f64) -> Result<Vec<Vec<f64>>> {
    Ok(mat_exp(a, t)?.columns())
}
