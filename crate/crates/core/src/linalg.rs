//! Small dense complex linear algebra.
//!
//! Matrices here are tiny (tens of rows), so everything is a straightforward
//! column-major `Vec<Complex64>` with no blocking.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Column-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix whose columns are the given equal-length vectors.
    pub fn from_columns(rows: usize, columns: &[&[C64]]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            if c.len() != rows {
                return Err(Error::Dimension {
                    expected: rows,
                    found: c.len(),
                });
            }
            data.extend_from_slice(c);
        }
        Ok(Self {
            rows,
            cols: columns.len(),
            data,
        })
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn column(&self, j: usize) -> &[C64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn column_mut(&mut self, j: usize) -> &mut [C64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (k, &b) in rhs.column(j).iter().enumerate() {
                if b == ZERO {
                    continue;
                }
                for (d, &a) in dst.iter_mut().zip(self.column(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if self.cols != x.len() {
            return Err(Error::Dimension {
                expected: self.cols,
                found: x.len(),
            });
        }
        let mut out = vec![ZERO; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.column(j)) {
                *o += a * xj;
            }
        }
        Ok(out)
    }

    /// `self^H x` without forming the adjoint.
    pub fn adjoint_mul_vec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if self.rows != x.len() {
            return Err(Error::Dimension {
                expected: self.rows,
                found: x.len(),
            });
        }
        Ok((0..self.cols).map(|j| dot_h(self.column(j), x)).collect())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

/// Hermitian inner product `a^H b`.
#[inline]
pub fn dot_h(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[inline]
pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

#[inline]
pub fn norm(a: &[C64]) -> f64 {
    libm::sqrt(norm_sqr(a))
}

/// Right-singular structure of a matrix `A` (rows × cols).
///
/// `right_vectors` is a full cols × cols unitary matrix; column `j` pairs with
/// `singular_values[j]`, sorted non-increasing. When cols > rows the trailing
/// cols − rows values are (numerically) zero and their columns span the null
/// space of `A`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub right_vectors: CMatrix,
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD.
///
/// Rotates column pairs of `A` until they are mutually orthogonal while
/// accumulating the rotations in `V`, so `A V` has orthogonal columns whose
/// norms are the singular values. Works for any shape, including wide
/// matrices, and always yields the full `V`.
pub fn svd(a: &CMatrix) -> Svd {
    let n = a.ncols();
    let mut work = a.clone();
    let mut v = CMatrix::identity(n);
    let tol = f64::EPSILON;
    // Columns already at round-off level relative to the whole matrix are
    // left alone; rotating them only amplifies subnormal noise.
    let negligible = {
        let e = f64::EPSILON * norm(&a.data);
        e * e
    };

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sqr(work.column(p));
                let beta = norm_sqr(work.column(q));
                let gamma = dot_h(work.column(p), work.column(q));
                let g = gamma.norm();
                if alpha.min(beta) <= negligible || g <= tol * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;

                // Rephase column q so the pair inner product is real, then
                // apply the real Jacobi rotation that zeroes it.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate_pair(&mut work, p, q, phase.conj(), c, s);
                rotate_pair(&mut v, p, q, phase.conj(), c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, f64)> = (0..n).map(|j| (j, norm(work.column(j)))).collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));
    let right_vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j].0)]);
    Svd {
        singular_values: order.into_iter().map(|(_, s)| s).collect(),
        right_vectors,
    }
}

fn rotate_pair(m: &mut CMatrix, p: usize, q: usize, rephase: C64, c: f64, s: f64) {
    let rows = m.nrows();
    for i in 0..rows {
        let xp = m[(i, p)];
        let xq = m[(i, q)] * rephase;
        m[(i, p)] = xp * c - xq * s;
        m[(i, q)] = xp * s + xq * c;
    }
}

/// Lower-triangular Cholesky factor `L` with `A = L L^H`.
///
/// Fails with [`Error::IllConditioned`] when a pivot is not safely positive
/// relative to the trace.
pub fn cholesky(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            found: a.ncols(),
        });
    }
    let scale = a.trace().re.abs().max(f64::MIN_POSITIVE);
    let floor = scale * 1e-14;
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d.is_nan() || d <= floor {
            return Err(Error::IllConditioned);
        }
        let djj = libm::sqrt(d);
        l[(j, j)] = C64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solves `L L^H x = b` given the Cholesky factor.
pub fn cholesky_solve(l: &CMatrix, b: &[C64]) -> Vec<C64> {
    let n = l.nrows();
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[(k, i)].conj() * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn svd_of_diagonal_sorts_values() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 0)] = c(1.0, 0.0);
        a[(1, 1)] = c(0.0, 3.0);
        a[(2, 2)] = c(-2.0, 0.0);
        let s = svd(&a);
        assert!((s.singular_values[0] - 3.0).abs() < 1e-14);
        assert!((s.singular_values[1] - 2.0).abs() < 1e-14);
        assert!((s.singular_values[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wide_matrix_null_space() {
        // 1×2 row [1, 1]: null space spanned by [1, -1]/sqrt(2).
        let a = CMatrix::from_fn(1, 2, |_, _| ONE);
        let s = svd(&a);
        assert!((s.singular_values[0] - 2f64.sqrt()).abs() < 1e-14);
        assert!(s.singular_values[1].abs() < 1e-14);
        let f = s.right_vectors.column(1);
        assert!((f[0] + f[1]).norm() < 1e-14);
        assert!((norm(f) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cholesky_solves_hermitian_system() {
        let a = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(4.0, 0.0),
            (0, 1) => c(1.0, -1.0),
            (1, 0) => c(1.0, 1.0),
            _ => c(3.0, 0.0),
        });
        let l = cholesky(&a).unwrap();
        let b = [c(1.0, 2.0), c(-1.0, 0.5)];
        let x = cholesky_solve(&l, &b);
        let back = a.mul_vec(&x).unwrap();
        for (u, v) in back.iter().zip(&b) {
            assert!((u - v).norm() < 1e-13);
        }
    }

    #[test]
    fn cholesky_rejects_singular() {
        let a = CMatrix::from_fn(2, 2, |_, _| ONE);
        assert_eq!(cholesky(&a), Err(Error::IllConditioned));
    }
}
