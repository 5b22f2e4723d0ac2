//! Small dense complex matrices (dimension 1 through 4) stored inline.
//!
//! Every field value in the crate is one of these, so the type is `Copy`
//! and never allocates.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 4;

/// Dense `m × m` complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    e: [Complex<T>; MAX_DIM * MAX_DIM],
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "matrix dimension {dim} out of range");
        Self { dim, e: [Complex::zero(); MAX_DIM * MAX_DIM] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out[(i, i)] = Complex::one();
        }
        out
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a square.
    pub fn from_row_major(entries: &[Complex<T>]) -> Result<Self> {
        let dim = (1..=MAX_DIM)
            .find(|d| d * d == entries.len())
            .ok_or(Error::UnsupportedDimension(entries.len()))?;
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] = entries[i * dim + j];
            }
        }
        Ok(out)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] = f(i, j);
            }
        }
        out
    }

    pub fn diagonal(diag: &[Complex<T>]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            out[(i, i)] = *d;
        }
        out
    }

    /// `1 × 1` matrix holding a single complex number.
    pub fn scalar(z: Complex<T>) -> Self {
        Self::diagonal(&[z])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row_major(&self) -> Vec<Complex<T>> {
        let m = self.dim;
        (0..m * m).map(|k| self[(k / m, k % m)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        let mut out = *self;
        for z in out.e.iter_mut().take(MAX_DIM * MAX_DIM) {
            *z = f(*z);
        }
        out
    }

    /// Commutator `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Frobenius inner product `Re tr(A B†)`.
    pub fn re_inner(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim, other.dim);
        self.e
            .iter()
            .zip(other.e.iter())
            .fold(T::zero(), |acc, (a, b)| acc + a.re * b.re + a.im * b.im)
    }

    pub fn frobenius_norm(&self) -> T {
        self.re_inner(self).sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.e.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Largest row sum of absolute entries (induced ∞-norm).
    pub fn norm_inf(&self) -> T {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(T::zero(), |acc, j| acc + self[(i, j)].norm()))
            .fold(T::zero(), T::max)
    }

    /// Largest entry of `|A + A†|`.
    pub fn anti_hermitian_defect(&self) -> T {
        (*self + self.adjoint()).max_abs()
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_defect(&self) -> T {
        (self.adjoint() * *self - Self::identity(self.dim)).max_abs()
    }

    /// Anti-Hermitian part `(A − A†)/2`.
    pub fn anti_hermitian_part(&self) -> Self {
        (*self - self.adjoint()).scale(T::lit(0.5))
    }

    pub fn is_finite(&self) -> bool {
        self.e.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Inverse by Gaussian elimination with partial pivoting; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let m = self.dim;
        let mut a = *self;
        let mut inv = Self::identity(m);
        for col in 0..m {
            let pivot = (col..m).max_by(|&r, &s| {
                a[(r, col)]
                    .norm()
                    .partial_cmp(&a[(s, col)].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if a[(pivot, col)].norm() == T::zero() {
                return None;
            }
            if pivot != col {
                for j in 0..m {
                    let (p, c) = (a[(pivot, j)], a[(col, j)]);
                    a[(pivot, j)] = c;
                    a[(col, j)] = p;
                    let (p, c) = (inv[(pivot, j)], inv[(col, j)]);
                    inv[(pivot, j)] = c;
                    inv[(col, j)] = p;
                }
            }
            let d = a[(col, col)].inv();
            for j in 0..m {
                a[(col, j)] = a[(col, j)] * d;
                inv[(col, j)] = inv[(col, j)] * d;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == Complex::zero() {
                    continue;
                }
                for j in 0..m {
                    let ac = a[(col, j)];
                    let ic = inv[(col, j)];
                    a[(r, j)] = a[(r, j)] - f * ac;
                    inv[(r, j)] = inv[(r, j)] - f * ic;
                }
            }
        }
        Some(inv)
    }

    /// Matrix exponential by scaling and squaring around a diagonal [6/6] Padé
    /// approximant.
    pub fn exp(&self) -> Self {
        const PADE_ORDER: usize = 6;
        let m = self.dim;
        let norm = self.norm_inf();
        let half = T::lit(0.5);
        let mut squarings = 0u32;
        if norm > half {
            squarings = (norm / half).log2().ceil().to_u32().unwrap_or(0);
        }
        let a = self.scale(T::lit(2f64.powi(-(squarings as i32))));

        let mut c = T::one();
        let mut power = Self::identity(m);
        let mut numer = Self::identity(m);
        let mut denom = Self::identity(m);
        let p = PADE_ORDER as f64;
        for k in 1..=PADE_ORDER {
            let kf = k as f64;
            c = c * T::lit((p - kf + 1.0) / (kf * (2.0 * p - kf + 1.0)));
            power = power * a;
            let term = power.scale(c);
            numer += term;
            if k % 2 == 0 {
                denom += term;
            } else {
                denom -= term;
            }
        }
        let mut result = denom.inverse().expect("Padé denominator is nonsingular for ‖A‖ ≤ 1/2") * numer;
        for _ in 0..squarings {
            result = result * result;
        }
        result
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.dim && j < self.dim);
        &self.e[i * MAX_DIM + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.e[i * MAX_DIM + j]
    }
}

impl<T: Real> Add for CMatrix<T> {
    type Output = Self;
    #[inline]
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<T: Real> AddAssign for CMatrix<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.e.iter_mut().zip(rhs.e.iter()) {
            *a = *a + *b;
        }
    }
}

impl<T: Real> Sub for CMatrix<T> {
    type Output = Self;
    #[inline]
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<T: Real> SubAssign for CMatrix<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.e.iter_mut().zip(rhs.e.iter()) {
            *a = *a - *b;
        }
    }
}

impl<T: Real> Neg for CMatrix<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl<T: Real> Mul for CMatrix<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        let m = self.dim;
        let mut out = Self::zeros(m);
        for i in 0..m {
            for k in 0..m {
                let a = self[(i, k)];
                if a == Complex::zero() {
                    continue;
                }
                for j in 0..m {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: fmt::Debug> fmt::Debug for CMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<&Complex<T>>> =
            (0..self.dim).map(|i| (0..self.dim).map(|j| &self[(i, j)]).collect()).collect();
        f.debug_struct("CMatrix").field("dim", &self.dim).field("rows", &rows).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn inverse_roundtrip() {
        let a = CMatrix::from_row_major(&[c(1.0, 2.0), c(0.5, -1.0), c(-3.0, 0.0), c(2.0, 1.0)]).unwrap();
        let inv = a.inverse().unwrap();
        assert!((a * inv - CMatrix::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = CMatrix::from_row_major(&[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!(a.inverse().is_none());
    }

    #[test]
    fn exp_of_diagonal_matches_scalar_exp() {
        let a = CMatrix::diagonal(&[c(0.3, 1.7), c(-2.5, 0.2), c(0.0, -9.0)]);
        let e = a.exp();
        for i in 0..3 {
            assert!((e[(i, i)] - a[(i, i)].exp()).norm() < 1e-13);
        }
    }

    #[test]
    fn exp_of_nilpotent_is_truncated_series() {
        let n = CMatrix::from_row_major(&[c(0.0, 0.0), c(5.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let e = n.exp();
        assert!((e - (CMatrix::identity(2) + n)).max_abs() < 1e-13);
    }

    #[test]
    fn rejects_non_square_entry_count() {
        assert!(CMatrix::<f64>::from_row_major(&[c(1.0, 0.0); 3]).is_err());
    }
}
