//! Matrix Lie algebra layer: u(m) elements, the Pauli basis of su(2),
//! brackets, the ad-invariant inner product and the exponential map.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// Absolute per-entry tolerance for the anti-Hermitian check.
pub fn anti_hermitian_tolerance<T: Real>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(128.0))
}

/// Anti-Hermitian `m × m` matrix, an element of u(m).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraElement<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> AlgebraElement<T> {
    /// Wraps `matrix`, rejecting it when `A + A†` exceeds the tolerance.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let deviation = matrix.anti_hermitian_defect();
        if deviation > anti_hermitian_tolerance() {
            return Err(Error::NotAntiHermitian { deviation: deviation.as_f64() });
        }
        Ok(Self { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: CMatrix::zeros(dim) }
    }

    /// `i·h` for a real scalar `h`: the generator of u(1).
    pub fn imaginary_unit(h: T) -> Self {
        Self { matrix: CMatrix::scalar(Complex::new(T::zero(), h)) }
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    #[inline]
    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn scale(&self, s: T) -> Self {
        Self { matrix: self.matrix.scale(s) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self { matrix: self.matrix + other.matrix })
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// Lie bracket `AB − BA`.
pub fn bracket<T: Real>(a: &AlgebraElement<T>, b: &AlgebraElement<T>) -> Result<AlgebraElement<T>> {
    check_dims(a.dim(), b.dim())?;
    Ok(AlgebraElement { matrix: a.matrix.commutator(&b.matrix) })
}

/// Ad-invariant inner product `⟨A, B⟩ = Re tr(A B†)`.
///
/// No factor 1/2: with this normalization the Pauli generators satisfy
/// `⟨e_a, e_b⟩ = 2 δ_ab`.
pub fn inner<T: Real>(a: &AlgebraElement<T>, b: &AlgebraElement<T>) -> Result<T> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.matrix.re_inner(&b.matrix))
}

/// Exponential map; unitary whenever `a` is anti-Hermitian.
pub fn mat_exp<T: Real>(a: &AlgebraElement<T>) -> CMatrix<T> {
    a.matrix.exp()
}

/// Totally antisymmetric symbol on indices `0..3`.
pub fn levi_civita(a: usize, b: usize, c: usize) -> i32 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// Pauli matrices `σ_a` (not anti-Hermitian; used to build `e_a = iσ_a`).
pub fn pauli<T: Real>(a: usize) -> CMatrix<T> {
    let (o, z) = (Complex::<T>::one(), Complex::<T>::zero());
    let i = Complex::<T>::i();
    let entries = match a {
        0 => [z, o, o, z],
        1 => [z, -i, i, z],
        2 => [o, z, z, -o],
        _ => panic!("Pauli index {a} out of range 0..3"),
    };
    CMatrix::from_row_major(&entries).expect("2x2")
}

/// The basis `e_a = iσ_a` of su(2) with `[e_a, e_b] = −2 ε_abc e_c`.
#[derive(Clone, Copy, Debug)]
pub struct PauliBasis<T> {
    pub e: [AlgebraElement<T>; 3],
}

impl<T: Real> PauliBasis<T> {
    pub fn new() -> Self {
        let make = |a| AlgebraElement { matrix: pauli::<T>(a).scale_c(Complex::i()) };
        Self { e: [make(0), make(1), make(2)] }
    }

    /// Structure constant `C^c_ab` in `[e_a, e_b] = Σ_c C^c_ab e_c`.
    pub fn structure_constant(a: usize, b: usize, c: usize) -> T {
        T::lit(-2.0 * levi_civita(a, b, c) as f64)
    }

    /// `Σ_a x_a e_a`.
    pub fn combine(&self, x: [T; 3]) -> AlgebraElement<T> {
        let m = self.e[0].matrix.scale(x[0]) + self.e[1].matrix.scale(x[1]) + self.e[2].matrix.scale(x[2]);
        AlgebraElement { matrix: m }
    }

    /// Coordinates `x_a = ⟨A, e_a⟩ / 2` of the traceless part of `a`.
    pub fn coordinates(&self, a: &CMatrix<T>) -> [T; 3] {
        let half = T::lit(0.5);
        [0, 1, 2].map(|k| a.re_inner(&self.e[k].matrix) * half)
    }
}

impl<T: Real> Default for PauliBasis<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Basis of u(m) orthonormal for `Re tr(A B†)`; `m²` elements.
pub fn unitary_basis<T: Real>(m: usize) -> Vec<CMatrix<T>> {
    let i = Complex::<T>::i();
    let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let mut out = Vec::with_capacity(m * m);
    for j in 0..m {
        let mut d = CMatrix::zeros(m);
        d[(j, j)] = i;
        out.push(d);
    }
    for j in 0..m {
        for k in (j + 1)..m {
            let mut s = CMatrix::zeros(m);
            s[(j, k)] = Complex::new(r, T::zero());
            s[(k, j)] = Complex::new(-r, T::zero());
            out.push(s);
            let mut h = CMatrix::zeros(m);
            h[(j, k)] = i * r;
            h[(k, j)] = i * r;
            out.push(h);
        }
    }
    out
}
