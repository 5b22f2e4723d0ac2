//! Matrix-valued differential forms on the flat torus `[0,1]²/∼` sampled on a
//! periodic `N × N` grid.
//!
//! Components are collocated at the nodes `(j/N, l/N)`. A 1-form is stored as
//! its `dx` and `dy` coefficient grids, a 2-form as its `dx∧dy` coefficient.
//! Wedge, star and interior products are pointwise and exact; all
//! discretization error lives in the difference operator behind `ext_d`.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{anti_hermitian_tolerance, unitary_basis};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// Periodic difference operator used for the exterior derivative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DifferenceScheme {
    /// Second-order forward-biased stencil `(−f₊₂ + 4f₊₁ − 3f₀)/2h`. Its only
    /// periodic null vector is the constant.
    #[default]
    Biased,
    /// Second-order central stencil `(f₊₁ − f₋₁)/2h`. Annihilates the
    /// checkerboard mode on even grids.
    Central,
}

impl DifferenceScheme {
    /// `(offset, weight·2h)` pairs of the primal stencil.
    fn primal(self) -> &'static [(isize, f64)] {
        match self {
            DifferenceScheme::Biased => &[(0, -3.0), (1, 4.0), (2, -1.0)],
            DifferenceScheme::Central => &[(-1, -1.0), (1, 1.0)],
        }
    }

    /// Stencil of `−Dᵀ`, the derivative used by codifferentials.
    fn dual(self) -> &'static [(isize, f64)] {
        match self {
            DifferenceScheme::Biased => &[(0, 3.0), (-1, -4.0), (-2, 1.0)],
            DifferenceScheme::Central => &[(-1, -1.0), (1, 1.0)],
        }
    }
}

/// Uniform periodic grid on the unit torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    n: usize,
    scheme: DifferenceScheme,
}

impl TorusGrid {
    pub const MIN_NODES: usize = 8;

    pub fn new(n: usize) -> Result<Self> {
        Self::with_scheme(n, DifferenceScheme::default())
    }

    pub fn with_scheme(n: usize, scheme: DifferenceScheme) -> Result<Self> {
        if n < Self::MIN_NODES {
            return Err(Error::GridTooCoarse(n));
        }
        Ok(Self { n, scheme })
    }

    /// Nodes per axis.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn scheme(&self) -> DifferenceScheme {
        self.scheme
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n * self.n
    }

    pub fn spacing<T: Real>(&self) -> T {
        T::one() / T::of_usize(self.n)
    }

    /// Flat index of node `(j, l)`, `x = j/N`, `y = l/N`.
    #[inline]
    pub fn index(&self, j: usize, l: usize) -> usize {
        l * self.n + j
    }

    #[inline]
    pub fn node(&self, idx: usize) -> (usize, usize) {
        (idx % self.n, idx / self.n)
    }

    pub fn coords<T: Real>(&self, idx: usize) -> (T, T) {
        let (j, l) = self.node(idx);
        let h = self.spacing::<T>();
        (T::of_usize(j) * h, T::of_usize(l) * h)
    }

    #[inline]
    fn wrap(&self, i: usize, d: isize) -> usize {
        (i as isize + d).rem_euclid(self.n as isize) as usize
    }

    /// Index of the node displaced by `(dj, dl)` with periodic wrap.
    #[inline]
    pub fn shifted(&self, idx: usize, dj: isize, dl: isize) -> usize {
        let (j, l) = self.node(idx);
        self.index(self.wrap(j, dj), self.wrap(l, dl))
    }

    fn same_as(&self, other: &TorusGrid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// Whether every stored coefficient is constrained to be anti-Hermitian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueClass {
    AntiHermitian,
    General,
}

/// Number of stored coefficient grids for a form of the given degree.
pub fn component_count(degree: usize) -> usize {
    match degree {
        0 | 2 => 1,
        1 => 2,
        _ => 0,
    }
}

/// Matrix-valued `k`-form, `k ∈ {0, 1, 2}`, on a [`TorusGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct LieForm<T> {
    degree: usize,
    grid: TorusGrid,
    dim: usize,
    class: ValueClass,
    data: Vec<CMatrix<T>>,
}

impl<T: Real> LieForm<T> {
    pub fn zeros(grid: TorusGrid, degree: usize, dim: usize, class: ValueClass) -> Self {
        assert!(degree <= 2, "form degree {degree} > 2");
        Self {
            degree,
            grid,
            dim,
            class,
            data: vec![CMatrix::zeros(dim); component_count(degree) * grid.node_count()],
        }
    }

    /// Builds a form from raw component data, validating shape and value class.
    pub fn from_components(
        grid: TorusGrid,
        degree: usize,
        class: ValueClass,
        components: Vec<Vec<CMatrix<T>>>,
    ) -> Result<Self> {
        if degree > 2 {
            return Err(Error::InvalidDegree { op: "form construction", degree });
        }
        if components.len() != component_count(degree) {
            return Err(Error::Format(format!(
                "degree {degree} needs {} components, found {}",
                component_count(degree),
                components.len()
            )));
        }
        let dim = components[0].first().map(|m| m.dim()).unwrap_or(1);
        let mut data = Vec::with_capacity(components.len() * grid.node_count());
        for comp in components {
            if comp.len() != grid.node_count() {
                return Err(Error::Format(format!(
                    "component has {} nodes, grid has {}",
                    comp.len(),
                    grid.node_count()
                )));
            }
            for m in comp {
                if m.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
                }
                data.push(m);
            }
        }
        let form = Self { degree, grid, dim, class, data };
        form.validate_class()?;
        Ok(form)
    }

    /// Samples `f(component, x, y)` at every node.
    pub fn from_fn(
        grid: TorusGrid,
        degree: usize,
        dim: usize,
        class: ValueClass,
        f: impl Fn(usize, T, T) -> CMatrix<T>,
    ) -> Result<Self> {
        if degree > 2 {
            return Err(Error::InvalidDegree { op: "form construction", degree });
        }
        let mut form = Self::zeros(grid, degree, dim, class);
        let nodes = grid.node_count();
        for c in 0..component_count(degree) {
            for i in 0..nodes {
                let (x, y) = grid.coords::<T>(i);
                let v = f(c, x, y);
                if v.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
                }
                form.data[c * nodes + i] = v;
            }
        }
        form.validate_class()?;
        Ok(form)
    }

    /// Real scalar-valued form (`m = 1`, zero imaginary part).
    pub fn scalar_from_fn(grid: TorusGrid, degree: usize, f: impl Fn(usize, T, T) -> T) -> Self {
        Self::from_fn(grid, degree, 1, ValueClass::General, |c, x, y| {
            CMatrix::scalar(Complex::new(f(c, x, y), T::zero()))
        })
        .expect("scalar forms have valid shape")
    }

    /// Constant form with the same coefficient matrix in every component.
    pub fn constant(grid: TorusGrid, degree: usize, coefficients: &[CMatrix<T>], class: ValueClass) -> Result<Self> {
        if coefficients.len() != component_count(degree) {
            return Err(Error::Format("constant coefficient count does not match degree".into()));
        }
        Self::from_fn(grid, degree, coefficients[0].dim(), class, |c, _, _| coefficients[c])
    }

    /// `β ⊗ b` for a real scalar form `β` and a fixed matrix `b`.
    pub fn tensor(&self, b: &CMatrix<T>, class: ValueClass) -> Result<Self> {
        self.require_scalar()?;
        let data = self.data.iter().map(|s| b.scale(s[(0, 0)].re)).collect();
        let form = Self { degree: self.degree, grid: self.grid, dim: b.dim(), class, data };
        form.validate_class()?;
        Ok(form)
    }

    fn validate_class(&self) -> Result<()> {
        if self.class == ValueClass::AntiHermitian {
            let tol = anti_hermitian_tolerance::<T>();
            let worst = self.data.iter().map(|m| m.anti_hermitian_defect()).fold(T::zero(), T::max);
            if worst > tol {
                return Err(Error::NotAntiHermitian { deviation: worst.as_f64() });
            }
        }
        Ok(())
    }

    /// Re-tags the value class, checking anti-Hermiticity when requested.
    pub fn with_class(mut self, class: ValueClass) -> Result<Self> {
        self.class = class;
        self.validate_class()?;
        Ok(self)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    /// Matrix dimension `m` of the coefficients.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn class(&self) -> ValueClass {
        self.class
    }

    pub fn component(&self, c: usize) -> &[CMatrix<T>] {
        let n = self.grid.node_count();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [CMatrix<T>] {
        let n = self.grid.node_count();
        &mut self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn at(&self, c: usize, node: usize) -> CMatrix<T> {
        self.data[c * self.grid.node_count() + node]
    }

    #[allow(dead_code)]
    pub(crate) fn raw(&self) -> &[CMatrix<T>] {
        &self.data
    }

    #[allow(dead_code)]
    pub(crate) fn raw_mut(&mut self) -> &mut [CMatrix<T>] {
        &mut self.data
    }

    pub(crate) fn from_parts(grid: TorusGrid, degree: usize, dim: usize, class: ValueClass, data: Vec<CMatrix<T>>) -> Self {
        debug_assert_eq!(data.len(), component_count(degree) * grid.node_count());
        Self { degree, grid, dim, class, data }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.grid.same_as(&other.grid)?;
        if self.degree != other.degree {
            return Err(Error::InvalidDegree { op: "degree mismatch", degree: other.degree });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(CMatrix<T>, CMatrix<T>) -> CMatrix<T>) -> Result<Self> {
        self.check_compatible(other)?;
        let class = join_class(self.class, other.class);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self::from_parts(self.grid, self.degree, self.dim, class, data))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|m| m.scale(s))
    }

    /// Applies `f` to every stored coefficient, keeping the value class.
    pub fn map(&self, f: impl Fn(&CMatrix<T>) -> CMatrix<T>) -> Self {
        let data = self.data.iter().map(f).collect();
        Self::from_parts(self.grid, self.degree, self.dim, self.class, data)
    }

    /// `L²` norm `⟨⟨ω, ω⟩⟩^{1/2}`.
    pub fn l2_norm(&self) -> T {
        l2_inner(self, self).expect("self-compatible").max(T::zero()).sqrt()
    }

    /// Largest pointwise norm `max_node (Σ_components |coefficient|²_F)^{1/2}`.
    pub fn sup_norm(&self) -> T {
        let n = self.grid.node_count();
        (0..n)
            .map(|i| {
                (0..component_count(self.degree))
                    .map(|c| self.at(c, i).frobenius_norm().powi(2))
                    .fold(T::zero(), |a, b| a + b)
                    .sqrt()
            })
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|m| m.max_abs()).fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|m| m.is_finite())
    }

    /// Grid average of each component.
    pub fn component_means(&self) -> Vec<CMatrix<T>> {
        let n = self.grid.node_count();
        let inv = T::one() / T::of_usize(n);
        (0..component_count(self.degree))
            .map(|c| {
                let mut acc = CMatrix::zeros(self.dim);
                for m in self.component(c) {
                    acc += *m;
                }
                acc.scale(inv)
            })
            .collect()
    }

    fn require_scalar(&self) -> Result<()> {
        if self.dim != 1 {
            return Err(Error::NotScalar(format!("coefficient dimension {}", self.dim)));
        }
        if self.data.iter().any(|m| m[(0, 0)].im != T::zero()) {
            return Err(Error::NotScalar("imaginary coefficient".into()));
        }
        Ok(())
    }

    /// Real values of a scalar form's component `c`.
    pub fn scalar_values(&self, c: usize) -> Result<Vec<T>> {
        self.require_scalar()?;
        Ok(self.component(c).iter().map(|m| m[(0, 0)].re).collect())
    }

    /// Applies the primal (`dual = false`) or dual difference stencil along
    /// `axis` (0 = x, 1 = y) to one coefficient grid.
    pub(crate) fn differentiate(&self, c: usize, axis: usize, dual: bool) -> Vec<CMatrix<T>> {
        difference(&self.grid, self.component(c), axis, dual, self.dim)
    }
}

pub(crate) fn difference<T: Real>(
    grid: &TorusGrid,
    values: &[CMatrix<T>],
    axis: usize,
    dual: bool,
    dim: usize,
) -> Vec<CMatrix<T>> {
    let stencil = if dual { grid.scheme().dual() } else { grid.scheme().primal() };
    let scale = T::of_usize(grid.n()) * T::lit(0.5);
    let weights: Vec<(isize, T)> = stencil.iter().map(|&(o, w)| (o, T::lit(w) * scale)).collect();
    (0..grid.node_count())
        .map(|i| {
            let mut acc = CMatrix::zeros(dim);
            for &(o, w) in &weights {
                let k = if axis == 0 { grid.shifted(i, o, 0) } else { grid.shifted(i, 0, o) };
                acc += values[k].scale(w);
            }
            acc
        })
        .collect()
}

fn join_class(a: ValueClass, b: ValueClass) -> ValueClass {
    if a == ValueClass::AntiHermitian && b == ValueClass::AntiHermitian {
        ValueClass::AntiHermitian
    } else {
        ValueClass::General
    }
}

fn ext_d_with<T: Real>(omega: &LieForm<T>, dual: bool) -> Result<LieForm<T>> {
    let grid = omega.grid;
    match omega.degree {
        0 => {
            let mut data = omega.differentiate(0, 0, dual);
            data.extend(omega.differentiate(0, 1, dual));
            Ok(LieForm::from_parts(grid, 1, omega.dim, omega.class, data))
        }
        1 => {
            // d(P dx + Q dy) = (∂x Q − ∂y P) dx∧dy
            let dq = omega.differentiate(1, 0, dual);
            let dp = omega.differentiate(0, 1, dual);
            let data = dq.into_iter().zip(dp).map(|(a, b)| a - b).collect();
            Ok(LieForm::from_parts(grid, 2, omega.dim, omega.class, data))
        }
        degree => Err(Error::InvalidDegree { op: "ext_d", degree }),
    }
}

/// Exterior derivative with periodic differences. `ext_d ∘ ext_d = 0` exactly.
pub fn ext_d<T: Real>(omega: &LieForm<T>) -> Result<LieForm<T>> {
    ext_d_with(omega, false)
}

/// Exterior derivative built on the dual stencil `−Dᵀ`; the building block of
/// every codifferential.
pub fn dual_ext_d<T: Real>(omega: &LieForm<T>) -> Result<LieForm<T>> {
    ext_d_with(omega, true)
}

/// Flat-metric Hodge star: `⋆1 = dx∧dy`, `⋆dx = dy`, `⋆dy = −dx`, `⋆(dx∧dy) = 1`.
pub fn hodge_star<T: Real>(omega: &LieForm<T>) -> LieForm<T> {
    let grid = omega.grid;
    match omega.degree {
        0 => LieForm::from_parts(grid, 2, omega.dim, omega.class, omega.data.clone()),
        2 => LieForm::from_parts(grid, 0, omega.dim, omega.class, omega.data.clone()),
        _ => {
            // ⋆(P dx + Q dy) = −Q dx + P dy
            let mut data: Vec<CMatrix<T>> = omega.component(1).iter().map(|q| -*q).collect();
            data.extend_from_slice(omega.component(0));
            LieForm::from_parts(grid, 1, omega.dim, omega.class, data)
        }
    }
}

/// Flat codifferential `−⋆ d̃ ⋆` on forms of degree 1 or 2; the exact discrete
/// adjoint of [`ext_d`] for the `l2_inner` pairing.
pub fn codifferential_flat<T: Real>(omega: &LieForm<T>) -> Result<LieForm<T>> {
    if omega.degree == 0 {
        return Err(Error::InvalidDegree { op: "codifferential", degree: 0 });
    }
    Ok(hodge_star(&dual_ext_d(&hodge_star(omega))?).scale(-T::one()))
}

/// Pointwise wedge of form parts combined with the matrix product of
/// coefficients, e.g. `E ∧ E = Σ (η_a ∧ η_b) ⊗ e_a e_b`.
pub fn wedge_compose<T: Real>(a: &LieForm<T>, b: &LieForm<T>) -> Result<LieForm<T>> {
    a.grid.same_as(&b.grid)?;
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    let degree = a.degree + b.degree;
    if degree > 2 {
        return Err(Error::DegreeOverflow(a.degree, b.degree));
    }
    let n = a.grid.node_count();
    let mut data = Vec::with_capacity(component_count(degree) * n);
    match (a.degree, b.degree) {
        (0, _) => {
            for c in 0..component_count(b.degree) {
                data.extend((0..n).map(|i| a.at(0, i) * b.at(c, i)));
            }
        }
        (_, 0) => {
            for c in 0..component_count(a.degree) {
                data.extend((0..n).map(|i| a.at(c, i) * b.at(0, i)));
            }
        }
        (1, 1) => {
            // (Ax dx + Ay dy) ∧ (Bx dx + By dy) = (Ax By − Ay Bx) dx∧dy
            data.extend((0..n).map(|i| a.at(0, i) * b.at(1, i) - a.at(1, i) * b.at(0, i)));
        }
        _ => unreachable!("degree overflow handled above"),
    }
    Ok(LieForm::from_parts(a.grid, degree, a.dim, ValueClass::General, data))
}

/// Real vector field on the torus grid.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<T> {
    grid: TorusGrid,
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Real> VectorField<T> {
    pub fn new(grid: TorusGrid, x: Vec<T>, y: Vec<T>) -> Result<Self> {
        if x.len() != grid.node_count() || y.len() != grid.node_count() {
            return Err(Error::GridMismatch("vector field length".into()));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::Format("non-finite vector field entry".into()));
        }
        Ok(Self { grid, x, y })
    }

    pub fn constant(grid: TorusGrid, vx: T, vy: T) -> Self {
        Self { grid, x: vec![vx; grid.node_count()], y: vec![vy; grid.node_count()] }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }
}

/// Musical isomorphism of the flat metric on a real scalar 1-form.
pub fn sharp<T: Real>(alpha: &LieForm<T>) -> Result<VectorField<T>> {
    if alpha.degree != 1 {
        return Err(Error::InvalidDegree { op: "sharp", degree: alpha.degree });
    }
    let x = alpha.scalar_values(0)?;
    let y = alpha.scalar_values(1)?;
    VectorField::new(alpha.grid, x, y)
}

/// Interior product in the first slot:
/// `ι_v(P dx + Q dy) = v_x P + v_y Q`, `ι_v(R dx∧dy) = −v_y R dx + v_x R dy`.
pub fn interior<T: Real>(v: &VectorField<T>, omega: &LieForm<T>) -> Result<LieForm<T>> {
    v.grid.same_as(&omega.grid)?;
    let n = omega.grid.node_count();
    match omega.degree {
        1 => {
            let data = (0..n).map(|i| omega.at(0, i).scale(v.x[i]) + omega.at(1, i).scale(v.y[i])).collect();
            Ok(LieForm::from_parts(omega.grid, 0, omega.dim, omega.class, data))
        }
        2 => {
            let mut data: Vec<CMatrix<T>> = (0..n).map(|i| omega.at(0, i).scale(-v.y[i])).collect();
            data.extend((0..n).map(|i| omega.at(0, i).scale(v.x[i])));
            Ok(LieForm::from_parts(omega.grid, 1, omega.dim, omega.class, data))
        }
        degree => Err(Error::InvalidDegree { op: "interior", degree }),
    }
}

/// Discrete `⟨⟨A, B⟩⟩ = ∫ (A ∧ ⋆B) ⟨a, b⟩`: `h² Σ_nodes Σ_components Re tr(a b†)`.
pub fn l2_inner<T: Real>(a: &LieForm<T>, b: &LieForm<T>) -> Result<T> {
    a.check_compatible(b)?;
    let h = a.grid.spacing::<T>();
    let sum = a.data.iter().zip(&b.data).fold(T::zero(), |acc, (x, y)| acc + x.re_inner(y));
    Ok(sum * h * h)
}

/// Random coefficient in u(m) with entries of order one.
pub fn random_algebra_element<T: Real, R: Rng>(rng: &mut R, dim: usize) -> CMatrix<T> {
    unitary_basis::<T>(dim)
        .iter()
        .fold(CMatrix::zeros(dim), |acc, b| acc + b.scale(T::lit(rng.gen_range(-1.0..1.0))))
}

/// Independent random anti-Hermitian coefficient at every node and component.
pub fn random_nodal_form<T: Real, R: Rng>(rng: &mut R, grid: TorusGrid, degree: usize, dim: usize) -> LieForm<T> {
    let data = (0..component_count(degree) * grid.node_count()).map(|_| random_algebra_element(rng, dim)).collect();
    LieForm::from_parts(grid, degree, dim, ValueClass::AntiHermitian, data)
}

/// Random smooth anti-Hermitian form: a sum of Fourier modes with `|k| ≤ max_mode`
/// and random u(m) amplitudes.
pub fn random_smooth_form<T: Real, R: Rng>(
    rng: &mut R,
    grid: TorusGrid,
    degree: usize,
    dim: usize,
    max_mode: i32,
) -> LieForm<T> {
    let mut terms = Vec::new();
    for c in 0..component_count(degree) {
        for kx in -max_mode..=max_mode {
            for ky in -max_mode..=max_mode {
                let amp: CMatrix<T> = random_algebra_element(rng, dim);
                let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                terms.push((c, kx, ky, amp, phase));
            }
        }
    }
    let two_pi = T::lit(std::f64::consts::TAU);
    LieForm::from_fn(grid, degree, dim, ValueClass::AntiHermitian, |c, x, y| {
        terms.iter().filter(|t| t.0 == c).fold(CMatrix::zeros(dim), |acc, (_, kx, ky, amp, phase)| {
            let arg = two_pi * (T::lit(*kx as f64) * x + T::lit(*ky as f64) * y) + T::lit(*phase);
            acc + amp.scale(arg.cos() * T::lit(0.5))
        })
    })
    .expect("random smooth form is anti-Hermitian by construction")
}

/// Serialized form: `components[c][node][entry] = [re, im]`, nodes ordered
/// `l·N + j` (rows along y), entries row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieFormRecord {
    pub degree: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub m: usize,
    pub value_class: ValueClass,
    #[serde(default)]
    pub scheme: DifferenceScheme,
    pub components: Vec<Vec<Vec<[f64; 2]>>>,
}

impl<T: Real> LieForm<T> {
    pub fn to_record(&self) -> LieFormRecord {
        LieFormRecord {
            degree: self.degree,
            n: self.grid.n(),
            m: self.dim,
            value_class: self.class,
            scheme: self.grid.scheme(),
            components: (0..component_count(self.degree))
                .map(|c| {
                    self.component(c)
                        .iter()
                        .map(|mat| mat.row_major().iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_record(record: &LieFormRecord) -> Result<Self> {
        let grid = TorusGrid::with_scheme(record.n, record.scheme)?;
        let expect_entries = record.m * record.m;
        let components = record
            .components
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|entries| {
                        if entries.len() != expect_entries {
                            return Err(Error::Format(format!(
                                "matrix has {} entries, m = {} needs {expect_entries}",
                                entries.len(),
                                record.m
                            )));
                        }
                        let zs: Vec<Complex<T>> =
                            entries.iter().map(|[re, im]| Complex::new(T::lit(*re), T::lit(*im))).collect();
                        CMatrix::from_row_major(&zs)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let form = Self::from_components(grid, record.degree, record.value_class, components)?;
        if form.dim != record.m && form.grid.node_count() > 0 {
            return Err(Error::DimensionMismatch { expected: record.m, found: form.dim });
        }
        Ok(form)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: LieFormRecord = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_record(&record)
    }
}

impl<T: Real> CMatrix<T> {
    /// True when every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.row_major().iter().all(|z| z.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PauliBasis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn grid(n: usize) -> TorusGrid {
        TorusGrid::new(n).unwrap()
    }

    fn e(a: usize) -> CMatrix<f64> {
        *PauliBasis::<f64>::new().e[a].matrix()
    }

    #[test]
    fn coarse_grid_rejected() {
        assert_eq!(TorusGrid::new(7), Err(Error::GridTooCoarse(7)));
        assert!(TorusGrid::new(8).is_ok());
    }

    #[test]
    fn d_of_constant_is_zero() {
        let g = grid(16);
        let f = LieForm::constant(g, 0, &[e(0).scale(3.0)], ValueClass::AntiHermitian).unwrap();
        assert_eq!(ext_d(&f).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn d_rejects_two_forms() {
        let g = grid(8);
        let w = LieForm::<f64>::zeros(g, 2, 2, ValueClass::General);
        assert!(matches!(ext_d(&w), Err(Error::InvalidDegree { .. })));
        assert!(codifferential_flat(&LieForm::<f64>::zeros(g, 0, 1, ValueClass::General)).is_err());
    }

    #[test]
    fn d_of_sin_dy_is_second_order() {
        let mut errs = Vec::new();
        for n in [32, 64, 128] {
            let g = grid(n);
            let omega = LieForm::scalar_from_fn(g, 1, |c, x: f64, _| if c == 1 { (TAU * x).sin() } else { 0.0 })
                .tensor(&e(0), ValueClass::AntiHermitian)
                .unwrap();
            let d = ext_d(&omega).unwrap();
            let exact = LieForm::scalar_from_fn(g, 2, |_, x: f64, _| TAU * (TAU * x).cos())
                .tensor(&e(0), ValueClass::AntiHermitian)
                .unwrap();
            errs.push(d.sub(&exact).unwrap().max_abs());
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.6..=4.4).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn star_examples() {
        let g = grid(8);
        let f = LieForm::scalar_from_fn(g, 1, |c, x, y| if c == 0 { x + 2.0 * y } else { 0.0 });
        let sf = hodge_star(&f);
        assert_eq!(sf.scalar_values(0).unwrap(), vec![0.0; 64]);
        assert_eq!(sf.scalar_values(1).unwrap(), f.scalar_values(0).unwrap());

        let w = LieForm::constant(g, 2, &[e(2)], ValueClass::AntiHermitian).unwrap();
        let sw = hodge_star(&w);
        assert_eq!(sw.degree(), 0);
        assert!(sw.component(0).iter().all(|m| *m == e(2)));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..=2 {
            let a = random_nodal_form::<f64, _>(&mut rng, g, k, 2);
            let twice = hodge_star(&hodge_star(&a));
            let expect = if k == 1 { a.scale(-1.0) } else { a.clone() };
            assert_eq!(twice, expect);
        }
    }

    #[test]
    fn wedge_compose_examples() {
        let g = grid(16);
        let s = |t: f64| (TAU * t).sin();
        let en = LieForm::from_fn(g, 1, 2, ValueClass::AntiHermitian, |c, x, y| {
            if c == 0 { e(0).scale(s(x)) } else { e(1).scale(s(y)) }
        })
        .unwrap();
        let ee = wedge_compose(&en, &en).unwrap();
        let expect = LieForm::from_fn(g, 2, 2, ValueClass::General, |_, x, y| e(2).scale(-2.0 * s(x) * s(y))).unwrap();
        assert!(ee.sub(&expect).unwrap().max_abs() < 1e-14);

        let alpha = LieForm::scalar_from_fn(g, 1, |c, x: f64, y| if c == 0 { x.cos() } else { y * x })
            .tensor(&e(0), ValueClass::AntiHermitian)
            .unwrap();
        assert_eq!(wedge_compose(&alpha, &alpha).unwrap().max_abs(), 0.0);

        let f = LieForm::scalar_from_fn(g, 0, |_, x, _| 1.0 + x).tensor(&CMatrix::identity(2), ValueClass::General).unwrap();
        let fw = wedge_compose(&f, &alpha).unwrap();
        let expect = alpha.map(|m| *m);
        for i in 0..g.node_count() {
            let (x, _) = g.coords::<f64>(i);
            for c in 0..2 {
                assert!((fw.at(c, i) - expect.at(c, i).scale(1.0 + x)).max_abs() < 1e-15);
            }
        }

        let two = LieForm::<f64>::zeros(g, 2, 2, ValueClass::General);
        assert_eq!(wedge_compose(&alpha, &two), Err(Error::DegreeOverflow(1, 2)));
    }

    #[test]
    fn sharp_examples() {
        let g = grid(8);
        let dx = LieForm::scalar_from_fn(g, 1, |c, _, _| if c == 0 { 1.0 } else { 0.0 });
        let v = sharp(&dx).unwrap();
        assert!(v.x.iter().all(|&a| a == 1.0) && v.y.iter().all(|&b| b == 0.0));
        let ab = LieForm::scalar_from_fn(g, 1, |c, _, _| if c == 0 { 2.5 } else { -1.5 });
        let v = sharp(&ab).unwrap();
        assert!(v.x.iter().all(|&a| a == 2.5) && v.y.iter().all(|&b| b == -1.5));
        let z = sharp(&LieForm::scalar_from_fn(g, 1, |_, _, _| 0.0)).unwrap();
        assert!(z.x.iter().chain(&z.y).all(|&a| a == 0.0));
        let matrix_valued = LieForm::constant(g, 1, &[e(0), e(1)], ValueClass::AntiHermitian).unwrap();
        assert!(matches!(sharp(&matrix_valued), Err(Error::NotScalar(_))));
    }

    #[test]
    fn interior_examples() {
        let g = grid(8);
        let w = LieForm::scalar_from_fn(g, 2, |_, _, _| 1.0);
        let dy = interior(&VectorField::constant(g, 1.0, 0.0), &w).unwrap();
        assert_eq!(dy.scalar_values(0).unwrap(), vec![0.0; 64]);
        assert_eq!(dy.scalar_values(1).unwrap(), vec![1.0; 64]);

        let hw = LieForm::scalar_from_fn(g, 2, |_, x, y| x - y * y);
        let (a, b) = (0.7, -1.3);
        let got = interior(&VectorField::constant(g, a, b), &hw).unwrap();
        for i in 0..g.node_count() {
            let (x, y) = g.coords::<f64>(i);
            let h = x - y * y;
            assert!((got.at(0, i)[(0, 0)].re - (-b * h)).abs() < 1e-15);
            assert!((got.at(1, i)[(0, 0)].re - a * h).abs() < 1e-15);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let omega = random_nodal_form::<f64, _>(&mut rng, g, 2, 2);
        let v = VectorField::constant(g, 0.3, 0.8);
        let twice = interior(&v, &interior(&v, &omega).unwrap()).unwrap();
        assert!(twice.max_abs() < 1e-15);
        assert!(interior(&v, &LieForm::<f64>::zeros(g, 0, 1, ValueClass::General)).is_err());
    }

    #[test]
    fn l2_inner_examples() {
        let g = grid(32);
        let dx = LieForm::constant(g, 1, &[e(0), CMatrix::zeros(2)], ValueClass::AntiHermitian).unwrap();
        let dy = LieForm::constant(g, 1, &[CMatrix::zeros(2), e(0)], ValueClass::AntiHermitian).unwrap();
        assert!((l2_inner(&dx, &dx).unwrap() - 2.0).abs() < 1e-13);
        assert_eq!(l2_inner(&dx, &dy).unwrap(), 0.0);
        let s = LieForm::scalar_from_fn(g, 1, |c, x: f64, _| if c == 0 { (TAU * x).sin() } else { 0.0 })
            .tensor(&e(0), ValueClass::AntiHermitian)
            .unwrap();
        assert!((l2_inner(&s, &s).unwrap() - 1.0).abs() < 1e-10);
        assert!(l2_inner(&dx, &LieForm::zeros(g, 2, 2, ValueClass::General)).is_err());
        assert!(l2_inner(&dx, &LieForm::zeros(grid(16), 1, 2, ValueClass::General)).is_err());
    }

    #[test]
    fn summation_by_parts_both_schemes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for scheme in [DifferenceScheme::Biased, DifferenceScheme::Central] {
            let g = TorusGrid::with_scheme(16, scheme).unwrap();
            for k in 0..=1 {
                let f = random_nodal_form::<f64, _>(&mut rng, g, k, 2);
                let w = random_nodal_form::<f64, _>(&mut rng, g, k + 1, 2);
                let lhs = l2_inner(&ext_d(&f).unwrap(), &w).unwrap();
                let rhs = l2_inner(&f, &codifferential_flat(&w).unwrap()).unwrap();
                assert!((lhs - rhs).abs() < 1e-12, "{scheme:?} k={k}: {lhs} vs {rhs}");
            }
        }
        // the central scheme is antisymmetric, so δ = −⋆d⋆ uses the primal d
        let g = TorusGrid::with_scheme(16, DifferenceScheme::Central).unwrap();
        let w = random_nodal_form::<f64, _>(&mut rng, g, 1, 2);
        let literal = hodge_star(&ext_d(&hodge_star(&w)).unwrap()).scale(-1.0);
        assert!(literal.sub(&codifferential_flat(&w).unwrap()).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn record_roundtrip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_nodal_form::<f64, _>(&mut rng, grid(8), 1, 3).scale(PI);
        let text = f.to_json();
        let back = LieForm::<f64>::from_json(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn record_rejects_bad_input() {
        let f = LieForm::<f64>::zeros(grid(8), 1, 2, ValueClass::AntiHermitian);
        let mut rec = f.to_record();
        rec.components.pop();
        assert!(LieForm::<f64>::from_record(&rec).is_err());
        let mut rec = f.to_record();
        rec.components[0][3][0] = [1.0, 0.0];
        assert!(matches!(LieForm::<f64>::from_record(&rec), Err(Error::NotAntiHermitian { .. })));
        assert!(LieForm::<f64>::from_json("{\"degree\":1}").is_err());
        let extra = f.to_json().replacen('{', "{\"bogus\":1,", 1);
        assert!(LieForm::<f64>::from_json(&extra).is_err());
    }
}
