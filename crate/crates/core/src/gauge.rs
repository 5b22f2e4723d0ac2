//! Unitary connections `d + E` on the trivial bundle `T² × ℂ^m`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::unitary_basis;
use crate::error::{Error, Result};
use crate::grid_forms::{
    codifferential_flat, component_count, dual_ext_d, ext_d, hodge_star, wedge_compose, DifferenceScheme,
    LieForm, LieFormRecord, TorusGrid, ValueClass,
};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// Curvature norm below which a connection counts as flat.
pub const FLATNESS_TOLERANCE: f64 = 1e-8;
/// Default eigenvalue cut for harmonic forms.
pub const HARMONIC_THRESHOLD: f64 = 1e-6;
/// Largest allowed `‖G†G − Id‖` for gauge transformations.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Connection `d + E` with anti-Hermitian potential `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<T> {
    potential: LieForm<T>,
}

impl<T: Real> Connection<T> {
    pub fn new(potential: LieForm<T>) -> Result<Self> {
        if potential.degree() != 1 {
            return Err(Error::InvalidDegree { op: "connection potential", degree: potential.degree() });
        }
        Ok(Self { potential: potential.with_class(ValueClass::AntiHermitian)? })
    }

    /// The flat base connection `d`.
    pub fn trivial(grid: TorusGrid, dim: usize) -> Self {
        Self { potential: LieForm::zeros(grid, 1, dim, ValueClass::AntiHermitian) }
    }

    /// Samples `E = Ex dx + Ey dy` from `f(component, x, y)`.
    pub fn from_fn(grid: TorusGrid, dim: usize, f: impl Fn(usize, T, T) -> CMatrix<T>) -> Result<Self> {
        Self::new(LieForm::from_fn(grid, 1, dim, ValueClass::AntiHermitian, f)?)
    }

    pub fn potential(&self) -> &LieForm<T> {
        &self.potential
    }

    pub fn grid(&self) -> TorusGrid {
        self.potential.grid()
    }

    pub fn dim(&self) -> usize {
        self.potential.dim()
    }

    pub fn is_trivial(&self) -> bool {
        self.potential.max_abs() == T::zero()
    }

    pub fn to_record(&self) -> ConnectionRecord {
        ConnectionRecord {
            grid: GridRecord { n: self.grid().n(), scheme: self.grid().scheme() },
            m: self.dim(),
            potential: self.potential.to_record(),
        }
    }

    pub fn from_record(record: &ConnectionRecord) -> Result<Self> {
        let potential = LieForm::from_record(&record.potential)?;
        let grid = TorusGrid::with_scheme(record.grid.n, record.grid.scheme)?;
        if potential.grid() != grid {
            return Err(Error::GridMismatch("connection grid differs from potential grid".into()));
        }
        if potential.dim() != record.m {
            return Err(Error::DimensionMismatch { expected: record.m, found: potential.dim() });
        }
        Self::new(potential)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRecord {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default)]
    pub scheme: DifferenceScheme,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionRecord {
    pub grid: GridRecord,
    pub m: usize,
    pub potential: LieFormRecord,
}

/// Curvature 2-form `K = dE + E ∧ E`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureField<T> {
    form: LieForm<T>,
}

impl<T: Real> CurvatureField<T> {
    pub fn form(&self) -> &LieForm<T> {
        &self.form
    }

    pub fn into_form(self) -> LieForm<T> {
        self.form
    }

    pub fn l2_norm(&self) -> T {
        self.form.l2_norm()
    }
}

fn project_anti_hermitian<T: Real>(form: LieForm<T>) -> LieForm<T> {
    form.map(|m| m.anti_hermitian_part())
        .with_class(ValueClass::AntiHermitian)
        .expect("projection is anti-Hermitian")
}

/// Keeps anti-Hermitian tagging when the input carried it; matrix products
/// drift from the class only by rounding, which the projection removes.
fn settle_class<T: Real>(form: LieForm<T>, class: ValueClass) -> LieForm<T> {
    match class {
        ValueClass::AntiHermitian => project_anti_hermitian(form),
        ValueClass::General => form,
    }
}

fn check_same_space<T: Real>(c: &Connection<T>, d: &LieForm<T>) -> Result<()> {
    if c.grid() != d.grid() {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", c.grid(), d.grid())));
    }
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: d.dim() });
    }
    Ok(())
}

pub fn curvature<T: Real>(c: &Connection<T>) -> CurvatureField<T> {
    let e = &c.potential;
    let de = ext_d(e).expect("degree 1");
    let ee = wedge_compose(e, e).expect("degree 1 + 1");
    CurvatureField { form: project_anti_hermitian(de.add(&ee).expect("same space")) }
}

/// Commutator wedge `E ∧ D − (−1)^k D ∧ E`.
pub fn bracket_action<T: Real>(e: &LieForm<T>, d: &LieForm<T>) -> Result<LieForm<T>> {
    let ed = wedge_compose(e, d)?;
    let de = wedge_compose(d, e)?;
    if d.degree().is_multiple_of(2) {
        ed.sub(&de)
    } else {
        ed.add(&de)
    }
}

fn covariant_d_with<T: Real>(c: &Connection<T>, d: &LieForm<T>, dual: bool) -> Result<LieForm<T>> {
    check_same_space(c, d)?;
    if d.degree() > 1 {
        return Err(Error::InvalidDegree { op: "covariant_d", degree: d.degree() });
    }
    let flat = if dual { dual_ext_d(d)? } else { ext_d(d)? };
    let out = flat.add(&bracket_action(&c.potential, d)?)?;
    Ok(settle_class(out, d.class()))
}

/// `∇̂D = dD + E ∧ D − (−1)^k D ∧ E` for `k ∈ {0, 1}`.
pub fn covariant_d<T: Real>(c: &Connection<T>, d: &LieForm<T>) -> Result<LieForm<T>> {
    covariant_d_with(c, d, false)
}

/// Covariant derivative built on the dual difference stencil.
pub fn covariant_dual_d<T: Real>(c: &Connection<T>, d: &LieForm<T>) -> Result<LieForm<T>> {
    covariant_d_with(c, d, true)
}

/// Pointwise adjoint of `B ↦ E ∧ B − (−1)^k B ∧ E`.
///
/// 2-forms `C dx∧dy` map to `−[C, Ey] dx + [C, Ex] dy`; 1-forms
/// `Px dx + Py dy` map to `[Px, Ex] + [Py, Ey]`.
pub fn e_dagger<T: Real>(e: &LieForm<T>, omega: &LieForm<T>) -> Result<LieForm<T>> {
    if e.degree() != 1 {
        return Err(Error::InvalidDegree { op: "e_dagger potential", degree: e.degree() });
    }
    if e.grid() != omega.grid() {
        return Err(Error::GridMismatch("e_dagger".into()));
    }
    if e.dim() != omega.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: omega.dim() });
    }
    let n = omega.grid().node_count();
    let (degree, data): (usize, Vec<CMatrix<T>>) = match omega.degree() {
        2 => {
            let mut data: Vec<_> = (0..n).map(|i| -omega.at(0, i).commutator(&e.at(1, i))).collect();
            data.extend((0..n).map(|i| omega.at(0, i).commutator(&e.at(0, i))));
            (1, data)
        }
        1 => (
            0,
            (0..n)
                .map(|i| omega.at(0, i).commutator(&e.at(0, i)) + omega.at(1, i).commutator(&e.at(1, i)))
                .collect(),
        ),
        degree => return Err(Error::InvalidDegree { op: "e_dagger", degree }),
    };
    let form = LieForm::from_parts(omega.grid(), degree, omega.dim(), ValueClass::General, data);
    Ok(settle_class(form, omega.class()))
}

/// Covariant codifferential `δ̂ω = −⋆∇̃⋆ω`, the exact discrete adjoint of
/// [`covariant_d`]. Equal to `δω + E†ω` with the flat `δ`.
pub fn codifferential<T: Real>(c: &Connection<T>, omega: &LieForm<T>) -> Result<LieForm<T>> {
    check_same_space(c, omega)?;
    if omega.degree() == 0 {
        return Err(Error::InvalidDegree { op: "codifferential", degree: 0 });
    }
    Ok(hodge_star(&covariant_dual_d(c, &hodge_star(omega))?).scale(-T::one()))
}

/// `‖K‖²`.
pub fn ym_functional<T: Real>(c: &Connection<T>) -> T {
    let k = curvature(c);
    k.l2_norm().powi(2)
}

/// `δ(∇E) + δ(E∧E) + E†(∇E) + E†(E∧E)` with the flat `δ` and `∇ = d`.
pub fn ym_residual<T: Real>(c: &Connection<T>) -> LieForm<T> {
    let e = &c.potential;
    let de = ext_d(e).expect("degree 1");
    let ee = project_anti_hermitian(wedge_compose(e, e).expect("degree 1 + 1"));
    let terms = [
        codifferential_flat(&de),
        codifferential_flat(&ee),
        e_dagger(e, &de),
        e_dagger(e, &ee),
    ];
    terms
        .into_iter()
        .map(|t| t.expect("degree 2"))
        .reduce(|a, b| a.add(&b).expect("same space"))
        .expect("four terms")
}

/// Fully covariant form `δ̂K̂` of the residual, computed through the Hodge star.
pub fn ym_residual_covariant<T: Real>(c: &Connection<T>) -> LieForm<T> {
    codifferential(c, curvature(c).form()).expect("curvature is a 2-form")
}

/// Structured Yang-Mills summary of a connection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub ym_value: f64,
    pub residual_l2: f64,
    pub covariant_residual_l2: f64,
    pub curvature_l2: f64,
    pub flat: bool,
}

pub fn residual_report<T: Real>(c: &Connection<T>, flat_threshold: f64) -> ResidualReport {
    let curvature_l2 = curvature(c).l2_norm().as_f64();
    ResidualReport {
        ym_value: curvature_l2 * curvature_l2,
        residual_l2: ym_residual(c).l2_norm().as_f64(),
        covariant_residual_l2: ym_residual_covariant(c).l2_norm().as_f64(),
        curvature_l2,
        flat: curvature_l2 <= flat_threshold,
    }
}

/// `G E G⁻¹ − (dG) G⁻¹`, with the last term projected onto u(m): the
/// difference quotient of a unitary field is anti-Hermitian only to `O(h²)`.
pub fn gauge_transform<T: Real>(c: &Connection<T>, g: &[CMatrix<T>]) -> Result<Connection<T>> {
    let grid = c.grid();
    if g.len() != grid.node_count() {
        return Err(Error::GridMismatch(format!("{} gauge matrices for {} nodes", g.len(), grid.node_count())));
    }
    let tol = T::lit(UNITARITY_TOLERANCE);
    for (node, gm) in g.iter().enumerate() {
        if gm.dim() != c.dim() {
            return Err(Error::DimensionMismatch { expected: c.dim(), found: gm.dim() });
        }
        let deviation = gm.unitarity_defect();
        if deviation.is_nan() || deviation > tol {
            return Err(Error::NotUnitary { node, deviation: deviation.as_f64() });
        }
    }
    let g_form = LieForm::from_components(grid, 0, ValueClass::General, vec![g.to_vec()])?;
    let dg = ext_d(&g_form)?;
    let n = grid.node_count();
    let mut data = Vec::with_capacity(2 * n);
    for comp in 0..2 {
        for (i, gi) in g.iter().enumerate() {
            let ginv = gi.adjoint();
            let conj = *gi * c.potential.at(comp, i) * ginv;
            let pure = (dg.at(comp, i) * ginv).anti_hermitian_part();
            data.push((conj - pure).anti_hermitian_part());
        }
    }
    Connection::new(LieForm::from_parts(grid, 1, c.dim(), ValueClass::AntiHermitian, data))
}

/// Pointwise `exp(A)` of a 0-form, e.g. a gauge field `G = exp(f ⊗ e₁)`.
pub fn exp_field<T: Real>(a: &LieForm<T>) -> Result<Vec<CMatrix<T>>> {
    if a.degree() != 0 {
        return Err(Error::InvalidDegree { op: "exp_field", degree: a.degree() });
    }
    Ok(a.component(0).iter().map(|m| m.exp()).collect())
}

/// `Δω = δ̂∇̂ω + ∇̂δ̂ω`, dropping the undefined term at degrees 0 and 2.
pub fn laplacian_apply<T: Real>(c: &Connection<T>, omega: &LieForm<T>) -> Result<LieForm<T>> {
    check_same_space(c, omega)?;
    let up = if omega.degree() < 2 { Some(codifferential(c, &covariant_d(c, omega)?)?) } else { None };
    let down = if omega.degree() > 0 { Some(covariant_d(c, &codifferential(c, omega)?)?) } else { None };
    match (up, down) {
        (Some(a), Some(b)) => a.add(&b),
        (Some(a), None) | (None, Some(a)) => Ok(a),
        (None, None) => unreachable!("degree is 0, 1 or 2"),
    }
}

/// Real orthonormal basis of u(m)-valued k-forms under `⟨⟨·,·⟩⟩ / h²`,
/// enumerated as `(component, node, algebra index)`.
struct FormBasis<T> {
    grid: TorusGrid,
    degree: usize,
    algebra: Vec<CMatrix<T>>,
}

impl<T: Real> FormBasis<T> {
    fn new(grid: TorusGrid, degree: usize, dim: usize) -> Self {
        Self { grid, degree, algebra: unitary_basis(dim) }
    }

    fn len(&self) -> usize {
        component_count(self.degree) * self.grid.node_count() * self.algebra.len()
    }

    fn element(&self, idx: usize) -> LieForm<T> {
        let a = self.algebra.len();
        let dim = self.algebra[0].dim();
        let mut form = LieForm::zeros(self.grid, self.degree, dim, ValueClass::AntiHermitian);
        let slot = idx / a;
        let n = self.grid.node_count();
        form.component_mut(slot / n)[slot % n] = self.algebra[idx % a];
        form
    }

    fn coordinates(&self, form: &LieForm<T>) -> Vec<f64> {
        let n = self.grid.node_count();
        let mut out = Vec::with_capacity(self.len());
        for comp in 0..component_count(self.degree) {
            for i in 0..n {
                let v = form.at(comp, i);
                out.extend(self.algebra.iter().map(|b| v.re_inner(b).as_f64()));
            }
        }
        out
    }

    fn assemble(&self, coords: &[f64]) -> LieForm<T> {
        let a = self.algebra.len();
        let dim = self.algebra[0].dim();
        let n = self.grid.node_count();
        let mut form = LieForm::zeros(self.grid, self.degree, dim, ValueClass::AntiHermitian);
        for (slot, chunk) in coords.chunks(a).enumerate() {
            let m = chunk.iter().zip(&self.algebra).fold(CMatrix::zeros(dim), |acc, (x, b)| acc + b.scale(T::lit(*x)));
            form.component_mut(slot / n)[slot % n] = m;
        }
        form
    }
}

fn laplacian_matrix<T: Real>(c: &Connection<T>, degree: usize) -> Result<(FormBasis<T>, DMatrix<f64>)> {
    if degree > 2 {
        return Err(Error::InvalidDegree { op: "laplacian", degree });
    }
    let basis = FormBasis::new(c.grid(), degree, c.dim());
    let size = basis.len();
    let mut mat = DMatrix::<f64>::zeros(size, size);
    for j in 0..size {
        let col = basis.coordinates(&laplacian_apply(c, &basis.element(j))?);
        mat.column_mut(j).copy_from_slice(&col);
    }
    let sym = (&mat + mat.transpose()) * 0.5;
    Ok((basis, sym))
}

fn require_flat<T: Real>(c: &Connection<T>) -> Result<()> {
    let k = curvature(c).l2_norm().as_f64();
    if k.is_nan() || k > FLATNESS_TOLERANCE {
        return Err(Error::NotFlat { curvature_l2: k });
    }
    Ok(())
}

/// Dimension of `ker Δ_k` for a flat connection: the number of eigenvalues of
/// the assembled Laplacian below `threshold`.
pub fn harmonic_kernel_dim<T: Real>(c: &Connection<T>, degree: usize, threshold: f64) -> Result<usize> {
    require_flat(c)?;
    let (_, mat) = laplacian_matrix(c, degree)?;
    Ok(mat.symmetric_eigenvalues().iter().filter(|&&l| l < threshold).count())
}

/// `L²`-orthogonal projection of `ω` onto the harmonic `k`-forms of a flat
/// connection. For the trivial connection this is the component mean.
pub fn harmonic_projection<T: Real>(c: &Connection<T>, omega: &LieForm<T>, threshold: f64) -> Result<LieForm<T>> {
    check_same_space(c, omega)?;
    if c.is_trivial() {
        let means = omega.component_means();
        return LieForm::constant(omega.grid(), omega.degree(), &means, omega.class());
    }
    require_flat(c)?;
    let (basis, mat) = laplacian_matrix(c, omega.degree())?;
    let eig = mat.symmetric_eigen();
    let x = nalgebra::DVector::from_vec(basis.coordinates(omega));
    let mut proj = nalgebra::DVector::<f64>::zeros(x.len());
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l < threshold {
            let v = eig.eigenvectors.column(k);
            proj += v * v.dot(&x);
        }
    }
    Ok(basis.assemble(proj.as_slice()))
}

/// Size of the product-rule defect `‖∇̂∇̂f − [K, f]‖` on a 0-form, which vanishes
/// in the continuum.
pub fn bianchi_defect<T: Real>(c: &Connection<T>, f: &LieForm<T>) -> Result<T> {
    if f.degree() != 0 {
        return Err(Error::InvalidDegree { op: "bianchi_defect", degree: f.degree() });
    }
    let twice = covariant_d(c, &covariant_d(c, f)?)?;
    let k = curvature(c);
    let kf = bracket_action(f, k.form())?.scale(-T::one());
    Ok(twice.sub(&kf)?.l2_norm())
}
