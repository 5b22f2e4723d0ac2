//! Curves of connections `∇ + E(t)` through the flat base, their jets, and the
//! explicit su(2) family on the torus.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::PauliBasis;
use crate::error::{Error, Result};
use crate::gauge::{
    codifferential, covariant_d, curvature, exp_field, gauge_transform, harmonic_projection, ym_residual,
    ym_residual_covariant, Connection, FLATNESS_TOLERANCE, HARMONIC_THRESHOLD,
};
use crate::grid_forms::{
    dual_ext_d, ext_d, hodge_star, interior, random_smooth_form, sharp, wedge_compose, LieForm, TorusGrid,
    ValueClass,
};
use crate::holonomy::{parallel_transport, AnalyticTorusPotential, ParametricPath};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// Default jet step.
pub const DEFAULT_T_SMALL: f64 = 1e-3;
/// Smallest jet step accepted.
pub const MIN_T_SMALL: f64 = 1e-6;

type Sampler<T> = Arc<dyn Fn(T) -> Result<LieForm<T>> + Send + Sync>;

/// `t ↦ E(t)` with `E(0) = 0`, evaluated on demand.
#[derive(Clone)]
pub struct ConnectionCurve<T> {
    grid: TorusGrid,
    dim: usize,
    sampler: Sampler<T>,
}

impl<T: Real> ConnectionCurve<T> {
    pub fn new(
        grid: TorusGrid,
        dim: usize,
        sampler: impl Fn(T) -> Result<LieForm<T>> + Send + Sync + 'static,
    ) -> Self {
        Self { grid, dim, sampler: Arc::new(sampler) }
    }

    /// `E(t) = t·A + t²·B`.
    pub fn polynomial(a: LieForm<T>, b: LieForm<T>) -> Result<Self> {
        let zero = a.scale(T::zero());
        zero.add(&b)?;
        let (grid, dim) = (a.grid(), a.dim());
        Ok(Self::new(grid, dim, move |t| a.scale(t).add(&b.scale(t * t))))
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn potential(&self, t: T) -> Result<LieForm<T>> {
        (self.sampler)(t)
    }

    pub fn connection(&self, t: T) -> Result<Connection<T>> {
        Connection::new(self.potential(t)?)
    }
}

/// First two Taylor coefficients of a curve and `C_E = ∇E₂ + E₁ ∧ E₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationJets<T> {
    pub e1: LieForm<T>,
    pub e2: LieForm<T>,
    pub c_e: LieForm<T>,
}

/// Fits `E(t) = t E₁ + t² E₂ + t³ E₃ + t⁴ E₄` through `E(0) = 0` and
/// `E(k·t_small)`, `k = 1..4`; exact on quartic families.
pub fn extract_jets<T: Real>(curve: &ConnectionCurve<T>, t_small: T) -> Result<PerturbationJets<T>> {
    if t_small.is_nan() || t_small < T::lit(MIN_T_SMALL) {
        return Err(Error::DegenerateStencil(t_small.as_f64()));
    }
    if t_small > T::lit(0.1) {
        return Err(Error::InvalidParameter(format!("t_small = {} exceeds 0.1", t_small.as_f64())));
    }
    let e0 = curve.potential(T::zero())?;
    let anchor = e0.max_abs();
    if anchor > T::lit(1e-12) {
        return Err(Error::CurveNotAnchored { norm: anchor.as_f64() });
    }
    let f: Vec<LieForm<T>> = (1..=4).map(|k| curve.potential(t_small * T::of_usize(k))).collect::<Result<_>>()?;
    let combine = |w: [f64; 4], s: T| -> Result<LieForm<T>> {
        let mut acc = f[0].scale(T::lit(w[0]) * s);
        for k in 1..4 {
            acc = acc.add(&f[k].scale(T::lit(w[k]) * s))?;
        }
        Ok(acc)
    };
    let e1 = combine([48.0, -36.0, 16.0, -3.0], T::one() / (T::lit(12.0) * t_small))?;
    let e2 = combine([-104.0, 114.0, -56.0, 11.0], T::one() / (T::lit(24.0) * t_small * t_small))?;
    let c_e = ext_d(&e2)?.add(&wedge_compose(&e1, &e1)?)?;
    Ok(PerturbationJets { e1, e2, c_e })
}

/// Norms probing whether a curve of Yang-Mills fields leaves the flat base
/// along a harmonic direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetSummary {
    pub nabla_e1: f64,
    pub delta_e1: f64,
    pub delta_c_e: f64,
    /// Always zero: `∇C_E` is a 3-form on a surface.
    pub nabla_c_e: f64,
    pub c_e_l2: f64,
    pub harmonic_projection_e1: f64,
}

pub fn check_ym_curve<T: Real>(jets: &PerturbationJets<T>, base: &Connection<T>) -> Result<JetSummary> {
    let k = curvature(base).l2_norm().as_f64();
    if k > FLATNESS_TOLERANCE {
        return Err(Error::NotFlat { curvature_l2: k });
    }
    Ok(JetSummary {
        nabla_e1: covariant_d(base, &jets.e1)?.l2_norm().as_f64(),
        delta_e1: codifferential(base, &jets.e1)?.l2_norm().as_f64(),
        delta_c_e: codifferential(base, &jets.c_e)?.l2_norm().as_f64(),
        nabla_c_e: 0.0,
        c_e_l2: jets.c_e.l2_norm().as_f64(),
        harmonic_projection_e1: harmonic_projection(base, &jets.e1, HARMONIC_THRESHOLD)?.l2_norm().as_f64(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatCurveRecord {
    /// `(t, ‖K(t)‖)` per sample.
    pub curvature: Vec<(f64, f64)>,
    pub flat: bool,
    /// `‖C_E‖`, computed only when every sample is flat.
    pub c_e_l2: Option<f64>,
    pub c_e_within_tolerance: Option<bool>,
}

pub fn check_flat_curve<T: Real>(curve: &ConnectionCurve<T>, ts: &[T], t_small: T, tol: f64) -> Result<FlatCurveRecord> {
    let curvature: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| Ok((t.as_f64(), crate::gauge::curvature(&curve.connection(t)?).l2_norm().as_f64())))
        .collect::<Result<_>>()?;
    let flat = curvature.iter().all(|&(_, k)| k <= FLATNESS_TOLERANCE);
    let c_e_l2 = if flat { Some(extract_jets(curve, t_small)?.c_e.l2_norm().as_f64()) } else { None };
    Ok(FlatCurveRecord { curvature, flat, c_e_l2, c_e_within_tolerance: c_e_l2.map(|c| c <= tol) })
}

/// `E(t) = gauge_transform(d, exp(t A₁ + t² A₂))`.
pub fn gauge_orbit_curve<T: Real>(a1: &LieForm<T>, a2: &LieForm<T>) -> Result<ConnectionCurve<T>> {
    for a in [a1, a2] {
        if a.degree() != 0 {
            return Err(Error::InvalidDegree { op: "gauge_orbit_curve", degree: a.degree() });
        }
        if a.class() != ValueClass::AntiHermitian {
            return Err(Error::NotAntiHermitian { deviation: a.map(|m| *m).max_abs().as_f64() });
        }
    }
    a1.add(a2)?;
    let (a1, a2) = (a1.clone(), a2.clone());
    let (grid, dim) = (a1.grid(), a1.dim());
    let base = Connection::trivial(grid, dim);
    Ok(ConnectionCurve::new(grid, dim, move |t| {
        let generator = a1.scale(t).add(&a2.scale(t * t))?;
        Ok(gauge_transform(&base, &exp_field(&generator)?)?.potential().clone())
    }))
}

/// su(2) potential `α⊗e₁ + β⊗e₂ + γ⊗e₃` with `dα = h₁w`, `dβ = h₂w`, `dγ = h₃w`.
#[derive(Clone, Debug, PartialEq)]
pub struct Su2Potential<T> {
    pub connection: Connection<T>,
    /// Scalar 1-forms `α, β, γ`.
    pub forms: [LieForm<T>; 3],
    /// Scalar 0-forms `h₁, h₂, h₃`.
    pub h: [LieForm<T>; 3],
}

fn require_scalar_one_form<T: Real>(f: &LieForm<T>) -> Result<()> {
    if f.degree() != 1 {
        return Err(Error::InvalidDegree { op: "su(2) coefficient", degree: f.degree() });
    }
    f.scalar_values(0)?;
    f.scalar_values(1)?;
    Ok(())
}

pub fn su2_potential<T: Real>(alpha: &LieForm<T>, beta: &LieForm<T>, gamma: &LieForm<T>) -> Result<Su2Potential<T>> {
    let basis = PauliBasis::<T>::new();
    let forms = [alpha.clone(), beta.clone(), gamma.clone()];
    for f in &forms {
        require_scalar_one_form(f)?;
    }
    let mut potential = LieForm::zeros(alpha.grid(), 1, 2, ValueClass::AntiHermitian);
    for (a, f) in forms.iter().enumerate() {
        potential = potential.add(&f.tensor(basis.e[a].matrix(), ValueClass::AntiHermitian)?)?;
    }
    let h = forms.clone().map(|f| {
        let w = ext_d(&f).expect("degree 1");
        LieForm::from_parts(w.grid(), 0, 1, ValueClass::General, w.component(0).to_vec())
    });
    Ok(Su2Potential { connection: Connection::new(potential)?, forms, h })
}

/// Splits an su(2)-valued connection into its scalar coefficient forms.
pub fn su2_decompose<T: Real>(c: &Connection<T>) -> Result<Su2Potential<T>> {
    if c.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: c.dim() });
    }
    let basis = PauliBasis::<T>::new();
    let grid = c.grid();
    let n = grid.node_count();
    let mut coeff = [vec![T::zero(); 2 * n], vec![T::zero(); 2 * n], vec![T::zero(); 2 * n]];
    let mut outside = T::zero();
    for comp in 0..2 {
        for i in 0..n {
            let m = c.potential().at(comp, i);
            let x = basis.coordinates(&m);
            let rest = m - *basis.combine(x).matrix();
            outside = outside.max(rest.max_abs());
            for a in 0..3 {
                coeff[a][comp * n + i] = x[a];
            }
        }
    }
    if outside > T::lit(1e-12) {
        return Err(Error::OutsideAnsatz { residual: outside.as_f64() });
    }
    let forms = coeff.map(|v| {
        let data = v.into_iter().map(|x| CMatrix::scalar(Complex::new(x, T::zero()))).collect();
        LieForm::from_parts(grid, 1, 1, ValueClass::General, data)
    });
    su2_potential(&forms[0], &forms[1], &forms[2])
}

/// Specialized residuals of the su(2) ansatz and their agreement with the
/// general Yang-Mills residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su2Conditions {
    /// `‖R_a‖`, `R₁ = ⋆dh₁ + 2(ι_γ(h₂w) − ι_β(h₃w))` and cyclic.
    pub residual_l2: [f64; 3],
    /// `‖β∧γ‖, ‖γ∧α‖, ‖α∧β‖`.
    pub wedge_l2: [f64; 3],
    pub wedge_free: bool,
    pub general_residual_l2: f64,
    /// `max_a ‖G_a + R_a‖` with `G_a` the `e_a` coordinate of the general residual.
    pub discrepancy: f64,
}

/// Scalar 1-forms `R₁, R₂, R₃`.
pub fn su2_residual_forms<T: Real>(p: &Su2Potential<T>) -> Result<[LieForm<T>; 3]> {
    let two = T::lit(2.0);
    let hw = |a: usize| -> LieForm<T> {
        LieForm::from_parts(p.h[a].grid(), 2, 1, ValueClass::General, p.h[a].component(0).to_vec())
    };
    let iota = |form: usize, h: usize| -> Result<LieForm<T>> { interior(&sharp(&p.forms[form])?, &hw(h)) };
    // (a, form, h, form', h'): R_a = ⋆dh_a + 2(ι_form(h w) − ι_form'(h' w))
    let table = [(0, 2, 1, 1, 2), (1, 0, 2, 2, 0), (2, 1, 0, 0, 1)];
    let mut out = Vec::with_capacity(3);
    for (a, f1, h1, f2, h2) in table {
        let star_dh = hodge_star(&dual_ext_d(&p.h[a])?);
        let bracket = iota(f1, h1)?.sub(&iota(f2, h2)?)?.scale(two);
        out.push(star_dh.add(&bracket)?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

pub fn su2_ym_conditions<T: Real>(c: &Connection<T>, wedge_tol: f64) -> Result<Su2Conditions> {
    let p = su2_decompose(c)?;
    let r = su2_residual_forms(&p)?;
    let f = &p.forms;
    let wedge_l2 = [(1, 2), (2, 0), (0, 1)].map(|(a, b)| wedge_compose(&f[a], &f[b]).map(|w| w.l2_norm().as_f64()));
    let wedge_l2 = [wedge_l2[0].clone()?, wedge_l2[1].clone()?, wedge_l2[2].clone()?];

    let general = ym_residual(c);
    let basis = PauliBasis::<T>::new();
    let grid = c.grid();
    let n = grid.node_count();
    let mut discrepancy = T::zero();
    for (a, ra) in r.iter().enumerate() {
        let mut g = LieForm::zeros(grid, 1, 1, ValueClass::General);
        for comp in 0..2 {
            for i in 0..n {
                let x = basis.coordinates(&general.at(comp, i))[a];
                g.component_mut(comp)[i] = CMatrix::scalar(Complex::new(x, T::zero()));
            }
        }
        discrepancy = discrepancy.max(g.add(ra)?.l2_norm());
    }
    Ok(Su2Conditions {
        residual_l2: [0, 1, 2].map(|a| r[a].l2_norm().as_f64()),
        wedge_free: wedge_l2.iter().all(|&w| w <= wedge_tol),
        wedge_l2,
        general_residual_l2: general.l2_norm().as_f64(),
        discrepancy: discrepancy.as_f64(),
    })
}

/// Random smooth su(2) field with `β = fα`, `γ = gα` pointwise, so `E ∧ E = 0`
/// while the bracket terms of the residual stay nonzero.
pub fn random_su2_ansatz<T: Real, R: Rng>(rng: &mut R, grid: TorusGrid) -> Result<Connection<T>> {
    let scalar = |rng: &mut R, degree: usize| -> LieForm<T> {
        let f = random_smooth_form::<T, _>(rng, grid, degree, 1, 1);
        // u(1) values are i·r; rotate to real scalars
        f.map(|m| CMatrix::scalar(Complex::new(m[(0, 0)].im, T::zero())))
            .with_class(ValueClass::General)
            .expect("general class")
    };
    let alpha = scalar(rng, 1);
    let f = scalar(rng, 0);
    let g = scalar(rng, 0);
    let beta = wedge_compose(&f, &alpha)?;
    let gamma = wedge_compose(&g, &alpha)?;
    Ok(su2_potential(&alpha, &beta, &gamma)?.connection)
}

/// Which torus family to sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorusFamily {
    /// `α̃ = sin(πx) dy + cos(πy) dx`, sampled literally (discontinuous across `y = 0`).
    #[default]
    Seamed,
    /// Smooth closed substitute `α = π dx`.
    Smooth,
}

impl TorusFamily {
    /// Scalar coefficients `(α_x, α_y)` at a point of the torus.
    fn alpha(self, x: f64, y: f64) -> (f64, f64) {
        let (x, y) = (x - x.floor(), y - y.floor());
        match self {
            TorusFamily::Seamed => ((std::f64::consts::PI * y).cos(), (std::f64::consts::PI * x).sin()),
            TorusFamily::Smooth => (std::f64::consts::PI, 0.0),
        }
    }

    /// Algebra direction `t(e₁ + λ(1−t)e₂)`.
    fn direction(t: f64, lambda: f64) -> CMatrix<f64> {
        let b = PauliBasis::<f64>::new();
        (*b.e[0].matrix() + b.e[1].matrix().scale(lambda * (1.0 - t))).scale(t)
    }

    pub fn connection(self, grid: TorusGrid, t: f64, lambda: f64) -> Result<Connection<f64>> {
        let dir = Self::direction(t, lambda);
        Connection::from_fn(grid, 2, |comp, x, y| {
            let (ax, ay) = self.alpha(x, y);
            dir.scale(if comp == 0 { ax } else { ay })
        })
    }

    pub fn analytic_potential(self, t: f64, lambda: f64) -> AnalyticTorusPotential<f64> {
        let dir = Self::direction(t, lambda);
        AnalyticTorusPotential::new(2, move |x, y| {
            let (ax, ay) = self.alpha(x, y);
            [dir.scale(ax), dir.scale(ay)]
        })
    }

    pub fn curve(self, grid: TorusGrid, lambda: f64) -> ConnectionCurve<f64> {
        ConnectionCurve::new(grid, 2, move |t| Ok(self.connection(grid, t, lambda)?.potential().clone()))
    }
}

/// One sample of a torus family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusSample {
    pub t: f64,
    pub curvature_l2: f64,
    pub ym_residual_l2: f64,
    pub covariant_residual_l2: f64,
    pub flat: bool,
    pub su2: Su2Conditions,
    /// Share of `‖K‖²` on the two node rows on either side of the `y` seam.
    pub seam_curvature_fraction: f64,
}

/// Holonomies of one endpoint connection around the torus generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointHolonomy {
    pub t: f64,
    pub basepoint: [f64; 2],
    /// Row-major `[re, im]` entries.
    pub x_generator: Vec<[f64; 2]>,
    pub y_generator: Vec<[f64; 2]>,
    pub x_trace: [f64; 2],
    pub y_trace: [f64; 2],
}

/// Summary of `h₁` for the coefficient `α` of `e₁`: discrete Stokes forces
/// its mean to vanish.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesProbe {
    pub h1_mean: f64,
    pub h1_min: f64,
    pub h1_max: f64,
    /// `|α_x(y→1⁻) − α_x(y=0)|` for the sampled family.
    pub seam_jump: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub family: TorusFamily,
    pub lambda: f64,
    pub grid: usize,
    pub steps: usize,
    pub samples: Vec<TorusSample>,
    pub endpoints: Vec<EndpointHolonomy>,
    pub jets: JetSummary,
    pub stokes: StokesProbe,
}

pub struct TorusReportConfig {
    pub family: TorusFamily,
    pub lambda: f64,
    pub grid: TorusGrid,
    pub steps: usize,
    pub t_small: f64,
    pub flat_tol: f64,
}

fn seam_fraction(k: &LieForm<f64>) -> f64 {
    let grid = k.grid();
    let n = grid.n();
    let total: f64 = k.component(0).iter().map(|m| m.re_inner(m)).sum();
    if total == 0.0 {
        return 0.0;
    }
    let near: f64 = (0..grid.node_count())
        .filter(|&i| {
            let l = grid.node(i).1;
            l < 2 || l + 2 >= n
        })
        .map(|i| k.at(0, i).re_inner(&k.at(0, i)))
        .sum();
    near / total
}

fn endpoint(family: TorusFamily, t: f64, lambda: f64, steps: usize) -> Result<EndpointHolonomy> {
    let pot = family.analytic_potential(t, lambda);
    let base = (0.25, 0.25);
    let gx = parallel_transport(&pot, &ParametricPath::torus_generator(0, base, 1), steps)?;
    let gy = parallel_transport(&pot, &ParametricPath::torus_generator(1, base, 1), steps)?;
    let entries = |m: &CMatrix<f64>| m.row_major().iter().map(|z| [z.re, z.im]).collect();
    let tr = |m: &CMatrix<f64>| [m.trace().re, m.trace().im];
    Ok(EndpointHolonomy {
        t,
        basepoint: [base.0, base.1],
        x_generator: entries(&gx),
        y_generator: entries(&gy),
        x_trace: tr(&gx),
        y_trace: tr(&gy),
    })
}

/// Evaluates the torus family at every `t` without asserting flatness claims.
pub fn torus_family_report(cfg: &TorusReportConfig, ts: &[f64]) -> Result<ClaimReport> {
    if let Some(bad) = ts.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::InvalidParameter(format!("sample time {bad} outside [0, 1]")));
    }
    let samples = ts
        .iter()
        .map(|&t| {
            let c = cfg.family.connection(cfg.grid, t, cfg.lambda)?;
            let k = curvature(&c);
            let curvature_l2 = k.l2_norm();
            Ok(TorusSample {
                t,
                curvature_l2,
                ym_residual_l2: ym_residual(&c).l2_norm(),
                covariant_residual_l2: ym_residual_covariant(&c).l2_norm(),
                flat: curvature_l2 <= cfg.flat_tol,
                su2: su2_ym_conditions(&c, 1e-12)?,
                seam_curvature_fraction: seam_fraction(k.form()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let endpoints = vec![endpoint(cfg.family, 0.0, cfg.lambda, cfg.steps)?, endpoint(cfg.family, 1.0, cfg.lambda, cfg.steps)?];
    let curve = cfg.family.curve(cfg.grid, cfg.lambda);
    let jets = extract_jets(&curve, cfg.t_small)?;
    let jets = check_ym_curve(&jets, &Connection::trivial(cfg.grid, 2))?;

    let scalar_alpha = LieForm::scalar_from_fn(cfg.grid, 1, |comp, x, y| {
        let (ax, ay) = cfg.family.alpha(x, y);
        if comp == 0 { ax } else { ay }
    });
    let h1 = ext_d(&scalar_alpha)?.scalar_values(0)?;
    let n = h1.len() as f64;
    let eps = 1e-12;
    let seam_jump = (cfg.family.alpha(0.0, 1.0 - eps).0 - cfg.family.alpha(0.0, 0.0).0).abs();
    let stokes = StokesProbe {
        h1_mean: h1.iter().sum::<f64>() / n,
        h1_min: h1.iter().cloned().fold(f64::INFINITY, f64::min),
        h1_max: h1.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        seam_jump: (seam_jump * 1e9).round() / 1e9,
    };
    Ok(ClaimReport {
        family: cfg.family,
        lambda: cfg.lambda,
        grid: cfg.grid.n(),
        steps: cfg.steps,
        samples,
        endpoints,
        jets,
        stokes,
    })
}

impl ClaimReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,curvature_l2,residual_l2\n");
        for s in &self.samples {
            let _ = writeln!(out, "{:e},{:e},{:e}", s.t, s.curvature_l2, s.ym_residual_l2);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "family = {:?}, lambda = {}, N = {}, steps = {}", self.family, self.lambda, self.grid, self.steps);
        for s in &self.samples {
            let _ = writeln!(
                out,
                "t = {:.4}  curvature_l2 = {:.6e}  residual_l2 = {:.6e}  covariant_residual_l2 = {:.6e}  flat = {}  su2_residual_l2 = [{:.3e}, {:.3e}, {:.3e}]  path_discrepancy = {:.3e}  seam_fraction = {:.4}",
                s.t,
                s.curvature_l2,
                s.ym_residual_l2,
                s.covariant_residual_l2,
                s.flat,
                s.su2.residual_l2[0],
                s.su2.residual_l2[1],
                s.su2.residual_l2[2],
                s.su2.discrepancy,
                s.seam_curvature_fraction
            );
        }
        for e in &self.endpoints {
            let _ = writeln!(
                out,
                "holonomy t = {}  basepoint = ({}, {})  tr(x-loop) = {:.10} {:+.10}i  tr(y-loop) = {:.10} {:+.10}i",
                e.t, e.basepoint[0], e.basepoint[1], e.x_trace[0], e.x_trace[1], e.y_trace[0], e.y_trace[1]
            );
        }
        let j = &self.jets;
        let _ = writeln!(
            out,
            "jets: |nabla E1| = {:.3e}  |delta E1| = {:.3e}  |delta C_E| = {:.3e}  |nabla C_E| = {:.3e}  |C_E| = {:.3e}  |harm E1| = {:.3e}",
            j.nabla_e1, j.delta_e1, j.delta_c_e, j.nabla_c_e, j.c_e_l2, j.harmonic_projection_e1
        );
        let s = &self.stokes;
        let _ = writeln!(
            out,
            "stokes: mean h1 = {:.3e}  h1 range = [{:.6}, {:.6}]  seam jump = {}",
            s.h1_mean, s.h1_min, s.h1_max, s.seam_jump
        );
        out
    }
}
