//! Invariant suites run by `verify`, one per acceptance area.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use gaugecalc::algebra::{bracket, levi_civita};
use gaugecalc::curves::{
    check_flat_curve, check_ym_curve, extract_jets, gauge_orbit_curve, random_su2_ansatz, su2_ym_conditions,
    ConnectionCurve, TorusFamily, DEFAULT_T_SMALL,
};
use gaugecalc::gauge::{
    codifferential, covariant_d, curvature, e_dagger, bracket_action, harmonic_kernel_dim, ym_functional,
    ym_residual, ym_residual_covariant,
};
use gaugecalc::grid_forms::{
    ext_d, hodge_star, interior, l2_inner, random_nodal_form, random_smooth_form, sharp, wedge_compose, LieForm,
    DifferenceScheme, TorusGrid, ValueClass,
};
use gaugecalc::holonomy::{
    aharonov_bohm_monodromy, parallel_transport, wong_evolve, AnalyticTorusPotential, ParametricPath,
};
use gaugecalc::{CMatrix, Connection, PauliBasis};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliResult;
use crate::report::{Check, Suite};

/// Inputs shared by all suites.
#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub seed: u64,
    /// Base grid for adjointness, residual, perturbation and ansatz suites.
    pub grid: usize,
    pub tolerances: BTreeMap<String, f64>,
}

impl SuiteParams {
    pub fn new(seed: u64, grid: usize) -> Self {
        Self { seed, grid, tolerances: crate::config::CommandKind::Verify.default_tolerances() }
    }

    fn tol(&self, key: &str) -> f64 {
        self.tolerances[key]
    }

    /// Independent stream per suite.
    fn rng(&self, suite: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(suite as u64);
        rng
    }

    fn base_grid(&self) -> CliResult<TorusGrid> {
        Ok(TorusGrid::new(self.grid)?)
    }
}

pub const SUITE_NAMES: [&str; 9] = [
    "structure-constants",
    "discrete-calculus",
    "adjointness",
    "yang-mills-residual",
    "hodge-kernel",
    "perturbation-classes",
    "su2-ansatz",
    "aharonov-bohm",
    "wong",
];

/// Runs suite `id` in `1..=9`.
pub fn run_suite(id: u32, p: &SuiteParams) -> CliResult<Suite> {
    match id {
        1 => structure_constants(p),
        2 => discrete_calculus(p),
        3 => adjointness(p),
        4 => yang_mills_residual(p),
        5 => hodge_kernel(p),
        6 => perturbation_classes(p),
        7 => su2_ansatz(p),
        8 => aharonov_bohm(p),
        9 => wong(p),
        _ => Err(crate::error::CliError::Invalid(format!("no suite {id}"))),
    }
}

pub fn run_all(p: &SuiteParams) -> CliResult<Vec<Suite>> {
    (1..=SUITE_NAMES.len() as u32).map(|id| run_suite(id, p)).collect()
}

fn e(a: usize) -> CMatrix {
    *PauliBasis::new().e[a].matrix()
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

fn structure_constants(p: &SuiteParams) -> CliResult<Suite> {
    let mut s = Suite::new(1, SUITE_NAMES[0]);
    let b = PauliBasis::new();
    let mut defect = 0.0f64;
    for a in 0..3 {
        for c in 0..3 {
            let lhs = bracket(&b.e[a], &b.e[c])?;
            let rhs = (0..3).fold(CMatrix::zeros(2), |acc, d| acc + b.e[d].matrix().scale(-2.0 * levi_civita(a, c, d) as f64));
            defect = defect.max((*lhs.matrix() - rhs).max_abs());
        }
    }
    s.push(Check::at_most("bracket_table_defect", defect, p.tol("structure_constants")));
    Ok(s)
}

/// Real scalar 1-form with random nodal values.
fn random_scalar_one_form(rng: &mut ChaCha8Rng, grid: TorusGrid) -> LieForm<f64> {
    random_nodal_form::<f64, _>(rng, grid, 1, 1)
        .map(|m| CMatrix::scalar(Complex::new(m[(0, 0)].im, 0.0)))
        .with_class(ValueClass::General)
        .expect("general class accepts any values")
}

/// `max_θ |σ(θ)|` of the one-dimensional difference stencil.
pub fn d_operator_norm(g: TorusGrid) -> f64 {
    let n = g.n() as f64;
    match g.scheme() {
        DifferenceScheme::Biased => 4.0 * n,
        DifferenceScheme::Central => n,
    }
}

/// `max ‖d d f‖` and `max ‖d d f‖ / (‖D‖² ‖f‖)` over `count` random nodal 0-forms.
pub fn d_squared_defects(rng: &mut ChaCha8Rng, g: TorusGrid, count: usize) -> CliResult<(f64, f64)> {
    let d_norm = d_operator_norm(g);
    let (mut abs, mut rel) = (0.0f64, 0.0f64);
    for _ in 0..count {
        let f = random_nodal_form::<f64, _>(rng, g, 0, 2);
        let residue = ext_d(&ext_d(&f)?)?.l2_norm();
        abs = abs.max(residue);
        rel = rel.max(residue / (d_norm * d_norm * f.l2_norm()));
    }
    Ok((abs, rel))
}

fn discrete_calculus(p: &SuiteParams) -> CliResult<Suite> {
    let mut s = Suite::new(2, SUITE_NAMES[1]);
    let mut rng = p.rng(2);
    let g = TorusGrid::new(64)?;
    let fields = 50;
    let (dd, dd_rel) = d_squared_defects(&mut rng, g, fields)?;
    let (mut star, mut iota) = (0.0f64, 0.0f64);
    for i in 0..fields {
        let k = i % 2;

        let a = random_nodal_form::<f64, _>(&mut rng, g, i % 3, 2);
        let b = random_nodal_form::<f64, _>(&mut rng, g, i % 3, 2);
        star = star.max((l2_inner(&hodge_star(&a), &hodge_star(&b))? - l2_inner(&a, &b)?).abs());

        let lambda = random_scalar_one_form(&mut rng, g);
        let xi = random_nodal_form::<f64, _>(&mut rng, g, k, 2);
        let zeta = random_nodal_form::<f64, _>(&mut rng, g, k + 1, 2);
        let lambda_m = lambda.tensor(&CMatrix::identity(2), ValueClass::General)?;
        let lhs = l2_inner(&wedge_compose(&lambda_m, &xi)?, &zeta)?;
        let rhs = l2_inner(&xi, &interior(&sharp(&lambda)?, &zeta)?)?;
        iota = iota.max((lhs - rhs).abs());
    }
    s.push(Check::at_most("d_squared_relative_N64", dd_rel, p.tol("d_squared")));
    s.push(Check::info("d_squared_l2_max_N64", dd));
    s.push(Check::at_most("star_isometry_defect_N64", star, p.tol("star_isometry")));
    s.push(Check::at_most("iota_pairing_defect_N64", iota, p.tol("iota_pairing")));

    // sin(2πx) dy and cos(2π(x+2y)) dx against their exact derivatives
    let errors: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&n| -> CliResult<f64> {
            let g = TorusGrid::new(n)?;
            let w = LieForm::scalar_from_fn(g, 1, |c, x: f64, y: f64| match c {
                0 => (TAU * (x + 2.0 * y)).cos(),
                _ => (TAU * x).sin(),
            });
            let exact = LieForm::scalar_from_fn(g, 2, |_, x: f64, y: f64| {
                TAU * (TAU * x).cos() + 2.0 * TAU * (TAU * (x + 2.0 * y)).sin()
            });
            Ok(ext_d(&w)?.sub(&exact)?.l2_norm())
        })
        .collect::<CliResult<_>>()?;
    let (lo, hi) = (p.tol("convergence_ratio_min"), p.tol("convergence_ratio_max"));
    s.push(Check::within("d_error_ratio_N32_N64", errors[0] / errors[1], lo, hi));
    s.push(Check::within("d_error_ratio_N64_N128", errors[1] / errors[2], lo, hi));
    Ok(s)
}

fn adjointness(p: &SuiteParams) -> CliResult<Suite> {
    let mut s = Suite::new(3, SUITE_NAMES[2]);
    let mut rng = p.rng(3);
    let g = p.base_grid()?;
    let (mut nabla, mut dagger) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let k = i % 2;
        let c = Connection::new(random_nodal_form(&mut rng, g, 1, 2))?;
        let eta = random_nodal_form::<f64, _>(&mut rng, g, k, 2);
        let omega = random_nodal_form::<f64, _>(&mut rng, g, k + 1, 2);
        let lhs = l2_inner(&covariant_d(&c, &eta)?, &omega)?;
        let rhs = l2_inner(&eta, &codifferential(&c, &omega)?)?;
        nabla = nabla.max((lhs - rhs).abs());

        let b = random_nodal_form::<f64, _>(&mut rng, g, 1, 2);
        let w = random_nodal_form::<f64, _>(&mut rng, g, 2, 2);
        let lhs = l2_inner(&bracket_action(c.potential(), &b)?, &w)?;
        let rhs = l2_inner(&b, &e_dagger(c.potential(), &w)?)?;
        dagger = dagger.max((lhs - rhs).abs());
    }
    s.push(Check::at_most("covariant_d_vs_codifferential", nabla, p.tol("adjointness")));
    s.push(Check::at_most("e_bracket_vs_e_dagger", dagger, p.tol("adjointness")));
    Ok(s)
}

fn constant_connection(g: TorusGrid, ex: CMatrix, ey: CMatrix) -> CliResult<Connection> {
    Ok(Connection::new(LieForm::constant(g, 1, &[ex, ey], ValueClass::AntiHermitian)?)?)
}

fn yang_mills_residual(p: &SuiteParams) -> CliResult<Suite> {
    let mut s = Suite::new(4, SUITE_NAMES[3]);
    let g = p.base_grid()?;
    let tol = p.tol("residual");
    let zero = CMatrix::zeros(2);
    let mut cases = vec![("zero".to_string(), Connection::trivial(g, 2)), ("pi_dx_e1".to_string(), constant_connection(g, e(0).scale(PI), zero)?)];
    for lambda in [0.5, 1.0, 2.0] {
        cases.push((format!("pi_dx_e1_plus_{lambda}_e2"), constant_connection(g, (e(0) + e(1).scale(lambda)).scale(PI), zero)?));
    }
    for (name, c) in &cases {
        s.push(Check::at_most(format!("residual_{name}"), ym_residual(c).l2_norm(), tol));
        s.push(Check::at_most(format!("covariant_residual_{name}"), ym_residual_covariant(c).l2_norm(), tol));
    }

    // YM(E + εB) is a quartic in ε, so the five-point derivative is exact up to rounding
    let mut rng = p.rng(4);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let e0 = random_smooth_form::<f64, _>(&mut rng, g, 1, 2, 2);
        let b = random_smooth_form::<f64, _>(&mut rng, g, 1, 2, 2);
        let c = Connection::new(e0.clone())?;
        let eps = 1e-3;
        let ym = |s: f64| -> CliResult<f64> { Ok(ym_functional(&Connection::new(e0.add(&b.scale(s * eps))?)?)) };
        let fd = (8.0 * (ym(1.0)? - ym(-1.0)?) - (ym(2.0)? - ym(-2.0)?)) / (12.0 * eps);
        let exact = 2.0 * l2_inner(&covariant_d(&c, &b)?, curvature(&c).form())?;
        worst = worst.max((fd - exact).abs() / exact.abs());
    }
    s.push(Check::at_most("first_variation_relative_error", worst, p.tol("first_variation")));
    Ok(s)
}

fn hodge_kernel(p: &SuiteParams) -> CliResult<Suite> {
    let mut s = Suite::new(5, SUITE_NAMES[4]);
    let g = TorusGrid::new(16)?;
    let threshold = p.tol("harmonic_threshold");
    for (m, expected) in [(1usize, [1usize, 2, 1]), (2, [4, 8, 4])] {
        let c = Connection::trivial(g, m);
        for (k, want) in expected.iter().enumerate() {
            s.push(Check::equals(format!("kernel_dim_m{m}_k{k}_N16"), harmonic_kernel_dim(&c, k, threshold)?, *want));
        }
    }
    Ok(s)
}

fn perturbation_classes(p: &SuiteParams) -> CliResult<Suite> {
    let mut s = Suite::new(6, SUITE_NAMES[5]);
    let g = p.base_grid()?;
    let zero1 = LieForm::zeros(g, 1, 2, ValueClass::AntiHermitian);
    let constant = |ex: CMatrix, ey: CMatrix| LieForm::constant(g, 1, &[ex, ey], ValueClass::AntiHermitian);
    let ts: Vec<f64> = (0..=4).map(|k| k as f64 / 4.0).collect();
    let tol_ce = p.tol("c_e");

    let flat_curves = [
        ("flat_curve_t_pi_dx_e1", ConnectionCurve::polynomial(constant(e(0).scale(PI), CMatrix::zeros(2))?, zero1.clone())?),
        (
            "flat_curve_t_dx_e1_t2_dy_e1",
            ConnectionCurve::polynomial(constant(e(0).scale(PI), CMatrix::zeros(2))?, constant(CMatrix::zeros(2), e(0).scale(PI))?)?,
        ),
    ];
    for (name, curve) in &flat_curves {
        let r = check_flat_curve(curve, &ts, DEFAULT_T_SMALL, p.tol("flat"))?;
        s.push(Check::at_most(format!("{name}_c_e"), r.c_e_l2.unwrap_or(f64::INFINITY), tol_ce));
    }

    let base = Connection::trivial(g, 2);
    let ah0 = |f: &dyn Fn(f64) -> CMatrix| LieForm::from_fn(g, 0, 2, ValueClass::AntiHermitian, |_, x: f64, _| f(x));
    let orbits = [
        ("gauge_orbit_a1_sin", ah0(&|x| e(0).scale((TAU * x).sin()))?, LieForm::zeros(g, 0, 2, ValueClass::AntiHermitian)),
        (
            "gauge_orbit_a1_a2",
            ah0(&|x| e(0).scale((TAU * x).sin()) + e(1).scale((TAU * x).cos()))?,
            ah0(&|x| e(2).scale((TAU * x).cos()))?,
        ),
    ];
    for (name, a1, a2) in &orbits {
        let jets = extract_jets(&gauge_orbit_curve(a1, a2)?, DEFAULT_T_SMALL)?;
        let summary = check_ym_curve(&jets, &base)?;
        s.push(Check::at_most(format!("{name}_harmonic_e1"), summary.harmonic_projection_e1, p.tol("harmonic_projection")));
        s.push(Check::at_most(format!("{name}_c_e"), summary.c_e_l2, tol_ce));
    }

    for lambda in [0.5, 1.0, 2.0] {
        let jets = extract_jets(&TorusFamily::Smooth.curve(g, lambda), DEFAULT_T_SMALL)?;
        let summary = check_ym_curve(&jets, &base)?;
        s.push(Check::at_most(format!("ym_curve_lambda_{lambda}_nabla_e1"), summary.nabla_e1, p.tol("nabla_e1")));
    }
    Ok(s)
}

fn su2_ansatz(p: &SuiteParams) -> CliResult<Suite> {
    let mut s = Suite::new(7, SUITE_NAMES[6]);
    let g = p.base_grid()?;
    let mut rng = p.rng(7);
    let mut worst = 0.0f64;
    let mut wedge_free = 0;
    for _ in 0..20 {
        let c = random_su2_ansatz::<f64, _>(&mut rng, g)?;
        let r = su2_ym_conditions(&c, 1e-12)?;
        worst = max([worst, r.discrepancy]);
        wedge_free += usize::from(r.wedge_free);
    }
    s.push(Check::at_most("general_vs_ansatz_residual_20_fields", worst, p.tol("su2_paths")));
    s.push(Check::equals("wedge_free_fields", wedge_free, 20));
    let k0 = curvature(&TorusFamily::Seamed.connection(g, 0.0, 1.0)?).l2_norm();
    s.push(Check::at_most("torus_family_t0_curvature", k0, p.tol("flat")));
    Ok(s)
}

fn aharonov_bohm(p: &SuiteParams) -> CliResult<Suite> {
    let mut s = Suite::new(8, SUITE_NAMES[7]);
    for k in [0.5, 0.37, -1.2] {
        for n in [1i32, 2, -1] {
            let r = aharonov_bohm_monodromy(Complex::new(k, 0.0), n, 1000 * n.unsigned_abs() as usize)?;
            s.push(Check::at_most(format!("monodromy_k{k}_n{n}"), r.error, p.tol("ab")));
        }
    }
    Ok(s)
}

fn wong(p: &SuiteParams) -> CliResult<Suite> {
    let mut s = Suite::new(9, SUITE_NAMES[8]);
    let c = |x: f64, y: f64| Complex::new(x, y);
    let pot = AnalyticTorusPotential::constant(e(2), CMatrix::zeros(2));
    let line = ParametricPath::segment(c(0.0, 0.0), c(1.0, 0.0));
    let traj = wong_evolve(&pot, &line, &e(0), 1000)?;
    let oracle = max(traj.times.iter().zip(&traj.states).map(|(t, st)| {
        (*st - (e(0).scale((2.0 * t).cos()) + e(1).scale((2.0 * t).sin()))).max_abs()
    }));
    s.push(Check::at_most("constant_a_oracle", oracle, p.tol("wong_oracle")));

    let mut rng = p.rng(9);
    let coeffs: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
    let general = AnalyticTorusPotential::new(2, move |x: f64, y: f64| {
        [
            e(0).scale(coeffs[0] * (TAU * y).sin()) + e(2).scale(coeffs[1]),
            e(1).scale(coeffs[2] * (TAU * x).cos()) + e(0).scale(coeffs[3]),
        ]
    });
    let circle = ParametricPath::circle(c(0.5, 0.5), 0.25, 2);
    let i0 = e(0).scale(0.3) + e(1);
    let traj = wong_evolve(&general, &circle, &i0, 1000)?;
    s.push(Check::at_most("norm_drift", max([traj.norm_drift(), wong_evolve(&pot, &line, &e(0), 1000)?.norm_drift()]), p.tol("wong_norm")));
    let g = parallel_transport(&general, &circle, 1000)?;
    s.push(Check::at_most("ad_consistency", (*traj.last() - g * i0 * g.adjoint()).max_abs(), p.tol("wong_ad")));

    let flat = AnalyticTorusPotential::constant(e(0).scale(PI), CMatrix::zeros(2));
    let small = ParametricPath::circle(c(0.3, 0.4), 0.1, 1);
    let i0 = e(1) + e(2).scale(0.5);
    let shift = (*wong_evolve(&flat, &small, &i0, 1000)?.last() - i0).max_abs();
    s.push(Check::at_most("flat_contractible_shift", shift, p.tol("wong_flat")));
    Ok(s)
}
