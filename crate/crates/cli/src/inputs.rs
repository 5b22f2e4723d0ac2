//! Text descriptions of loops (`family:params`) and fields.

use std::f64::consts::PI;

use gaugecalc::curves::{random_su2_ansatz, TorusFamily};
use gaugecalc::grid_forms::{random_smooth_form, LieForm, TorusGrid, ValueClass};
use gaugecalc::holonomy::{aharonov_casher_potential, AnalyticTorusPotential, MeromorphicPotential, ParametricPath, Potential};
use gaugecalc::{CMatrix, Connection, PauliBasis};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::ComplexArg;
use crate::error::{CliError, CliResult};

fn numbers(family: &str, params: &str, min: usize, max: usize) -> CliResult<Vec<f64>> {
    let values = if params.trim().is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Invalid(format!("`{family}`: cannot parse number {p:?}"))))
            .collect::<CliResult<Vec<_>>>()?
    };
    if values.len() < min || values.len() > max {
        let want = if min == max { format!("{min}") } else { format!("{min} to {max}") };
        return Err(CliError::Invalid(format!("`{family}` takes {want} parameters, got {}", values.len())));
    }
    Ok(values)
}

fn winding(family: &str, v: Option<&f64>) -> CliResult<i32> {
    match v {
        None => Ok(1),
        Some(&w) if w.fract() == 0.0 && w != 0.0 && w.abs() < 1e6 => Ok(w as i32),
        Some(w) => Err(CliError::Invalid(format!("`{family}`: winding must be a nonzero integer, got {w}"))),
    }
}

fn single_loop(desc: &str) -> CliResult<ParametricPath<f64>> {
    if let Some(rest) = desc.strip_prefix('~') {
        return Ok(single_loop(rest)?.reversed());
    }
    let (family, params) = desc
        .split_once(':')
        .ok_or_else(|| CliError::Invalid(format!("loop {desc:?} must have the form family:params")))?;
    let c = |x: f64, y: f64| Complex::new(x, y);
    match family {
        "x" | "y" => {
            let v = numbers(family, params, 2, 3)?;
            let axis = usize::from(family == "y");
            Ok(ParametricPath::torus_generator(axis, (v[0], v[1]), winding(family, v.get(2))?))
        }
        "circle" => {
            let v = numbers(family, params, 3, 4)?;
            if v[2].is_nan() || v[2] <= 0.0 {
                return Err(CliError::Invalid(format!("`circle`: radius must be positive, got {}", v[2])));
            }
            Ok(ParametricPath::circle(c(v[0], v[1]), v[2], winding(family, v.get(3))?))
        }
        "segment" => {
            let v = numbers(family, params, 4, 4)?;
            Ok(ParametricPath::segment(c(v[0], v[1]), c(v[2], v[3])))
        }
        other => Err(CliError::Invalid(format!("unknown loop family `{other}` (x, y, circle, segment)"))),
    }
}

/// Parses `family:params` pieces joined by `+`, each optionally prefixed by `~` (reversal).
///
/// Families: `x:x0,y0[,n]`, `y:x0,y0[,n]`, `circle:cx,cy,r[,n]`, `segment:x0,y0,x1,y1`.
pub fn parse_loop(desc: &str) -> CliResult<ParametricPath<f64>> {
    let bytes = desc.as_bytes();
    let mut pieces = Vec::new();
    let mut start = 0;
    for i in 0..bytes.len() {
        if bytes[i] == b'+' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphabetic() || *b == b'~') {
            pieces.push(&desc[start..i]);
            start = i + 1;
        }
    }
    pieces.push(&desc[start..]);
    let mut path = single_loop(pieces[0].trim())?;
    for p in &pieces[1..] {
        path = path.then(&single_loop(p.trim())?);
    }
    Ok(path)
}

/// Potential for path transport.
pub enum PathPotential {
    Torus(AnalyticTorusPotential<f64>),
    Plane(MeromorphicPotential<f64>),
}

impl PathPotential {
    pub fn as_dyn(&self) -> &dyn Potential<f64> {
        match self {
            PathPotential::Torus(p) => p,
            PathPotential::Plane(p) => p,
        }
    }

    /// Constant `(A_x, A_y)` when the potential has one.
    pub fn constant(&self) -> Option<[CMatrix; 2]> {
        match self {
            PathPotential::Torus(p) => {
                let a = p.coefficients(0.0, 0.0);
                let probes = [(0.37, 0.11), (0.5, 0.93), (0.81, 0.42)];
                probes.iter().all(|&(x, y)| p.coefficients(x, y) == a).then_some(a)
            }
            PathPotential::Plane(_) => None,
        }
    }
}

fn su2(x: [f64; 3]) -> CMatrix {
    *PauliBasis::new().combine(x).matrix()
}

/// Path potentials: `zero`, `const:ax1,ax2,ax3,ay1,ay2,ay3`, `torus:t`, `ab:k`, `ac:lambda`, `diag:k1,...`.
pub fn parse_path_potential(desc: &str, family: TorusFamily, lambda: f64) -> CliResult<PathPotential> {
    let (kind, params) = desc.split_once(':').unwrap_or((desc, ""));
    match kind {
        "zero" => {
            numbers(kind, params, 0, 0)?;
            Ok(PathPotential::Torus(AnalyticTorusPotential::constant(CMatrix::zeros(2), CMatrix::zeros(2))))
        }
        "const" => {
            let v = numbers(kind, params, 6, 6)?;
            Ok(PathPotential::Torus(AnalyticTorusPotential::constant(su2([v[0], v[1], v[2]]), su2([v[3], v[4], v[5]]))))
        }
        "torus" => {
            let t = numbers(kind, params, 1, 1)?[0];
            if !(0.0..=1.0).contains(&t) {
                return Err(CliError::Invalid(format!("`torus`: t must lie in [0, 1], got {t}")));
            }
            Ok(PathPotential::Torus(family.analytic_potential(t, lambda)))
        }
        "ab" => {
            let k: ComplexArg = params.parse().map_err(CliError::Invalid)?;
            Ok(PathPotential::Plane(MeromorphicPotential::aharonov_bohm(k.0)))
        }
        "ac" => {
            let l = numbers(kind, params, 1, 1)?[0];
            Ok(PathPotential::Plane(aharonov_casher_potential(l)))
        }
        "diag" => {
            let ks = params
                .split(',')
                .map(|p| p.parse::<ComplexArg>().map(|k| k.0).map_err(CliError::Invalid))
                .collect::<CliResult<Vec<_>>>()?;
            if ks.is_empty() || ks.len() > 4 {
                return Err(CliError::Invalid("`diag` takes 1 to 4 residues".into()));
            }
            Ok(PathPotential::Plane(MeromorphicPotential::diagonal_simple_pole(&ks)))
        }
        other => Err(CliError::Invalid(format!("unknown potential `{other}` (zero, const, torus, ab, ac, diag)"))),
    }
}

/// Grid connections: `zero[:m]`, `const:lambda`, `torus:t`, `random`, `ansatz`.
pub fn parse_grid_field(desc: &str, grid: TorusGrid, family: TorusFamily, lambda: f64, seed: u64) -> CliResult<Connection> {
    let (kind, params) = desc.split_once(':').unwrap_or((desc, ""));
    match kind {
        "zero" => {
            let m = numbers(kind, params, 0, 1)?.first().copied().unwrap_or(1.0);
            if !(m.fract() == 0.0 && (1.0..=4.0).contains(&m)) {
                return Err(CliError::Invalid(format!("`zero`: matrix size must be 1..=4, got {m}")));
            }
            Ok(Connection::trivial(grid, m as usize))
        }
        "const" => {
            let l = numbers(kind, params, 1, 1)?[0];
            let ex = su2([PI, PI * l, 0.0]);
            let form = LieForm::constant(grid, 1, &[ex, CMatrix::zeros(2)], ValueClass::AntiHermitian)?;
            Ok(Connection::new(form)?)
        }
        "torus" => {
            let t = numbers(kind, params, 1, 1)?[0];
            Ok(family.connection(grid, t, lambda)?)
        }
        "random" => {
            numbers(kind, params, 0, 0)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(Connection::new(random_smooth_form(&mut rng, grid, 1, 2, 2))?)
        }
        "ansatz" => {
            numbers(kind, params, 0, 0)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(random_su2_ansatz::<f64, _>(&mut rng, grid)?)
        }
        other => Err(CliError::Invalid(format!("unknown field `{other}` (zero, const, torus, random, ansatz)"))),
    }
}
