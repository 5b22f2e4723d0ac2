//! Command implementations. Each resolves defaults into the config (so the
//! echo is complete) and fills a [`Report`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gaugecalc::curves::{su2_ym_conditions, torus_family_report, TorusFamily, TorusReportConfig, DEFAULT_T_SMALL};
use gaugecalc::gauge::{harmonic_kernel_dim, residual_report};
use gaugecalc::grid_forms::TorusGrid;
use gaugecalc::holonomy::{aharonov_bohm_monodromy, parallel_transport, wong_evolve, ParametricPath};
use gaugecalc::{CMatrix, PauliBasis};
use serde_json::json;

use crate::config::{CommandKind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::{fmt_num, Check, Report, Suite};
use crate::inputs::{parse_grid_field, parse_loop, parse_path_potential, PathPotential};
use crate::suites::{run_all, SuiteParams};

/// Runs a validated config.
pub fn execute(cfg: &RunConfig) -> CliResult<Report> {
    let (cmd, tolerances) = cfg.validate()?;
    let mut cfg = cfg.clone();
    let seed = *cfg.seed.get_or_insert(0);
    let mut report = match cmd {
        CommandKind::Verify => verify(&mut cfg, &tolerances)?,
        CommandKind::TorusCurve => torus_curve(&mut cfg, &tolerances)?,
        CommandKind::Residual => residual(&mut cfg, &tolerances)?,
        CommandKind::Holonomy => holonomy(&mut cfg, &tolerances)?,
        CommandKind::Ab => ab(&mut cfg, &tolerances)?,
        CommandKind::Wong => wong(&mut cfg, &tolerances)?,
        CommandKind::Spectrum => spectrum(&mut cfg, &tolerances)?,
    };
    let mut echo = cfg;
    // the tolerance table is reported separately
    echo.tolerances.clear();
    echo.tol = None;
    let suites = std::mem::take(&mut report.suites);
    let mut full = Report::new(cmd.name(), seed, echo, tolerances);
    for s in suites {
        full.add_suite(s);
    }
    full.result = report.result;
    full.body_text = report.body_text;
    full.csv = report.csv;
    Ok(full)
}

fn scratch() -> Report {
    Report::new("", 0, RunConfig::default(), BTreeMap::new())
}

fn grid(cfg: &mut RunConfig, default: usize) -> CliResult<TorusGrid> {
    Ok(TorusGrid::new(*cfg.grid.get_or_insert(default))?)
}

fn verify(cfg: &mut RunConfig, tol: &BTreeMap<String, f64>) -> CliResult<Report> {
    let n = grid(cfg, 32)?.n();
    let params = SuiteParams { seed: cfg.seed.unwrap_or(0), grid: n, tolerances: tol.clone() };
    let mut r = scratch();
    for s in run_all(&params)? {
        r.add_suite(s);
    }
    let passed = r.suites.iter().filter(|s| s.passed()).count();
    r.result = json!({ "suites_passed": passed, "suites_total": r.suites.len() });
    Ok(r)
}

fn sample_times(samples: usize) -> CliResult<Vec<f64>> {
    if samples < 2 {
        return Err(CliError::Invalid(format!("`samples` must be at least 2 to include t = 0 and t = 1, got {samples}")));
    }
    Ok((0..samples).map(|i| i as f64 / (samples - 1) as f64).collect())
}

fn torus_curve(cfg: &mut RunConfig, tol: &BTreeMap<String, f64>) -> CliResult<Report> {
    let g = grid(cfg, 32)?;
    let steps = *cfg.steps.get_or_insert(1000);
    let lambda = *cfg.lambda.get_or_insert(1.0);
    let family = *cfg.family.get_or_insert(TorusFamily::Seamed);
    let ts = sample_times(*cfg.samples.get_or_insert(11))?;
    let rc = TorusReportConfig { family, lambda, grid: g, steps, t_small: DEFAULT_T_SMALL, flat_tol: tol["flat"] };
    let claim = torus_family_report(&rc, &ts)?;

    let mut s = Suite::new(1, "torus-claims");
    let first = &claim.samples[0];
    s.push(Check::at_most("t0_curvature_l2", first.curvature_l2, tol["flat"]));
    let su2 = claim.samples.iter().filter(|x| x.su2.wedge_free).map(|x| x.su2.discrepancy).fold(0.0, f64::max);
    s.push(Check::at_most("general_vs_ansatz_residual", su2, tol["su2_paths"]));

    let last = claim.samples.last().expect("at least two samples");
    let mut r = scratch();
    r.body_text = claim.to_text();
    let _ = writeln!(
        r.body_text,
        "claims: t=0 flat = {} (curvature_l2 = {}); t=1 flat = {} (curvature_l2 = {})",
        first.flat,
        fmt_num(first.curvature_l2),
        last.flat,
        fmt_num(last.curvature_l2)
    );
    r.csv = Some(claim.to_csv());
    r.result = serde_json::to_value(&claim).expect("claim report serializes");
    r.add_suite(s);
    Ok(r)
}

fn residual(cfg: &mut RunConfig, tol: &BTreeMap<String, f64>) -> CliResult<Report> {
    let g = grid(cfg, 32)?;
    let field = cfg.field.get_or_insert_with(|| "torus:1".into()).clone();
    let (family, lambda) = family_params(cfg, &field);
    let c = parse_grid_field(&field, g, family, lambda, cfg.seed.unwrap_or(0))?;
    let rr = residual_report(&c, tol["flat"]);
    let su2 = if c.dim() == 2 { su2_ym_conditions(&c, 1e-12).ok() } else { None };

    let mut r = scratch();
    let _ = writeln!(r.body_text, "field = {field}, N = {}, m = {}", g.n(), c.dim());
    let _ = writeln!(r.body_text, "ym_value = {}", fmt_num(rr.ym_value));
    let _ = writeln!(r.body_text, "curvature_l2 = {}", fmt_num(rr.curvature_l2));
    let _ = writeln!(r.body_text, "residual_l2 = {}", fmt_num(rr.residual_l2));
    let _ = writeln!(r.body_text, "covariant_residual_l2 = {}", fmt_num(rr.covariant_residual_l2));
    let _ = writeln!(r.body_text, "flat = {}", rr.flat);
    if let Some(s2) = &su2 {
        let _ = writeln!(
            r.body_text,
            "su2: residual_l2 = [{}, {}, {}], wedge_free = {}, discrepancy = {}",
            fmt_num(s2.residual_l2[0]),
            fmt_num(s2.residual_l2[1]),
            fmt_num(s2.residual_l2[2]),
            s2.wedge_free,
            fmt_num(s2.discrepancy)
        );
        if s2.wedge_free {
            let mut s = Suite::new(1, "su2-ansatz");
            s.push(Check::at_most("general_vs_ansatz_residual", s2.discrepancy, tol["su2_paths"]));
            r.add_suite(s);
        }
    }
    r.csv = Some(format!(
        "ym_value,curvature_l2,residual_l2,covariant_residual_l2,flat\n{:e},{:e},{:e},{:e},{}\n",
        rr.ym_value,
        rr.curvature_l2,
        rr.residual_l2,
        rr.covariant_residual_l2,
        u8::from(rr.flat)
    ));
    r.result = json!({ "field": field, "residual": rr, "su2": su2 });
    Ok(r)
}

fn entries(m: &CMatrix) -> Vec<[f64; 2]> {
    m.row_major().iter().map(|z| [z.re, z.im]).collect()
}

fn matrix_text(m: &CMatrix) -> String {
    let d = m.dim();
    let rows: Vec<String> = (0..d)
        .map(|i| {
            let cells: Vec<String> = (0..d).map(|j| format!("{:.12}{:+.12}i", m[(i, j)].re, m[(i, j)].im)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    rows.join(" ")
}

/// Family and weight, resolved into the echo only for `torus:` fields.
fn family_params(cfg: &mut RunConfig, field: &str) -> (TorusFamily, f64) {
    if field.starts_with("torus") {
        (*cfg.family.get_or_insert(TorusFamily::Seamed), *cfg.lambda.get_or_insert(1.0))
    } else {
        (cfg.family.unwrap_or_default(), cfg.lambda.unwrap_or(1.0))
    }
}

fn path_potential(cfg: &mut RunConfig, default: &str) -> CliResult<(String, PathPotential)> {
    let field = cfg.field.get_or_insert_with(|| default.into()).clone();
    let (family, lambda) = family_params(cfg, &field);
    let pot = parse_path_potential(&field, family, lambda)?;
    Ok((field, pot))
}

fn holonomy(cfg: &mut RunConfig, tol: &BTreeMap<String, f64>) -> CliResult<Report> {
    let steps = *cfg.steps.get_or_insert(1000);
    let (field, pot) = path_potential(cfg, "torus:1")?;
    if cfg.loops.is_empty() {
        cfg.loops = match pot {
            PathPotential::Torus(_) => vec!["x:0.25,0.25".into(), "y:0.25,0.25".into()],
            PathPotential::Plane(_) => vec!["circle:0,0,1".into()],
        };
    }
    let periodic = pot.as_dyn().periodic();
    let mut r = scratch();
    let mut s = Suite::new(1, "transport");
    let mut records = Vec::new();
    let mut csv = String::from("loop,closed,trace_re,trace_im,unitarity_defect\n");
    let _ = writeln!(r.body_text, "field = {field}, steps = {steps}");
    for (i, desc) in cfg.loops.iter().enumerate() {
        let path = parse_loop(desc)?;
        let closed = path.is_closed(periodic);
        let g = parallel_transport(pot.as_dyn(), &path, steps)?;
        let tr = g.trace();
        let defect = g.unitarity_defect();
        s.push(Check::at_most(format!("unitarity_loop_{i}"), defect, tol["unitarity"]));
        let _ = writeln!(
            r.body_text,
            "loop {i} `{desc}` closed = {closed}\n    matrix = {}\n    trace = {:.12}{:+.12}i  unitarity_defect = {}",
            matrix_text(&g),
            tr.re,
            tr.im,
            fmt_num(defect)
        );
        let _ = writeln!(csv, "{i},{},{:e},{:e},{:e}", u8::from(closed), tr.re, tr.im, defect);
        records.push(json!({ "loop": desc, "closed": closed, "matrix": entries(&g), "trace": [tr.re, tr.im], "unitarity_defect": defect }));
    }
    r.add_suite(s);
    r.csv = Some(csv);
    r.result = json!({ "field": field, "steps": steps, "loops": records });
    Ok(r)
}

fn ab(cfg: &mut RunConfig, tol: &BTreeMap<String, f64>) -> CliResult<Report> {
    let k = cfg.k.ok_or_else(|| CliError::Invalid("`ab` needs `k`".into()))?.0;
    let n = *cfg.winding.get_or_insert(1);
    if n == 0 {
        return Err(CliError::Invalid("`winding` must be nonzero".into()));
    }
    let steps = *cfg.steps.get_or_insert(1000 * n.unsigned_abs() as usize);
    let rec = aharonov_bohm_monodromy(k, n, steps)?;
    let mut s = Suite::new(1, "aharonov-bohm");
    s.push(Check::at_most("monodromy_error", rec.error, tol["ab"]));
    let mut r = scratch();
    let _ = writeln!(r.body_text, "k = {}{:+}i, winding = {n}, steps = {steps}", k.re, k.im);
    let _ = writeln!(r.body_text, "monodromy = {:.12}{:+.12}i", rec.monodromy[0], rec.monodromy[1]);
    let _ = writeln!(r.body_text, "expected  = {:.12}{:+.12}i", rec.expected[0], rec.expected[1]);
    let _ = writeln!(r.body_text, "error = {}", fmt_num(rec.error));
    let _ = writeln!(r.body_text, "flux (k = -flux/2pi) = {}{:+}i", fmt_num(rec.flux[0]), fmt_num(rec.flux[1]));
    r.csv = Some(format!(
        "k_re,k_im,winding,steps,monodromy_re,monodromy_im,expected_re,expected_im,error\n{:e},{:e},{n},{steps},{:e},{:e},{:e},{:e},{:e}\n",
        k.re, k.im, rec.monodromy[0], rec.monodromy[1], rec.expected[0], rec.expected[1], rec.error
    ));
    r.result = serde_json::to_value(&rec).expect("record serializes");
    r.add_suite(s);
    Ok(r)
}

fn wong(cfg: &mut RunConfig, tol: &BTreeMap<String, f64>) -> CliResult<Report> {
    let steps = *cfg.steps.get_or_insert(1000);
    let (field, pot) = path_potential(cfg, "const:0,0,1,0,0,0")?;
    if cfg.loops.is_empty() {
        cfg.loops = vec!["segment:0,0,1,0".into()];
    }
    if cfg.loops.len() > 1 {
        return Err(CliError::Invalid("`wong` takes one path".into()));
    }
    let desc = cfg.loops[0].clone();
    let path = parse_loop(&desc)?;
    let spin = *cfg.spin.get_or_insert([1.0, 0.0, 0.0]);
    let basis = PauliBasis::new();
    let i0 = *basis.combine(spin).matrix();
    let traj = wong_evolve(pot.as_dyn(), &path, &i0, steps)?;
    let g = parallel_transport(pot.as_dyn(), &path, steps)?;

    let mut s = Suite::new(1, "wong");
    s.push(Check::at_most("norm_drift", traj.norm_drift(), tol["wong_norm"]));
    s.push(Check::at_most("ad_consistency", (*traj.last() - g * i0 * g.adjoint()).max_abs(), tol["wong_ad"]));
    // constant potential along a straight line: I(t) = Ad(exp(−t A(v))) I₀
    if let (Some([ax, ay]), ParametricPath::Line { direction, .. }) = (pot.constant(), &path) {
        let av = ax.scale(direction.re) + ay.scale(direction.im);
        let worst = traj
            .times
            .iter()
            .zip(&traj.states)
            .map(|(t, st)| {
                let u = av.scale(-t).exp();
                (*st - u * i0 * u.adjoint()).max_abs()
            })
            .fold(0.0, f64::max);
        s.push(Check::at_most("constant_potential_oracle", worst, tol["wong_oracle"]));
    }

    let last = basis.coordinates(traj.last());
    let mut r = scratch();
    let _ = writeln!(r.body_text, "field = {field}, path = `{desc}`, steps = {steps}");
    let _ = writeln!(r.body_text, "I(0) = [{}, {}, {}]", fmt_num(spin[0]), fmt_num(spin[1]), fmt_num(spin[2]));
    let _ = writeln!(r.body_text, "I(1) = [{:.12}, {:.12}, {:.12}]", last[0], last[1], last[2]);
    let mut csv = String::from("t,i1,i2,i3\n");
    let stride = (steps / 100).max(1);
    let mut samples = Vec::new();
    for (idx, (t, st)) in traj.times.iter().zip(&traj.states).enumerate() {
        if idx % stride == 0 || idx + 1 == traj.times.len() {
            let x = basis.coordinates(st);
            let _ = writeln!(csv, "{t:e},{:e},{:e},{:e}", x[0], x[1], x[2]);
            samples.push([*t, x[0], x[1], x[2]]);
        }
    }
    r.csv = Some(csv);
    r.result = json!({ "field": field, "path": desc, "steps": steps, "final": last, "trajectory": samples });
    r.add_suite(s);
    Ok(r)
}

fn spectrum(cfg: &mut RunConfig, tol: &BTreeMap<String, f64>) -> CliResult<Report> {
    let g = grid(cfg, 16)?;
    let field = cfg.field.get_or_insert_with(|| "zero:1".into()).clone();
    let c = parse_grid_field(&field, g, TorusFamily::Seamed, 1.0, cfg.seed.unwrap_or(0))?;
    let degrees: Vec<usize> = match cfg.degree {
        Some(k) if k > 2 => return Err(CliError::Invalid(format!("`degree` must be 0, 1 or 2, got {k}"))),
        Some(k) => vec![k],
        None => vec![0, 1, 2],
    };
    let threshold = tol["harmonic_threshold"];
    let mut r = scratch();
    let _ = writeln!(r.body_text, "field = {field}, N = {}, m = {}", g.n(), c.dim());
    let mut csv = String::from("degree,kernel_dim\n");
    let mut dims = Vec::new();
    for k in degrees {
        let d = harmonic_kernel_dim(&c, k, threshold)?;
        let _ = writeln!(r.body_text, "kernel_dim[k={k}] = {d}");
        let _ = writeln!(csv, "{k},{d}");
        dims.push(json!({ "degree": k, "kernel_dim": d }));
    }
    r.csv = Some(csv);
    r.result = json!({ "field": field, "dims": dims });
    Ok(r)
}
