//! Run configuration shared by command-line flags and TOML config files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use gaugecalc::curves::TorusFamily;
use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Verify,
    TorusCurve,
    Residual,
    Holonomy,
    Ab,
    Wong,
    Spectrum,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Verify => "verify",
            CommandKind::TorusCurve => "torus-curve",
            CommandKind::Residual => "residual",
            CommandKind::Holonomy => "holonomy",
            CommandKind::Ab => "ab",
            CommandKind::Wong => "wong",
            CommandKind::Spectrum => "spectrum",
        }
    }

    /// Keys accepted besides `command`, `seed`, `out`, `format`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            CommandKind::Verify => &["grid", "tolerances"],
            CommandKind::TorusCurve => &["grid", "steps", "tol", "lambda", "samples", "family", "tolerances"],
            CommandKind::Residual => &["grid", "tol", "field", "family", "lambda", "tolerances"],
            CommandKind::Holonomy => &["steps", "tol", "loop", "field", "family", "lambda", "tolerances"],
            CommandKind::Ab => &["k", "winding", "steps", "tol", "tolerances"],
            CommandKind::Wong => &["steps", "tol", "loop", "field", "family", "lambda", "spin", "tolerances"],
            CommandKind::Spectrum => &["grid", "tol", "field", "degree", "tolerances"],
        }
    }

    /// Tolerance key that `--tol` overrides.
    pub fn primary_tolerance(self) -> Option<&'static str> {
        match self {
            CommandKind::Verify => None,
            CommandKind::TorusCurve | CommandKind::Residual => Some("flat"),
            CommandKind::Holonomy => Some("unitarity"),
            CommandKind::Ab => Some("ab"),
            CommandKind::Wong => Some("wong_norm"),
            CommandKind::Spectrum => Some("harmonic_threshold"),
        }
    }

    /// Default tolerance table.
    pub fn default_tolerances(self) -> BTreeMap<String, f64> {
        let pairs: &[(&str, f64)] = match self {
            CommandKind::Verify => &[
                ("structure_constants", 0.0),
                ("d_squared", 1e-12),
                ("star_isometry", 1e-12),
                ("iota_pairing", 1e-10),
                ("convergence_ratio_min", 3.6),
                ("convergence_ratio_max", 4.4),
                ("adjointness", 1e-10),
                ("residual", 1e-10),
                ("first_variation", 1e-6),
                ("harmonic_threshold", 1e-6),
                ("c_e", 1e-6),
                ("harmonic_projection", 1e-6),
                ("nabla_e1", 1e-8),
                ("su2_paths", 1e-8),
                ("flat", 1e-10),
                ("ab", 1e-8),
                ("wong_oracle", 1e-8),
                ("wong_norm", 1e-9),
                ("wong_ad", 1e-7),
                ("wong_flat", 1e-7),
            ],
            CommandKind::TorusCurve => &[("flat", 1e-10), ("su2_paths", 1e-8)],
            CommandKind::Residual => &[("flat", 1e-10), ("su2_paths", 1e-8)],
            CommandKind::Holonomy => &[("unitarity", 1e-8)],
            CommandKind::Ab => &[("ab", 1e-8)],
            CommandKind::Wong => &[("wong_norm", 1e-9), ("wong_ad", 1e-7), ("wong_oracle", 1e-8)],
            CommandKind::Spectrum => &[("harmonic_threshold", 1e-6)],
        };
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// Human-readable report.
    #[default]
    Text,
    /// JSON record.
    Json,
    /// Comma-separated plot data preceded by `#` metadata lines.
    Csv,
}

/// Complex number written as `re`, `re+imi` or `re-imi`; TOML also accepts a bare number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexArg(pub Complex<f64>);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("cannot parse complex number {s:?} (expected re, re+imi or re-imi)");
        let Some(body) = s.strip_suffix('i') else {
            return s.parse::<f64>().map(|re| ComplexArg(Complex::new(re, 0.0))).map_err(|_| bad());
        };
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(i) => (body[..i].parse::<f64>().map_err(|_| bad())?, &body[i..]),
            None => (0.0, body),
        };
        let im = match im {
            "+" | "" => 1.0,
            "-" => -1.0,
            other => other.parse::<f64>().map_err(|_| bad())?,
        };
        Ok(ComplexArg(Complex::new(re, im)))
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        if z.im == 0.0 {
            write!(f, "{}", z.re)
        } else {
            write!(f, "{}{:+}i", z.re, z.im)
        }
    }
}

impl Serialize for ComplexArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.im == 0.0 {
            s.serialize_f64(self.0.re)
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for ComplexArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Real(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(ComplexArg(Complex::new(v as f64, 0.0))),
            Raw::Real(v) => Ok(ComplexArg(Complex::new(v, 0.0))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Every setting a run can take. Flags and config files fill the same record;
/// flags win over the file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<ComplexArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(rename = "loop", default, skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<TorusFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config { path: path.to_string(), message: e.to_string().trim_end().to_string() })
    }

    pub fn load(path: &std::path::Path) -> CliResult<Self> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
        Self::from_toml(&text, &shown)
    }

    /// Fills every unset field of `self` from `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        let mut tolerances = base.tolerances;
        tolerances.extend(self.tolerances);
        RunConfig {
            command: self.command.or(base.command),
            grid: self.grid.or(base.grid),
            steps: self.steps.or(base.steps),
            tol: self.tol.or(base.tol),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            k: self.k.or(base.k),
            winding: self.winding.or(base.winding),
            lambda: self.lambda.or(base.lambda),
            samples: self.samples.or(base.samples),
            loops: if self.loops.is_empty() { base.loops } else { self.loops },
            field: self.field.or(base.field),
            family: self.family.or(base.family),
            degree: self.degree.or(base.degree),
            spin: self.spin.or(base.spin),
            tolerances,
        }
    }

    fn set_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut mark = |set: bool, k: &'static str| {
            if set {
                keys.push(k)
            }
        };
        mark(self.grid.is_some(), "grid");
        mark(self.steps.is_some(), "steps");
        mark(self.tol.is_some(), "tol");
        mark(self.k.is_some(), "k");
        mark(self.winding.is_some(), "winding");
        mark(self.lambda.is_some(), "lambda");
        mark(self.samples.is_some(), "samples");
        mark(!self.loops.is_empty(), "loop");
        mark(self.field.is_some(), "field");
        mark(self.family.is_some(), "family");
        mark(self.degree.is_some(), "degree");
        mark(self.spin.is_some(), "spin");
        mark(!self.tolerances.is_empty(), "tolerances");
        keys
    }

    /// Checks the merged config and returns the command with its tolerance table.
    pub fn validate(&self) -> CliResult<(CommandKind, BTreeMap<String, f64>)> {
        let cmd = self.command.ok_or_else(|| CliError::Invalid("no command given (flag subcommand or `command` key)".into()))?;
        for key in self.set_keys() {
            if !cmd.keys().contains(&key) {
                return Err(CliError::Invalid(format!("`{key}` does not apply to `{cmd}`")));
            }
        }
        let positive = |name: &str, v: Option<usize>| match v {
            Some(0) => Err(CliError::Invalid(format!("`{name}` must be positive"))),
            _ => Ok(()),
        };
        positive("grid", self.grid)?;
        positive("steps", self.steps)?;
        positive("samples", self.samples)?;
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Invalid(format!("`tol` must be a positive finite number, got {t}")));
            }
        }
        if let Some(l) = self.lambda {
            if !l.is_finite() {
                return Err(CliError::Invalid("`lambda` must be finite".into()));
            }
        }
        let mut table = cmd.default_tolerances();
        for (k, v) in &self.tolerances {
            if !table.contains_key(k) {
                let known: Vec<&str> = table.keys().map(String::as_str).collect();
                return Err(CliError::Invalid(format!("unknown tolerance `{k}` for `{cmd}` (known: {})", known.join(", "))));
            }
            if !(v.is_finite() && *v >= 0.0) {
                return Err(CliError::Invalid(format!("tolerance `{k}` must be a non-negative finite number")));
            }
            table.insert(k.clone(), *v);
        }
        if let Some(t) = self.tol {
            let key = cmd.primary_tolerance().ok_or_else(|| {
                CliError::Invalid(format!("`{cmd}` has several tolerances; set them under [tolerances] in a config file"))
            })?;
            table.insert(key.to_string(), t);
        }
        Ok((cmd, table))
    }
}
