//! Run configuration: a TOML document with flat sections.
//!
//! ```toml
//! command = "solve"
//! seed = 0
//!
//! [problem]
//! domain = "interval"
//! s = 1.0
//! p = 4.0
//! lambda = 1.0
//! t_final = 0.1
//!
//! [problem.phi]
//! kind = "sine-mode"
//! amplitude = 0.1
//! ```
//!
//! Every key is checked against [`schema`] before deserialisation so a typo
//! is reported together with the closest valid key.

use std::fmt;
use std::str::FromStr;

use nlsbvp::estimates::{CounterexampleSpec, EstimateProbe};
use nlsbvp::nonlinear::{gate, Domain};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    VerifyIdentities,
    Probe,
    Counterexample,
    Norms,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Solve => "solve",
            Command::VerifyIdentities => "verify-identities",
            Command::Probe => "probe",
            Command::Counterexample => "counterexample",
            Command::Norms => "norms",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    #[default]
    Reflection,
    Odd,
}

/// Initial or boundary data. The variable is `x` for `phi`, `t` for `h1`/`h2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DataSpec {
    Zero,
    /// `a exp(-((v - c)/w)^2) e^{i k v}`.
    Gaussian {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        center: f64,
        #[serde(default = "one")]
        width: f64,
        #[serde(default)]
        wavenumber: f64,
    },
    /// `a sin(n pi v)`.
    SineMode {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one_usize")]
        mode: usize,
    },
    /// `a * smooth_step((v - start)/ramp)`.
    SmoothedStep {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        start: f64,
        #[serde(default = "one")]
        ramp: f64,
    },
    /// Boundary data `h_k` of the interval sharpness family.
    #[serde(rename = "A2-series")]
    A2Series { k: usize, beta: f64 },
    /// Samples from a CSV file with columns `coordinate, re, im`.
    Csv { path: String },
}

impl Default for DataSpec {
    fn default() -> Self {
        DataSpec::Zero
    }
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSection {
    pub domain: Domain,
    pub s: f64,
    pub p: f64,
    pub lambda: f64,
    pub t_final: f64,
    /// Spatial nodes: on `[0, 1]` for the interval, on `[0, x_max)` for the half-line.
    #[serde(default)]
    pub nx: Option<usize>,
    #[serde(default = "default_nt")]
    pub nt: usize,
    /// Half-line truncation; ignored on the interval.
    #[serde(default)]
    pub x_max: Option<f64>,
    #[serde(default)]
    pub extension: Extension,
    #[serde(default)]
    pub phi: DataSpec,
    /// Left boundary data (the only one on the half-line).
    #[serde(default)]
    pub h1: DataSpec,
    #[serde(default)]
    pub h2: DataSpec,
}

fn default_nt() -> usize {
    201
}

pub const DEFAULT_NX_INTERVAL: usize = 129;
pub const DEFAULT_NX_HALFLINE: usize = 1024;
pub const DEFAULT_X_MAX: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSection {
    #[serde(default = "default_tol")]
    pub picard_tol: f64,
    #[serde(default = "default_max_iter")]
    pub picard_max_iter: usize,
    #[serde(default = "default_window")]
    pub window_t: f64,
    #[serde(default = "default_floor")]
    pub window_floor: f64,
    /// Continue window by window instead of one Picard solve on `[0, T]`.
    #[serde(default)]
    pub global: bool,
    #[serde(default = "yes")]
    pub enforce_compatibility: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            picard_tol: default_tol(),
            picard_max_iter: default_max_iter(),
            window_t: default_window(),
            window_floor: default_floor(),
            global: false,
            enforce_compatibility: true,
        }
    }
}

fn default_tol() -> f64 {
    1e-8
}

fn default_max_iter() -> usize {
    50
}

fn default_window() -> f64 {
    0.1
}

fn default_floor() -> f64 {
    1e-4
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormsSection {
    /// Sobolev indices at which every datum is measured.
    #[serde(default = "default_s_values")]
    pub s_values: Vec<f64>,
}

impl Default for NormsSection {
    fn default() -> Self {
        Self { s_values: default_s_values() }
    }
}

fn default_s_values() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norms: Option<NormsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<EstimateProbe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleSpec>,
}

fn default_output_dir() -> String {
    "out".into()
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv]
}

/// Valid keys per section. Data tables are keyed by their `kind`.
pub fn schema(path: &str, kind: Option<&str>) -> Option<&'static [&'static str]> {
    Some(match (path, kind) {
        ("", _) => &[
            "command",
            "seed",
            "output_dir",
            "formats",
            "solver",
            "norms",
            "problem",
            "probe",
            "counterexample",
            "manifest",
        ],
        ("solver", _) => &["picard_tol", "picard_max_iter", "window_t", "window_floor", "global", "enforce_compatibility"],
        ("norms", _) => &["s_values"],
        ("problem", _) => &[
            "domain", "s", "p", "lambda", "t_final", "nx", "nt", "x_max", "extension", "phi", "h1", "h2",
        ],
        ("probe", _) => &[
            "operator",
            "lhs_norm",
            "rhs_norm",
            "alpha",
            "ensemble_size",
            "seed",
            "bandwidth",
            "ensemble",
            "t_final",
        ],
        ("counterexample", _) => &["alpha", "beta", "k_list", "control"],
        ("problem.phi" | "problem.h1" | "problem.h2", k) => match k {
            Some("gaussian") => &["kind", "amplitude", "center", "width", "wavenumber"],
            Some("sine-mode") => &["kind", "amplitude", "mode"],
            Some("smoothed-step") => &["kind", "amplitude", "start", "ramp"],
            Some("A2-series") => &["kind", "k", "beta"],
            Some("csv") => &["kind", "path"],
            _ => &["kind"],
        },
        _ => return None,
    })
}

fn nearest<'a>(key: &str, valid: &[&'a str]) -> &'a str {
    valid.iter().min_by_key(|v| strsim::levenshtein(key, v)).copied().unwrap_or("")
}

fn check_keys(table: &toml::Table, path: &str) -> Result<(), CliError> {
    let kind = table.get("kind").and_then(|v| v.as_str());
    let Some(valid) = schema(path, kind) else { return Ok(()) };
    for (key, value) in table {
        let full = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
        if !valid.contains(&key.as_str()) {
            return Err(CliError::Config(format!(
                "unknown key `{full}`; did you mean `{}`?",
                if path.is_empty() { nearest(key, valid).to_string() } else { format!("{path}.{}", nearest(key, valid)) }
            )));
        }
        if key == "manifest" && path.is_empty() {
            continue;
        }
        if let toml::Value::Table(t) = value {
            check_keys(t, &full)?;
        }
    }
    Ok(())
}

/// Parses and validates a configuration. A `[manifest]` table (present in
/// run manifests) is ignored, so manifests parse back to their config.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    check_keys(&table, "")?;
    table.remove("manifest");
    let cfg: RunConfig = table.try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    cfg.validated()
}

/// Serialises a configuration; `parse_config(&emit(c)) == c` for valid `c`.
pub fn emit(cfg: &RunConfig) -> String {
    toml::to_string(cfg).expect("configs always serialise")
}

impl RunConfig {
    /// Applies domain-dependent defaults and checks every constraint.
    pub fn validated(mut self) -> Result<Self, CliError> {
        let needs_problem = matches!(self.command, Command::Solve | Command::VerifyIdentities | Command::Norms);
        let sections = [
            ("problem", self.problem.is_some(), needs_problem),
            ("probe", self.probe.is_some(), self.command == Command::Probe),
            ("counterexample", self.counterexample.is_some(), self.command == Command::Counterexample),
        ];
        for (name, present, wanted) in sections {
            if present != wanted {
                return Err(CliError::Config(if wanted {
                    format!("command `{}` needs a [{name}] section", self.command)
                } else {
                    format!("command `{}` does not take a [{name}] section", self.command)
                }));
            }
        }
        if self.norms.is_some() && self.command != Command::Norms {
            return Err(CliError::Config(format!("command `{}` does not take a [norms] section", self.command)));
        }
        if self.command == Command::Norms && self.norms.is_none() {
            self.norms = Some(NormsSection::default());
        }
        if self.formats.is_empty() {
            return Err(CliError::Config("formats must name at least one of csv, json".into()));
        }
        let s = &self.solver;
        if !(s.picard_tol > 0.0 && s.window_t > 0.0 && s.window_floor > 0.0 && s.picard_max_iter > 0) {
            return Err(CliError::Config(
                "solver needs picard_tol, window_t, window_floor > 0 and picard_max_iter >= 1".into(),
            ));
        }
        if let Some(p) = self.problem.as_mut() {
            p.normalise()?;
            if needs_problem && self.command != Command::Norms {
                let report = gate(p.domain, p.s, p.p, p.lambda);
                report.require_local().map_err(|e| CliError::Gate(e.to_string()))?;
                if self.solver.global {
                    report.require_global().map_err(|e| CliError::Gate(e.to_string()))?;
                }
            }
        }
        if let Some(n) = &self.norms {
            if n.s_values.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
                return Err(CliError::Config("norms.s_values must be finite and >= 0".into()));
            }
        }
        if let Some(p) = &self.probe {
            p.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        if let Some(c) = self.counterexample.take() {
            self.counterexample = Some(c.validated().map_err(|e| CliError::Config(e.to_string()))?);
        }
        Ok(self)
    }
}

impl ProblemSection {
    fn normalise(&mut self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad(format!("problem.t_final must be positive, got {}", self.t_final));
        }
        if self.nt < 8 {
            return bad(format!("problem.nt must be at least 8, got {}", self.nt));
        }
        match self.domain {
            Domain::Interval => {
                let nx = *self.nx.get_or_insert(DEFAULT_NX_INTERVAL);
                if nx < 9 {
                    return bad(format!("problem.nx must be at least 9, got {nx}"));
                }
                if self.x_max.is_some() {
                    return bad("problem.x_max only applies to the half-line".into());
                }
                if self.extension != Extension::Reflection {
                    return bad("problem.extension only applies to the half-line".into());
                }
            }
            Domain::HalfLine => {
                let nx = *self.nx.get_or_insert(DEFAULT_NX_HALFLINE);
                if nx < 8 {
                    return bad(format!("problem.nx must be at least 8, got {nx}"));
                }
                let x_max = *self.x_max.get_or_insert(DEFAULT_X_MAX);
                if !(x_max > 0.0 && x_max.is_finite()) {
                    return bad(format!("problem.x_max must be positive, got {x_max}"));
                }
                if self.h2 != DataSpec::Zero {
                    return bad("the half-line has one boundary; use problem.h1".into());
                }
            }
        }
        if matches!(self.phi, DataSpec::A2Series { .. }) {
            return bad("A2-series is boundary data; it cannot be used for problem.phi".into());
        }
        for d in [&self.phi, &self.h1, &self.h2] {
            d.check()?;
        }
        Ok(())
    }
}

impl DataSpec {
    fn check(&self) -> Result<(), CliError> {
        let ok = match *self {
            DataSpec::Gaussian { width, .. } => width > 0.0,
            DataSpec::SineMode { mode, .. } => mode >= 1,
            DataSpec::SmoothedStep { ramp, .. } => ramp > 0.0,
            DataSpec::A2Series { k, beta } => k >= 1 && beta > 0.0,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(CliError::Config(format!("invalid data preset {self:?}")))
        }
    }
}
