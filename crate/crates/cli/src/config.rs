//! Run configuration: a TOML document with one optional table per command.
//!
//! ```toml
//! seed = 42
//!
//! [lattice]
//! dim = 2
//! sizes = [12, 12]
//! spacing = [0.1, 0.1]
//!
//! [[convergence.cases]]
//! name = "wave"
//! point = [0.3]
//! mu = 0
//! gamma = { name = "linear", coeffs = [0.3] }
//! phi = { name = "constant", value = 0.0 }
//! a = [{ name = "constant", value = 0.1 }]
//! b = [{ name = "constant", value = 0.2 }]
//! target = { name = "scalar", psi = { name = "plane_wave", amp = 1.0, k = [2.0] } }
//! ```

use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use scalefield::bundle_fields::{build_lattice, Lattice};
use scalefield::gauge::{Couplings, Su2Map};
use scalefield::scaled_scalars::{Kind, Level};
use scalefield::studies::{ConvergenceCase, CurlCase, CONVERGENCE_STEPS, CURL_SIZE, CURL_SPACING};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Axioms,
    ScaleDemo,
    Convergence,
    CurlDiagnostic,
    GaugeCheck,
    ReduceCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Axioms => "axioms",
            Self::ScaleDemo => "scale-demo",
            Self::Convergence => "convergence",
            Self::CurlDiagnostic => "curl-diagnostic",
            Self::GaugeCheck => "gauge-check",
            Self::ReduceCheck => "reduce-check",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub dim: usize,
    pub sizes: Vec<usize>,
    pub spacing: Vec<f64>,
    #[serde(default)]
    pub origin: Option<Vec<f64>>,
}

impl Default for LatticeSpec {
    fn default() -> Self {
        Self {
            dim: 2,
            sizes: vec![12, 12],
            spacing: vec![0.1, 0.1],
            origin: Some(vec![-0.55, -0.55]),
        }
    }
}

impl LatticeSpec {
    pub fn build(&self) -> scalefield::Result<Lattice> {
        let l = build_lattice(self.dim, &self.sizes, &self.spacing)?;
        match &self.origin {
            Some(o) => l.with_origin(o),
            None => Ok(l),
        }
    }
}

/// Levels and values for the scale demo, complex numbers as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevelSpec {
    pub s: [f64; 2],
    pub t: [f64; 2],
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl Default for LevelSpec {
    fn default() -> Self {
        Self {
            s: [1.0, 0.0],
            t: [0.0, 2.0],
            a: [1.0, 1.0],
            b: [2.0, -0.5],
        }
    }
}

pub fn complex(z: [f64; 2]) -> Complex64 {
    Complex64::new(z[0], z[1])
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub identity: f64,
    pub covariance: f64,
    pub reduction: f64,
    pub order_min: f64,
    pub order_max: f64,
    pub model_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-12,
            covariance: 1e-10,
            reduction: 1e-12,
            order_min: 0.9,
            order_max: 1.1,
            model_factor: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AxiomsSpec {
    pub kind: Kind,
    pub pairs: usize,
    pub triples: usize,
    pub map_cases: usize,
    pub relativization_cases: usize,
    pub witness_cases: usize,
}

impl Default for AxiomsSpec {
    fn default() -> Self {
        Self {
            kind: Kind::Complex,
            pairs: 1000,
            triples: 1000,
            map_cases: 1000,
            relativization_cases: 1000,
            witness_cases: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceSpec {
    /// Include the built-in configurations.
    pub catalog: bool,
    pub steps: Vec<f64>,
    pub cases: Vec<ConvergenceCase>,
}

impl Default for ConvergenceSpec {
    fn default() -> Self {
        Self {
            catalog: true,
            steps: CONVERGENCE_STEPS.to_vec(),
            cases: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurlSpec {
    pub catalog: bool,
    /// Add the non-gradient field `B = (−y, x)` as an expected failure.
    pub rotational: bool,
    pub size: usize,
    pub spacing: f64,
    pub cases: Vec<CurlCase>,
}

impl Default for CurlSpec {
    fn default() -> Self {
        Self {
            catalog: true,
            rotational: true,
            size: CURL_SIZE,
            spacing: CURL_SPACING,
            cases: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMap {
    pub name: String,
    pub map: Su2Map,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaugeSpec {
    pub seeds: usize,
    pub sites: usize,
    /// Replaces the built-in map catalog when given.
    pub maps: Option<Vec<NamedMap>>,
}

impl Default for GaugeSpec {
    fn default() -> Self {
        Self {
            seeds: 100,
            sites: 100,
            maps: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReduceSpec {
    pub cases: usize,
}

impl Default for ReduceSpec {
    fn default() -> Self {
        Self { cases: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub levels: LevelSpec,
    /// Fixed couplings for the gauge checks; random per seed when absent.
    #[serde(default)]
    pub couplings: Option<Couplings>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub axioms: AxiomsSpec,
    #[serde(default)]
    pub convergence: ConvergenceSpec,
    #[serde(default)]
    pub curl: CurlSpec,
    #[serde(default)]
    pub gauge: GaugeSpec,
    #[serde(default)]
    pub reduce: ReduceSpec,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config is valid")
    }
}

/// A parse or validation failure, located by key and, when possible, line.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
    pub suggestion: Option<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if !self.key.is_empty() {
            write!(f, "`{}`: ", self.key)?;
        }
        write!(f, "{}", self.message)?;
        if let Some(s) = &self.suggestion {
            write!(f, " (did you mean `{s}`?)")?;
        }
        Ok(())
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// First line assigning the last plain segment of `key`, searched after the
/// header of its table when that header exists.
fn locate_key(text: &str, key: &str) -> Option<usize> {
    let segments: Vec<&str> = key
        .split('.')
        .map(|s| s.split('[').next().unwrap_or(s))
        .filter(|s| !s.is_empty())
        .collect();
    let last = *segments.last()?;
    let table = segments[..segments.len() - 1].join(".");
    let start = if table.is_empty() {
        0
    } else {
        text.lines()
            .position(|l| {
                let l = l.trim();
                l.starts_with('[') && l.trim_matches(|c| c == '[' || c == ']').trim() == table
            })
            .unwrap_or(0)
    };
    text.lines().enumerate().skip(start).find_map(|(i, l)| {
        let rest = l.trim_start().strip_prefix(last)?;
        rest.trim_start().starts_with('=').then_some(i + 1)
    })
}

/// Names quoted with backticks in a serde message, e.g. the candidates in
/// "unknown variant `gausian`, expected one of `constant`, `gaussian`".
fn quoted(s: &str) -> Vec<&str> {
    s.split('`').skip(1).step_by(2).collect()
}

fn suggest(message: &str) -> Option<String> {
    if !(message.contains("unknown variant") || message.contains("unknown field")) {
        return None;
    }
    let names = quoted(message);
    let (given, candidates) = names.split_first()?;
    candidates
        .iter()
        .map(|c| (strsim::levenshtein(given, c), *c))
        .filter(|(d, c)| *d <= 2.max(c.len() / 3))
        .min()
        .map(|(_, c)| c.to_string())
}

fn value_error(text: &str, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: locate_key(text, key),
        key: key.into(),
        message: message.into(),
        suggestion: None,
    }
}

fn check_finite(text: &str, key: &str, values: &[f64]) -> Result<(), ConfigError> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(value_error(text, key, "values must be finite"));
    }
    Ok(())
}

fn check_positive(text: &str, key: &str, v: f64) -> Result<(), ConfigError> {
    if !(v.is_finite() && v > 0.0) {
        return Err(value_error(text, key, format!("must be positive, got {v}")));
    }
    Ok(())
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = toml::Deserializer::parse(text).map_err(|e| ConfigError {
        line: e.span().map(|s| line_of(text, s.start)),
        key: String::new(),
        message: e.message().trim().to_string(),
        suggestion: None,
    })?;
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let key = e.path().to_string();
        let key = if key == "." { String::new() } else { key };
        let inner = e.into_inner();
        let message = inner.message().trim().to_string();
        ConfigError {
            line: inner
                .span()
                .map(|s| line_of(text, s.start))
                .or_else(|| locate_key(text, &key)),
            suggestion: suggest(&message),
            key,
            message,
        }
    })?;
    validate(text, &cfg)?;
    Ok(cfg)
}

fn validate(text: &str, cfg: &RunConfig) -> Result<(), ConfigError> {
    let l = &cfg.lattice;
    check_finite(text, "lattice.spacing", &l.spacing)?;
    if let Some(o) = &l.origin {
        check_finite(text, "lattice.origin", o)?;
    }
    l.build().map_err(|e| {
        let key = if l.sizes.len() != l.dim || l.sizes.iter().any(|&n| n < 4) {
            "lattice.sizes"
        } else if l.dim == 0 || l.dim > 4 {
            "lattice.dim"
        } else {
            "lattice.spacing"
        };
        value_error(text, key, e.to_string())
    })?;

    let lv = &cfg.levels;
    for (key, z) in [("levels.s", lv.s), ("levels.t", lv.t), ("levels.a", lv.a), ("levels.b", lv.b)] {
        check_finite(text, key, &z)?;
    }
    for (key, z) in [("levels.s", lv.s), ("levels.t", lv.t)] {
        Level::complex(complex(z)).map_err(|e| value_error(text, key, e.to_string()))?;
    }

    if let Some(c) = &cfg.couplings {
        c.validate().map_err(|e| value_error(text, "couplings", e.to_string()))?;
    }
    let t = &cfg.tolerances;
    for (key, v) in [
        ("tolerances.identity", t.identity),
        ("tolerances.covariance", t.covariance),
        ("tolerances.reduction", t.reduction),
        ("tolerances.model_factor", t.model_factor),
    ] {
        check_positive(text, key, v)?;
    }
    check_finite(text, "tolerances.order_min", &[t.order_min, t.order_max])?;
    if t.order_min > t.order_max {
        return Err(value_error(text, "tolerances.order_max", "must not be below order_min"));
    }

    let conv = &cfg.convergence;
    if conv.steps.len() < 2 {
        return Err(value_error(text, "convergence.steps", "need at least two steps"));
    }
    for &h in &conv.steps {
        check_positive(text, "convergence.steps", h)?;
    }
    for (i, case) in conv.cases.iter().enumerate() {
        case.validate()
            .map_err(|e| value_error(text, &format!("convergence.cases[{i}]"), format!("{}: {e}", case.name)))?;
    }

    let curl = &cfg.curl;
    check_positive(text, "curl.spacing", curl.spacing)?;
    if curl.size < 4 {
        return Err(value_error(text, "curl.size", "must be at least 4"));
    }
    for (i, case) in curl.cases.iter().enumerate() {
        case.gamma
            .validate(2)
            .and_then(|_| case.phi.validate(2))
            .map_err(|e| value_error(text, &format!("curl.cases[{i}]"), format!("{}: {e}", case.name)))?;
    }

    if let Some(maps) = &cfg.gauge.maps {
        for (i, m) in maps.iter().enumerate() {
            m.map
                .validate(l.dim)
                .map_err(|e| value_error(text, &format!("gauge.maps[{i}]"), format!("{}: {e}", m.name)))?;
        }
    }
    Ok(())
}
