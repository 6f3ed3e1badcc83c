//! Resolved run settings: a `key = value` file overlaid with command-line
//! flags.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;

use af_core::io::config::{parse_config, ConfigError};
use af_core::recon::{CwenoParams, CwenoWeights};
use af_core::{AuxRadius, EvolutionConfig, OperatorKind, Problem, ProblemId, ReconKind, SchemeConfig};

/// Every key a config file or flag may set. Flags use the same names.
pub const KEYS: &[&str] = &[
    "name",
    "problem",
    "recon",
    "op",
    "delta",
    "nu",
    "nquad",
    "c",
    "aux-radius",
    "weights",
    "epsilon",
    "cfl",
    "nx",
    "ny",
    "tend",
    "out-dir",
    "snapshots",
    "m",
    "resolutions",
    "deltas",
    "nus",
    "cfls",
    "cfl-lo",
    "cfl-hi",
    "tol",
    "method",
];

#[derive(Debug, Clone)]
struct Value {
    text: String,
    /// Line in the config file; `None` for flags.
    line: Option<usize>,
}

/// Raw values by key, flags taking precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct RawSettings {
    values: BTreeMap<String, Value>,
}

impl RawSettings {
    pub fn from_file_text(text: &str) -> Result<Self, ConfigError> {
        let file = parse_config(text)?;
        file.check_keys(KEYS)?;
        let values = file
            .entries()
            .iter()
            .map(|e| (e.key.clone(), Value { text: e.value.clone(), line: Some(e.line) }))
            .collect();
        Ok(Self { values })
    }

    pub fn set_flag(&mut self, key: &str, text: String) {
        debug_assert!(KEYS.contains(&key), "{key}");
        self.values.insert(key.to_string(), Value { text, line: None });
    }

    /// The resolved values, for the manifest.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.values.iter().map(|(k, v)| (k.clone(), v.text.clone())).collect()
    }

    fn err(&self, key: &str, message: String) -> ConfigError {
        ConfigError { line: self.values.get(key).and_then(|v| v.line), key: Some(key.to_string()), message }
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .text
                .parse::<T>()
                .map(Some)
                .map_err(|e| self.err(key, format!("cannot parse `{}`: {e}", v.text))),
        }
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: Display,
    {
        let Some(v) = self.values.get(key) else { return Ok(None) };
        v.text
            .split(',')
            .map(|s| s.trim().parse::<T>().map_err(|e| self.err(key, format!("cannot parse list item `{}`: {e}", s.trim()))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigMethod {
    Dense,
    Fourier,
}

impl FromStr for EigMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dense" => Ok(Self::Dense),
            "fourier" => Ok(Self::Fourier),
            other => Err(format!("unknown method `{other}` (expected dense or fourier)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub name: Option<String>,
    pub problem: Problem,
    pub recon: ReconKind,
    pub evolution: EvolutionConfig,
    pub cweno: CwenoParams,
    pub cfl: Option<f64>,
    pub nx: usize,
    pub ny: usize,
    pub tend: f64,
    pub out_dir: PathBuf,
    pub snapshots: usize,
    pub m: usize,
    pub resolutions: Vec<usize>,
    pub deltas: Vec<f64>,
    pub nus: Vec<f64>,
    pub cfls: Vec<f64>,
    pub cfl_lo: f64,
    pub cfl_hi: f64,
    pub tol: f64,
    pub method: EigMethod,
}

impl Settings {
    pub fn resolve(raw: &RawSettings) -> Result<Self, ConfigError> {
        let problem_id: ProblemId = raw.get("problem")?.unwrap_or(ProblemId::SmoothIrrotational);
        let c: f64 = raw.get("c")?.unwrap_or(1.0);
        if !(c > 0.0 && c.is_finite()) {
            return Err(raw.err("c", format!("sound speed must be positive, got {c}")));
        }
        let problem = Problem::new(problem_id).with_c(c);
        let op: OperatorKind = raw.get("op")?.unwrap_or(OperatorKind::Eg2);
        let mut evolution = EvolutionConfig::new(op).with_c(c);
        if let Some(d) = raw.get("delta")? {
            evolution.delta = d;
        } else if op.uses_delta() {
            evolution.delta = if op.is_hat() { 1.0 } else { 0.7 };
        }
        if let Some(n) = raw.get("nu")? {
            evolution.nu = n;
        } else if op.uses_nu() {
            evolution.nu = 0.2;
        }
        if let Some(n) = raw.get("nquad")? {
            evolution.n_quad = n;
        }
        if let Some(a) = raw.get::<AuxRadius>("aux-radius")? {
            evolution.aux_radius = a;
        }
        evolution.validate().map_err(|e| match &e {
            af_core::Error::InvalidParameter { name, .. } => raw.err(name, e.to_string()),
            _ => raw.err("op", e.to_string()),
        })?;

        let mut cweno = CwenoParams::default();
        if let Some(w) = raw.get::<CwenoWeights>("weights")? {
            cweno.weights = w;
        }
        if let Some(e) = raw.get("epsilon")? {
            cweno.epsilon = e;
        }

        let nx: usize = raw.get("nx")?.unwrap_or(64);
        let ny: usize = raw.get("ny")?.unwrap_or(nx);
        let cfl: Option<f64> = raw.get("cfl")?;
        if let Some(cfl) = cfl {
            if !(cfl > 0.0 && cfl <= 1.0) {
                return Err(raw.err("cfl", format!("must lie in (0, 1], got {cfl}")));
            }
        }
        let tend: f64 = raw.get("tend")?.unwrap_or(0.1);
        if !(tend >= 0.0 && tend.is_finite()) {
            return Err(raw.err("tend", format!("must be non-negative, got {tend}")));
        }
        let m: usize = raw.get("m")?.unwrap_or(20);
        if m < af_core::stability::MIN_M {
            return Err(raw.err("m", format!("must be at least {}, got {m}", af_core::stability::MIN_M)));
        }
        Ok(Self {
            name: raw.get("name")?,
            problem,
            recon: raw.get("recon")?.unwrap_or(ReconKind::Af),
            evolution,
            cweno,
            cfl,
            nx,
            ny,
            tend,
            out_dir: raw.get("out-dir")?.unwrap_or_else(|| PathBuf::from("out")),
            snapshots: raw.get("snapshots")?.unwrap_or(1),
            m,
            resolutions: raw.list("resolutions")?.unwrap_or_else(|| vec![64, 128, 256]),
            deltas: raw.list("deltas")?.unwrap_or_else(|| vec![evolution.delta]),
            nus: raw.list("nus")?.unwrap_or_else(|| vec![evolution.nu]),
            cfls: raw.list("cfls")?.unwrap_or_default(),
            cfl_lo: raw.get("cfl-lo")?.unwrap_or(0.2),
            cfl_hi: raw.get("cfl-hi")?.unwrap_or(0.5),
            tol: raw.get("tol")?.unwrap_or(5e-4),
            method: raw.get("method")?.unwrap_or(EigMethod::Fourier),
        })
    }

    /// Scheme configuration at the configured CFL number.
    pub fn scheme(&self, raw: &RawSettings) -> Result<SchemeConfig, ConfigError> {
        let cfl = self.cfl.ok_or_else(|| raw.err("cfl", "required but not set".into()))?;
        Ok(SchemeConfig { recon: self.recon, evolution: self.evolution, cfl, cweno: self.cweno })
    }
}
