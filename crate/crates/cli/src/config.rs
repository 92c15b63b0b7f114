use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use spincm::spectrum::{NewtonOptions, SpectrumOptions};
use spincm::verify::VerifyConfig;
use spincm::Lattice;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse levels from {path}: {reason}")]
    Levels { path: PathBuf, reason: String },
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: PathBuf, line: usize },
    #[error("{path}:{line}: unknown key `{key}`")]
    UnknownKey { path: PathBuf, line: usize, key: String },
    #[error("invalid value for {key}: `{value}` ({reason})")]
    Value { key: String, value: String, reason: String },
    #[error(transparent)]
    Library(#[from] spincm::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Options shared by every subcommand. Each can also be set through the
/// environment (`SPINCM_<NAME>`) or a `key = value` config file; flags win
/// over the environment, which wins over the file.
#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Config file with `key = value` lines (`#` starts a comment)
    #[arg(long, global = true, env = "SPINCM_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Real half-period, e.g. `1` or `0.5+0.1i`
    #[arg(long, global = true, env = "SPINCM_OMEGA1", allow_hyphen_values = true)]
    pub omega1: Option<String>,
    /// Second half-period, e.g. `0.25+1.2i`
    #[arg(long, global = true, env = "SPINCM_OMEGA2", allow_hyphen_values = true)]
    pub omega2: Option<String>,
    /// Coupling constant a
    #[arg(long, global = true, env = "SPINCM_COUPLING", allow_hyphen_values = true)]
    pub coupling: Option<String>,
    /// Truncation degree of the Taylor jets
    #[arg(long, global = true, env = "SPINCM_JET_DEGREE")]
    pub jet_degree: Option<String>,
    /// Residual threshold for operator, eigenfunction and periodicity checks
    #[arg(long, global = true, env = "SPINCM_TOL")]
    pub tol: Option<String>,
    /// Largest |l1|, |l2| enumerated
    #[arg(long, global = true, env = "SPINCM_LMAX")]
    pub lmax: Option<String>,
    /// Seed grid points per spectral parameter and cell direction
    #[arg(long, global = true, env = "SPINCM_SEEDS")]
    pub seeds: Option<String>,
    /// Seed for every random draw
    #[arg(long, global = true, env = "SPINCM_RNG_SEED")]
    pub rng_seed: Option<String>,
    /// Output format
    #[arg(long, global = true, env = "SPINCM_FORMAT")]
    pub format: Option<String>,
    /// Write the report here instead of standard output
    #[arg(long, global = true, env = "SPINCM_OUT", value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "SPINCM_LAMBDA_OVERRIDE", hide = true, allow_hyphen_values = true)]
    pub lambda_override: Option<String>,
}

const KEYS: &[&str] = &[
    "omega1",
    "omega2",
    "coupling",
    "jet-degree",
    "tol",
    "lmax",
    "seeds",
    "rng-seed",
    "format",
    "out",
    "lambda-override",
];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub lattice: Lattice,
    pub coupling: f64,
    pub jet_degree: usize,
    pub tol: f64,
    pub lmax: i64,
    pub seeds: usize,
    pub rng_seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub lambda_override: Option<f64>,
}

impl RunConfig {
    pub fn verify_config(&self) -> VerifyConfig {
        let mut cfg = VerifyConfig::new(self.lattice.clone());
        cfg.coupling = self.coupling;
        cfg.jet_degree = self.jet_degree;
        cfg.rng_seed = self.rng_seed;
        cfg.tol = self.tol;
        cfg.lambda_override = self.lambda_override;
        cfg.spectrum = self.spectrum_options();
        cfg
    }

    pub fn spectrum_options(&self) -> SpectrumOptions {
        SpectrumOptions {
            l_max: self.lmax,
            seeds_per_cell: self.seeds,
            rng_seed: self.rng_seed,
            newton: NewtonOptions::default(),
        }
    }
}

pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_owned(),
        source,
    })?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax {
            path: path.to_owned(),
            line: i + 1,
        })?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey {
                path: path.to_owned(),
                line: i + 1,
                key,
            });
        }
        map.insert(key, value.trim().trim_matches('"').to_owned());
    }
    Ok(map)
}

pub fn parse_complex(key: &str, value: &str) -> Result<Complex64, ConfigError> {
    value.trim().parse::<Complex64>().map_err(|e| ConfigError::Value {
        key: key.into(),
        value: value.into(),
        reason: e.to_string(),
    })
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| ConfigError::Value {
        key: key.into(),
        value: value.into(),
        reason: e.to_string(),
    })
}

fn invalid(key: &str, value: impl ToString, reason: &str) -> ConfigError {
    ConfigError::Value {
        key: key.into(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

impl GlobalArgs {
    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let file = match &self.config {
            Some(p) => parse_config_file(p)?,
            None => BTreeMap::new(),
        };
        let pick = |key: &str, flag: &Option<String>| -> Option<String> { flag.clone().or_else(|| file.get(key).cloned()) };

        let omega1 = parse_complex("omega1", &pick("omega1", &self.omega1).unwrap_or_else(|| "1".into()))?;
        let omega2 = parse_complex("omega2", &pick("omega2", &self.omega2).unwrap_or_else(|| "0.25+1.2i".into()))?;
        let lattice = Lattice::new(omega1, omega2)?;

        let coupling: f64 = parse("coupling", &pick("coupling", &self.coupling).unwrap_or_else(|| "1".into()))?;
        if !coupling.is_finite() {
            return Err(invalid("coupling", coupling, "must be finite"));
        }
        let jet_degree: usize = parse(
            "jet-degree",
            &pick("jet-degree", &self.jet_degree).unwrap_or_else(|| spincm::jets::DEFAULT_DEGREE.to_string()),
        )?;
        if !(5..=spincm::jets::MAX_DEGREE).contains(&jet_degree) {
            return Err(invalid(
                "jet-degree",
                jet_degree,
                &format!("must lie in 5..={} (J1 composed with H needs order 5)", spincm::jets::MAX_DEGREE),
            ));
        }
        let tol: f64 = parse("tol", &pick("tol", &self.tol).unwrap_or_else(|| "1e-8".into()))?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(invalid("tol", tol, "must be positive"));
        }
        let lmax: i64 = parse("lmax", &pick("lmax", &self.lmax).unwrap_or_else(|| "2".into()))?;
        if !(0..=50).contains(&lmax) {
            return Err(invalid("lmax", lmax, "must lie in 0..=50"));
        }
        let seeds: usize = parse("seeds", &pick("seeds", &self.seeds).unwrap_or_else(|| "3".into()))?;
        if !(1..=32).contains(&seeds) {
            return Err(invalid("seeds", seeds, "must lie in 1..=32"));
        }
        let rng_seed: u64 = parse("rng-seed", &pick("rng-seed", &self.rng_seed).unwrap_or_else(|| "0".into()))?;
        let format = match pick("format", &self.format) {
            None => Format::Json,
            Some(f) => Format::from_str(&f, true).map_err(|_| invalid("format", &f, "expected json or csv"))?,
        };
        let out = self.out.clone().or_else(|| file.get("out").map(PathBuf::from));
        let lambda_override = pick("lambda-override", &self.lambda_override)
            .map(|v| parse::<f64>("lambda-override", &v))
            .transpose()?;
        Ok(RunConfig {
            lattice,
            coupling,
            jet_degree,
            tol,
            lmax,
            seeds,
            rng_seed,
            format,
            out,
            lambda_override,
        })
    }
}
