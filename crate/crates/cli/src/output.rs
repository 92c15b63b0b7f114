use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use spincm::Lattice;

use crate::config::{ConfigError, RunConfig};

pub fn emit(cfg: &RunConfig, text: &str) -> Result<(), ConfigError> {
    match &cfg.out {
        Some(path) => fs::write(path, text.as_bytes()).map_err(|source| ConfigError::Write {
            path: path.clone(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") })
                .map_err(|source| ConfigError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn complex_pair(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self { writer }
    }

    pub fn row(&mut self, fields: Vec<String>) {
        self.writer.write_record(&fields).expect("in-memory write");
    }

    pub fn finish(self) -> String {
        String::from_utf8(self.writer.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

/// Quantum numbers and spectral parameters of one saved level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRow {
    pub l0: i64,
    pub l1: i64,
    pub l2: i64,
    pub lambda12: Complex64,
    pub lambda31: Complex64,
}

#[derive(Deserialize)]
struct JsonLevel {
    l0: i64,
    l1: i64,
    l2: i64,
    lambda12: Complex64,
    lambda31: Complex64,
}

#[derive(Deserialize)]
struct JsonLattice {
    omega1: Complex64,
    omega2: Complex64,
}

#[derive(Deserialize)]
struct JsonSpectrum {
    lattice: Option<JsonLattice>,
    levels: Vec<JsonLevel>,
}

#[derive(Deserialize)]
struct CsvLevel {
    l0: i64,
    l1: i64,
    l2: i64,
    re_lambda12: f64,
    im_lambda12: f64,
    re_lambda31: f64,
    im_lambda31: f64,
}

/// Reads spectrum output in either format. JSON carries its own lattice;
/// CSV levels are checked against `fallback`.
pub fn read_levels(path: &Path, fallback: &Lattice) -> Result<(Lattice, Vec<LevelRow>), ConfigError> {
    let fail = |reason: String| ConfigError::Levels {
        path: path.to_owned(),
        reason,
    };
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_owned(),
        source,
    })?;
    if text.trim_start().starts_with('{') {
        let sp: JsonSpectrum = serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
        let lattice = match sp.lattice {
            Some(l) => Lattice::new(l.omega1, l.omega2)?,
            None => fallback.clone(),
        };
        let rows = sp
            .levels
            .into_iter()
            .map(|l| LevelRow {
                l0: l.l0,
                l1: l.l1,
                l2: l.l2,
                lambda12: l.lambda12,
                lambda31: l.lambda31,
            })
            .collect();
        Ok((lattice, rows))
    } else {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let rows = reader
            .deserialize::<CsvLevel>()
            .map(|r| {
                r.map(|l| LevelRow {
                    l0: l.l0,
                    l1: l.l1,
                    l2: l.l2,
                    lambda12: Complex64::new(l.re_lambda12, l.im_lambda12),
                    lambda31: Complex64::new(l.re_lambda31, l.im_lambda31),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| fail(e.to_string()))?;
        Ok((fallback.clone(), rows))
    }
}
