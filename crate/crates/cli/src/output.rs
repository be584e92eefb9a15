use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Failure, Format};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BurauOut {
    pub braid: String,
    pub strands: usize,
    pub family: String,
    pub group: String,
    pub size: usize,
    /// Entries rendered as `coeff [group element]` sums.
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FqOut {
    pub braid: String,
    pub family: String,
    pub t: f64,
    pub value: f64,
    pub error_bound: Option<f64>,
    pub method: String,
    pub normalization: f64,
    pub diagnostics: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StageOut {
    #[serde(rename = "move")]
    pub mv: Option<String>,
    pub braid: String,
    pub value: f64,
    pub error_bound: Option<f64>,
    pub method: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MarkovOut {
    pub braid: String,
    pub family: String,
    pub t: f64,
    pub stages: Vec<StageOut>,
    pub verdict: String,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlexanderOut {
    pub braid: String,
    pub polynomial: String,
    /// `(degree, coefficient)` with the coefficient as an exact rational.
    pub coefficients: Vec<(i64, String)>,
    /// Mahler measure of the polynomial.
    pub mahler: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CounterOut {
    pub which: String,
    pub family: String,
    pub t: f64,
    pub values: Vec<FqOut>,
    pub expected: Vec<f64>,
    pub tolerance: Vec<f64>,
    pub pass: bool,
}

/// One JSON value for a single item, an array otherwise.
pub fn json_one_or_many<T: Serialize>(items: &[T]) -> Result<String, Failure> {
    let s = if items.len() == 1 { serde_json::to_string_pretty(&items[0]) } else { serde_json::to_string_pretty(items) };
    s.map(|mut s| {
        s.push('\n');
        s
    })
    .map_err(Failure::other)
}

pub fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(Failure::other)?;
    for r in rows {
        w.write_record(r).map_err(Failure::other)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::other(anyhow::anyhow!("{e}")))?;
    String::from_utf8(bytes).map_err(Failure::other)
}

pub fn bound_text(e: Option<f64>) -> String {
    e.map_or_else(|| "unknown".to_string(), |e| format!("{e:.1e}"))
}

pub fn bound_csv(e: Option<f64>) -> String {
    e.map_or_else(String::new, |e| format!("{e:e}"))
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::other(anyhow::anyhow!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(Failure::other)
        }
    }
}

pub fn render<T: Serialize>(
    format: Format,
    items: &[T],
    text: impl FnOnce() -> String,
    csv: impl FnOnce() -> Result<String, Failure>,
) -> Result<String, Failure> {
    match format {
        Format::Json => json_one_or_many(items),
        Format::Csv => csv(),
        Format::Text => Ok(text()),
    }
}
