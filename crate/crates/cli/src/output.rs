use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

pub const TOOL_VERSION: &str = concat!("qtol ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One result row. Field order is the CSV column order and the JSON key
/// order; the first twelve columns are fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub mode: String,
    pub family: String,
    pub width: Option<usize>,
    #[serde(rename = "G")]
    pub gates: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub rate_or_target: Option<f64>,
    pub value: f64,
    pub stderr: Option<f64>,
    pub regime: String,
    pub seed: u64,
    pub samples: Option<usize>,
    pub expected_errors: Option<f64>,
    pub fit_coefficient: Option<f64>,
    pub fit_mse: Option<f64>,
    pub tool_version: String,
    pub config: String,
}

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("no records to write")]
    Empty,
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("csv encoding failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
}

pub fn render(records: &[Record], format: Format) -> Result<Vec<u8>, OutputError> {
    if records.is_empty() {
        return Err(OutputError::Empty);
    }
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(records)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r)?;
            }
            w.into_inner().map_err(|e| OutputError::Io {
                path: "<buffer>".into(),
                source: e.into_error(),
            })
        }
    }
}

/// Writes to `path`, or stdout when `path` is `None`.
pub fn write_results(records: &[Record], format: Format, path: Option<&Path>) -> Result<(), OutputError> {
    let bytes = render(records, format)?;
    let describe = |p: Option<&Path>| p.map_or_else(|| "<stdout>".to_string(), |p| p.display().to_string());
    let io_err = |source| OutputError::Io {
        path: describe(path),
        source,
    };
    match path {
        Some(p) => {
            let mut f = File::create(p).map_err(io_err)?;
            f.write_all(&bytes).map_err(io_err)?;
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(&bytes).map_err(io_err)?;
            out.flush().map_err(io_err)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> Record {
        Record {
            mode: "success".into(),
            family: "qft".into(),
            width: Some(4),
            gates: Some(36),
            k: Some(22),
            m: Some(14),
            rate_or_target: Some(0.0015),
            value: 0.964,
            stderr: None,
            regime: "EXHAUSTIVE".into(),
            seed: 7,
            samples: Some(150),
            expected_errors: Some(0.054),
            fit_coefficient: None,
            fit_mse: None,
            tool_version: TOOL_VERSION.into(),
            config: "success --family qft --width 4".into(),
        }
    }

    #[test]
    fn csv_has_header_and_row() {
        let text = String::from_utf8(render(&[record()], Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("mode,family,width,G,k,m,rate_or_target,value,stderr,regime,seed,samples,"));
    }

    #[test]
    fn json_keys_match_csv_columns() {
        let json: serde_json::Value = serde_json::from_slice(&render(&[record()], Format::Json).unwrap()).unwrap();
        let obj = json.as_array().unwrap()[0].as_object().unwrap();
        let csv_text = String::from_utf8(render(&[record()], Format::Csv).unwrap()).unwrap();
        let header: Vec<&str> = csv_text.lines().next().unwrap().split(',').collect();
        let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        let mut sorted_header = header.clone();
        sorted_header.sort();
        let mut sorted_keys = keys.clone();
        sorted_keys.sort();
        assert_eq!(sorted_header, sorted_keys);
    }

    #[test]
    fn rendering_is_stable() {
        let a = render(&[record(), record()], Format::Json).unwrap();
        let b = render(&[record(), record()], Format::Json).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_rejected() {
        assert!(matches!(render(&[], Format::Csv), Err(OutputError::Empty)));
    }

    #[test]
    fn unwritable_path() {
        let err = write_results(&[record()], Format::Csv, Some(Path::new("/nonexistent-dir/x.csv"))).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
