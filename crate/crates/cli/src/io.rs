//! Points CSV files and run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use riesz_core::PointConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// `x1..xd` header followed by one row per point. Values are written in the
/// shortest form that round-trips.
pub fn points_to_csv(x: &PointConfig) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = (1..=x.dim()).map(|i| format!("x{i}")).collect();
    w.write_record(&header).expect("in-memory write");
    for p in x.iter() {
        w.write_record(p.iter().map(|v| v.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn points_from_csv(text: &str) -> Result<PointConfig> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| CliError::Parse(format!("points file: {e}")))?.clone();
    let dim = header.len();
    for (i, h) in header.iter().enumerate() {
        if h.trim() != format!("x{}", i + 1) {
            return Err(CliError::Parse(format!("points file: header column {} must be x{}", i + 1, i + 1)));
        }
    }
    let mut coords = Vec::new();
    for (row, record) in r.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(format!("points file: {e}")))?;
        for v in record.iter() {
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("points file row {}: bad number {v:?}", row + 2)))?;
            coords.push(v);
        }
    }
    PointConfig::new(dim, coords).map_err(|e| CliError::Parse(format!("points file: {e}")))
}

/// Everything needed to rerun a command and get the same bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub set_definition: String,
    pub kernel: KernelEntry,
    pub seed: u64,
    pub params: BTreeMap<String, serde_json::Value>,
    pub outputs: Vec<String>,
    pub tool_version: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub alpha: f64,
    pub d: usize,
}

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Comma-separated numbers, as used by `--y` and `--xi0`.
pub fn parse_point(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_round_trip_bitwise() {
        let x = PointConfig::from_points(3, [[0.1, -2.0, 1e-300], [1.0 / 3.0, 5.0, -0.0]]).unwrap();
        let text = points_to_csv(&x);
        assert!(text.starts_with("x1,x2,x3\n"));
        let back = points_from_csv(&text).unwrap();
        assert_eq!(back.coords().iter().map(|v| v.to_bits()).collect::<Vec<_>>(), x.coords().iter().map(|v| v.to_bits()).collect::<Vec<_>>());
    }

    #[test]
    fn bad_points_files() {
        assert!(points_from_csv("a,b\n1,2\n").is_err());
        assert!(points_from_csv("x1,x2\n1,zz\n").is_err());
    }
}
