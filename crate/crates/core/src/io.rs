//! Field container, CSV tables and run manifests.
//!
//! The binary container is a flat little-endian `f64` stream:
//!
//! ```text
//! n, L, N, M, t_1 … t_M, then M·N^n complex values as (re, im) pairs
//! ```
//!
//! with slices in time order and each slice in row-major order. A plain
//! field is stored as `M = 1`, `t_1 = 0`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::grid::{GridSpec, SampledField, SpaceTimeField};
use crate::norm::GridMeta;
use crate::{Error, Result};

fn header_int(v: f64, name: &str) -> Result<usize> {
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v < 1e12 {
        Ok(v as usize)
    } else {
        Err(Error::Parse(format!("container header field {name} is not a count: {v}")))
    }
}

pub fn encode_container(stf: &SpaceTimeField) -> Vec<u8> {
    let g = &stf.grid;
    let m = stf.times.len();
    let mut out = Vec::with_capacity(8 * (4 + m + 2 * m * g.len()));
    let mut put = |v: f64| out.extend_from_slice(&v.to_le_bytes());
    put(g.dim() as f64);
    put(g.half_length());
    put(g.points() as f64);
    put(m as f64);
    for &t in &stf.times {
        put(t);
    }
    for s in &stf.slices {
        for v in &s.values {
            put(v.re);
            put(v.im);
        }
    }
    out
}

pub fn decode_container(bytes: &[u8]) -> Result<SpaceTimeField> {
    if bytes.len() % 8 != 0 {
        return Err(Error::Parse(format!(
            "container length {} is not a multiple of 8",
            bytes.len()
        )));
    }
    let words: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    if words.len() < 4 {
        return Err(Error::Parse("container header truncated".into()));
    }
    let dim = header_int(words[0], "n")?;
    let half_length = words[1];
    let points = header_int(words[2], "N")?;
    let m = header_int(words[3], "M")?;
    let grid = GridSpec::new(dim, half_length, points)?;
    let expected = 4 + m + 2 * m * grid.len();
    if words.len() != expected {
        return Err(Error::Parse(format!(
            "container holds {} values, header implies {expected}",
            words.len()
        )));
    }
    let times = words[4..4 + m].to_vec();
    let body = &words[4 + m..];
    let slices = (0..m)
        .map(|i| {
            let chunk = &body[2 * i * grid.len()..2 * (i + 1) * grid.len()];
            let values = chunk
                .chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect();
            SampledField::new(grid, values, format!("slice {i}"))
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceTimeField::new(grid, times, slices)
}

pub fn write_container(path: &Path, stf: &SpaceTimeField) -> Result<()> {
    fs::write(path, encode_container(stf))?;
    Ok(())
}

pub fn write_field(path: &Path, field: &SampledField) -> Result<()> {
    let stf = SpaceTimeField::new(field.grid, vec![0.0], vec![field.clone()])?;
    write_container(path, &stf)
}

pub fn read_container(path: &Path) -> Result<SpaceTimeField> {
    decode_container(&fs::read(path)?)
}

/// Reads a container that must hold exactly one slice.
pub fn read_field(path: &Path) -> Result<SampledField> {
    let mut stf = read_container(path)?;
    if stf.slices.len() != 1 {
        return Err(Error::InvalidField(format!(
            "expected a single field, found {} time slices",
            stf.slices.len()
        )));
    }
    let mut f = stf.slices.pop().expect("one slice");
    f.label = path.display().to_string();
    Ok(f)
}

/// In-memory CSV table with string cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: &[S]) {
        self.rows.push(row.iter().map(|s| s.to_string()).collect());
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()?)?;
        Ok(())
    }
}

/// Fixed-width float formatting so repeated runs produce identical bytes.
pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.12e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Incomplete,
    Complete,
    Failed,
}

/// Record of one command invocation, written before and after the work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub status: RunStatus,
    pub tool_version: String,
    pub parameters: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridMeta>,
    #[serde(default)]
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    #[serde(default)]
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            status: RunStatus::Incomplete,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            parameters,
            seed: None,
            grid: None,
            outputs: Vec::new(),
            wall_time_s: None,
            summary: serde_json::Value::Null,
        }
    }

    pub fn path(dir: &Path) -> PathBuf {
        dir.join("manifest.json")
    }

    /// Writes `manifest.json` atomically (temp file + rename).
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let tmp = dir.join(".manifest.json.tmp");
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(&tmp, text + "\n")?;
        fs::rename(&tmp, Self::path(dir))?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let text = fs::read_to_string(Self::path(dir))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
    }
}
