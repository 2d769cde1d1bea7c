//! `key = value` config files and output-directory resolution.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

pub const OUT_ENV: &str = "AMALGAM_OUT";
pub const DEFAULT_OUT: &str = "amalgam-out";

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected 'key = value', got '{raw}'", i + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: invalid key '{}'", i + 1, k.trim()));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<Result<PathBuf, String>> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return Some(
                it.next()
                    .map(PathBuf::from)
                    .ok_or_else(|| "--config needs a file path".to_string()),
            );
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(Ok(PathBuf::from(p)));
        }
    }
    None
}

/// Inserts config-file flags right after the subcommand so that explicit
/// flags, which come later, take precedence.
pub fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = path?;
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let pairs = parse_config(&text)?;
    let sub = args
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|i| i + 1)
        .ok_or_else(|| "missing subcommand".to_string())?;
    let mut merged: Vec<OsString> = args[..=sub].to_vec();
    for (k, v) in pairs {
        merged.push(format!("--{k}").into());
        if v != "true" {
            merged.push(v.into());
        }
    }
    merged.extend(args[sub + 1..].iter().cloned());
    Ok(merged)
}

/// `AMALGAM_OUT`, then `--out`, then the default.
pub fn output_dir(flag: Option<&Path>) -> PathBuf {
    match std::env::var_os(OUT_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => flag.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
    }
}
