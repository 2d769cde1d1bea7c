//! Manifest bookkeeping shared by every command.

use std::path::{Path, PathBuf};
use std::time::Instant;

use amalgam_core::io::{CsvTable, RunManifest, RunStatus};
use amalgam_core::norm::GridMeta;
use amalgam_core::GridSpec;
use serde_json::Value;

use crate::config::output_dir;

pub struct Run {
    dir: PathBuf,
    manifest: RunManifest,
    start: Instant,
}

impl Run {
    /// Writes `manifest.json` with status `incomplete` before any work starts.
    pub fn start(command: &str, parameters: Value, out: Option<&Path>) -> Result<Run, String> {
        let dir = output_dir(out);
        let manifest = RunManifest::new(command, parameters);
        manifest.write(&dir).map_err(|e| e.to_string())?;
        Ok(Run {
            dir,
            manifest,
            start: Instant::now(),
        })
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    pub fn grid(&mut self, g: &GridSpec) {
        self.manifest.grid = Some(GridMeta::from(g));
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write_csv(&mut self, name: &str, table: &CsvTable) -> Result<(), String> {
        table.write(&self.dir.join(name)).map_err(|e| e.to_string())?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    pub fn add_output(&mut self, name: &str) {
        self.manifest.outputs.push(name.to_string());
    }

    /// Marks the run complete (or failed when `passed` is false) with a summary.
    pub fn finish(mut self, passed: bool, summary: Value) -> Result<bool, String> {
        self.manifest.status = if passed { RunStatus::Complete } else { RunStatus::Failed };
        self.manifest.summary = summary;
        self.manifest.wall_time_s = Some(self.start.elapsed().as_secs_f64());
        self.manifest.write(&self.dir).map_err(|e| e.to_string())?;
        Ok(passed)
    }

    /// Records an error in the manifest and passes it on.
    pub fn abort(mut self, err: String) -> String {
        self.manifest.status = RunStatus::Failed;
        self.manifest.summary = serde_json::json!({ "error": err });
        self.manifest.wall_time_s = Some(self.start.elapsed().as_secs_f64());
        let _ = self.manifest.write(&self.dir);
        err
    }
}
