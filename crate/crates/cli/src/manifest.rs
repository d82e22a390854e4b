//! Run manifests: the resolved configuration plus run metadata, written in
//! the config format so a manifest can be fed back through `--config`.

use anyhow::{Context, Result};
use qad_core::config::ExperimentConfig;
use std::fs;
use std::path::Path;

pub fn write_manifest(
    path: &Path,
    cfg: &ExperimentConfig,
    subcommand: &str,
    seed: u64,
    threads: usize,
) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("run.tool = qad {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("run.subcommand = {subcommand}\n"));
    out.push_str(&format!("run.seed = {seed}\n"));
    out.push_str(&format!("run.threads = {threads}\n"));
    out.push_str(&cfg.serialize());
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}
