//! Output files, name sidecars and run manifests.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::json;
use sha2::{Digest, Sha256};

use sts_core::io::write_names;

/// Everything a manifest records about the current invocation.
pub struct Run {
    pub argv: Vec<String>,
    pub subcommand: String,
    pub seed: u64,
    pub node_budget: u64,
    pub inputs: Vec<PathBuf>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    let mut hasher = Sha256::new();
    io::copy(&mut file, &mut hasher)?;
    Ok(hex::encode(hasher.finalize()))
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    with_suffix(out, ".names")
}

pub fn manifest_path(out: &Path) -> PathBuf {
    with_suffix(out, ".manifest.json")
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes `body` by streaming it through a buffered writer.
pub fn write_with<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    body(&mut w).with_context(|| format!("writing {}", path.display()))?;
    w.flush()?;
    Ok(())
}

/// Writes the main output, its name sidecar (when names are given) and the
/// manifest, then prints the paths.
pub fn emit<F>(run: &Run, out: &Path, names: Option<&[String]>, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    write_with(out, body)?;
    let mut outputs = vec![out.to_path_buf()];
    if let Some(names) = names {
        let side = sidecar_path(out);
        std::fs::write(&side, write_names(names)).with_context(|| format!("writing {}", side.display()))?;
        outputs.push(side);
    }
    write_manifest(run, out, &outputs)?;
    for p in &outputs {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn write_manifest(run: &Run, out: &Path, outputs: &[PathBuf]) -> Result<()> {
    let digest = |p: &PathBuf| -> Result<serde_json::Value> {
        Ok(json!({ "path": p.display().to_string(), "sha256": sha256_file(p)? }))
    };
    let manifest = json!({
        "tool": "sts",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": run.subcommand,
        "argv": run.argv,
        "seed": run.seed,
        "node_budget": run.node_budget,
        "inputs": run.inputs.iter().map(digest).collect::<Result<Vec<_>>>()?,
        "outputs": outputs.iter().map(digest).collect::<Result<Vec<_>>>()?,
    });
    let path = manifest_path(out);
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}
