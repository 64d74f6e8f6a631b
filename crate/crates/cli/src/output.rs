use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// Contents of the `<output>.meta.json` sidecar.
#[derive(Serialize)]
pub struct Metadata<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    /// SHA-256 of the raw input bytes, when the command reads a graph.
    pub input_sha256: Option<String>,
    /// Resolved arguments of the command.
    pub config: Value,
    /// Command-specific scalars (shell sizes, PMF tail mass, ...).
    pub summary: Value,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes the artifact and its sidecar, or the artifact alone to stdout when
/// no path is given.
pub fn emit(output: Option<&Path>, body: &[u8], meta: &Metadata) -> Result<()> {
    match output {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body)?;
            out.flush()?;
        }
        Some(path) => {
            write_atomic(path, body)?;
            let mut json = serde_json::to_vec_pretty(meta)?;
            json.push(b'\n');
            write_atomic(&sidecar_path(path), &json)?;
        }
    }
    Ok(())
}
