use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::Failure;

fn parent_of(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn io_failure(e: impl Into<anyhow::Error>, what: String) -> Failure {
    Failure::Io(e.into().context(what))
}

/// Temporary files default to owner-only access; outputs get the usual
/// modes instead (still subject to the umask).
fn builder<'a>(mode: u32) -> tempfile::Builder<'a, 'a> {
    let mut b = tempfile::Builder::new();
    b.prefix(".csmnn-");
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        b.permissions(std::fs::Permissions::from_mode(mode));
    }
    #[cfg(not(unix))]
    let _ = mode;
    b
}

/// Writes `bytes` to a temporary sibling of `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let what = || format!("cannot write {}", path.display());
    let mut tmp = builder(0o644)
        .tempfile_in(parent_of(path))
        .map_err(|e| io_failure(e, what()))?;
    tmp.write_all(bytes).map_err(|e| io_failure(e, what()))?;
    tmp.persist(path).map_err(|e| io_failure(e.error, what()))?;
    Ok(())
}

/// Writes a set of files into `dir`. A new directory is assembled under a
/// temporary name and renamed into place once every file is written.
pub fn write_dir(dir: &Path, files: &[(&str, Vec<u8>)]) -> Result<(), Failure> {
    if dir.is_dir() {
        for (name, bytes) in files {
            write_atomic(&dir.join(name), bytes)?;
        }
        return Ok(());
    }
    let what = || format!("cannot create {}", dir.display());
    let staging = builder(0o755)
        .tempdir_in(parent_of(dir))
        .map_err(|e| io_failure(e, what()))?;
    for (name, bytes) in files {
        std::fs::write(staging.path().join(name), bytes).map_err(|e| io_failure(e, what()))?;
    }
    let staged = staging.keep();
    std::fs::rename(&staged, dir)
        .with_context(what)
        .map_err(|e| {
            let _ = std::fs::remove_dir_all(&staged);
            Failure::Io(e)
        })
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| io_failure(e, format!("cannot read {}", path.display())))
}
