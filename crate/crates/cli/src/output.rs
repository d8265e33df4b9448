use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

fn is_empty_dir(p: &Path) -> Result<bool> {
    Ok(fs::read_dir(p)
        .with_context(|| format!("reading {}", p.display()))?
        .next()
        .is_none())
}

/// Writes `files` (relative path -> bytes) into a staging directory next to
/// `out` and renames it into place, so `out` either holds the complete set
/// or is left as it was.
pub fn commit_dir(out: &Path, files: &BTreeMap<String, Vec<u8>>, overwrite: bool) -> Result<()> {
    let existing = out.exists();
    if existing {
        if !out.is_dir() {
            bail!("{} exists and is not a directory", out.display());
        }
        if !overwrite && !is_empty_dir(out)? {
            bail!("{} is not empty (pass --overwrite to replace it)", out.display());
        }
    }
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).with_context(|| format!("creating {}", parent.display()))?;

    let staging = tempfile::Builder::new()
        .prefix(".taxolint-staging-")
        .tempdir_in(&parent)
        .with_context(|| format!("creating a staging directory in {}", parent.display()))?;
    for (rel, bytes) in files {
        let path = staging.path().join(rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        fs::write(&path, bytes).with_context(|| format!("writing {rel}"))?;
    }

    if !existing {
        let staged = staging.keep();
        return fs::rename(&staged, out).with_context(|| format!("moving results to {}", out.display()));
    }

    let backup = tempfile::Builder::new()
        .prefix(".taxolint-previous-")
        .tempdir_in(&parent)?
        .keep();
    fs::remove_dir(&backup)?;
    fs::rename(out, &backup).with_context(|| format!("moving aside {}", out.display()))?;
    let staged = staging.keep();
    if let Err(e) = fs::rename(&staged, out) {
        let _ = fs::rename(&backup, out);
        let _ = fs::remove_dir_all(&staged);
        return Err(e).with_context(|| format!("moving results to {}", out.display()));
    }
    fs::remove_dir_all(&backup).with_context(|| format!("removing {}", backup.display()))?;
    Ok(())
}
