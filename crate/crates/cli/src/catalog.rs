//! Content-addressed on-disk cache of genus-zero class catalogs.

use std::fs;
use std::path::{Path, PathBuf};

use entangle::group::GroupFile;
use entangle::lattice::genus0_exact_level;
use entangle::{MatGroup, Result};
use sha2::{Digest, Sha256};

const KIND: &str = "genus0-exact-level";

pub struct Catalogs {
    dir: Option<PathBuf>,
}

impl Catalogs {
    /// `None` disables persistence.
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    fn key(level: u32, budget: u64) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "entangle|{}|{KIND}|level={level}|budget={budget}",
            env!("CARGO_PKG_VERSION")
        ));
        let digest = h.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(dir: &Path, level: u32, budget: u64) -> PathBuf {
        dir.join(format!("{}.json", Self::key(level, budget)))
    }

    /// Genus-zero classes of exact GL₂-level `level`, read from the cache
    /// when present and written back otherwise.
    pub fn genus0_exact(&self, level: u32, budget: u64) -> Result<Vec<MatGroup>> {
        if let Some(dir) = &self.dir {
            let path = Self::path(dir, level, budget);
            if let Ok(text) = fs::read_to_string(&path) {
                match serde_json::from_str::<Vec<GroupFile>>(&text) {
                    Ok(files) => {
                        log::info!("catalog hit for level {level}: {}", path.display());
                        return files.iter().map(GroupFile::to_group).collect();
                    }
                    Err(e) => log::warn!("ignoring unreadable catalog {}: {e}", path.display()),
                }
            }
        }
        let groups = genus0_exact_level(level, budget)?;
        if let Some(dir) = &self.dir {
            let files: Vec<GroupFile> = groups.iter().map(GroupFile::catalog_entry).collect();
            let path = Self::path(dir, level, budget);
            let written = fs::create_dir_all(dir).and_then(|_| {
                fs::write(
                    &path,
                    serde_json::to_string(&files).expect("serializable catalog"),
                )
            });
            match written {
                Ok(()) => log::info!("catalog stored for level {level}: {}", path.display()),
                Err(e) => log::warn!("could not store catalog {}: {e}", path.display()),
            }
        }
        Ok(groups)
    }
}
