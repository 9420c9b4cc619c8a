//! Directory of line-delimited JSON files, one per entity type.
//!
//! Every commit rewrites a whole file through a temporary file and a rename, so
//! a reader sees either the previous or the new contents, never a mix.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

/// Environment variable naming a failpoint for crash testing.
pub const FAILPOINT_ENV: &str = "REQLINT_FAILPOINT";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path} line {line}: {source}")]
    Corrupt { path: PathBuf, line: usize, source: serde_json::Error },
    #[error("injected failure before renaming {0}")]
    Injected(PathBuf),
}

/// Where an injected crash happens during a commit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failpoint {
    /// Return an error after the temporary file is written.
    ErrorBeforeRename,
    /// Abort the process after the temporary file is written.
    AbortBeforeRename,
}

impl Failpoint {
    fn from_env() -> Option<Failpoint> {
        match std::env::var(FAILPOINT_ENV).ok()?.as_str() {
            "error-before-rename" => Some(Failpoint::ErrorBeforeRename),
            "abort-before-rename" => Some(Failpoint::AbortBeforeRename),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
    failpoint: Option<Failpoint>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io { path: path.to_path_buf(), source }
}

impl Store {
    /// Opens (creating if needed) a store directory and removes leftovers of
    /// interrupted commits.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Store, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        for entry in fs::read_dir(&dir).map_err(io_err(&dir))? {
            let path = entry.map_err(io_err(&dir))?.path();
            if path.extension().is_some_and(|e| e == "tmp") {
                log::warn!("removing interrupted write {}", path.display());
                fs::remove_file(&path).map_err(io_err(&path))?;
            }
        }
        Ok(Store { dir, failpoint: Failpoint::from_env() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn set_failpoint(&mut self, failpoint: Option<Failpoint>) {
        self.failpoint = failpoint;
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.jsonl"))
    }

    /// All records of collection `name`; a missing file is an empty collection.
    pub fn load<T: DeserializeOwned>(&self, name: &str) -> Result<Vec<T>, StoreError> {
        let path = self.path(name);
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(StoreError::Io { path, source: e }),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(io_err(&path))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec = serde_json::from_str(&line)
                .map_err(|source| StoreError::Corrupt { path: path.clone(), line: i + 1, source })?;
            out.push(rec);
        }
        Ok(out)
    }

    /// Replaces collection `name` with `records`.
    pub fn commit<T: Serialize>(&self, name: &str, records: &[T]) -> Result<(), StoreError> {
        let path = self.path(name);
        let tmp = self.dir.join(format!("{name}.jsonl.tmp"));
        {
            let file = File::create(&tmp).map_err(io_err(&tmp))?;
            let mut w = BufWriter::new(file);
            for r in records {
                serde_json::to_writer(&mut w, r).map_err(|e| StoreError::Io { path: tmp.clone(), source: e.into() })?;
                w.write_all(b"\n").map_err(io_err(&tmp))?;
            }
            let file = w.into_inner().map_err(|e| StoreError::Io { path: tmp.clone(), source: e.into_error() })?;
            file.sync_all().map_err(io_err(&tmp))?;
        }
        match self.failpoint {
            Some(Failpoint::ErrorBeforeRename) => return Err(StoreError::Injected(path)),
            Some(Failpoint::AbortBeforeRename) => std::process::abort(),
            None => {}
        }
        fs::rename(&tmp, &path).map_err(io_err(&path))?;
        if let Ok(d) = File::open(&self.dir) {
            let _ = d.sync_all();
        }
        Ok(())
    }
}
