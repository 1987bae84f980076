//! Regression store: oracle-derived constants kept as sorted `key = value`
//! lines. Only a `--freeze` run writes it.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub const STORE_ENV: &str = "MATCHLATTICE_STORE";
const HEADER: &str = "# matchlattice regression store, format 1";

/// `$MATCHLATTICE_STORE`, falling back to the checked-in file.
pub fn default_path() -> PathBuf {
    std::env::var_os(STORE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("regression.store"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Match,
    Frozen,
    Mismatch { stored: String },
    Missing,
}

impl Status {
    pub fn ok(&self) -> bool {
        matches!(self, Status::Match | Status::Frozen)
    }
}

#[derive(Debug, Clone)]
pub struct Store {
    path: PathBuf,
    values: BTreeMap<String, String>,
    freeze: bool,
    dirty: bool,
}

impl Store {
    /// Loads `path`; a missing file is an empty store.
    pub fn load(path: impl Into<PathBuf>, freeze: bool) -> io::Result<Self> {
        let path = path.into();
        let mut values = BTreeMap::new();
        match fs::read_to_string(&path) {
            Ok(text) => {
                for (i, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let (k, v) = line.split_once(" = ").ok_or_else(|| {
                        io::Error::new(
                            io::ErrorKind::InvalidData,
                            format!("{}:{}: expected `key = value`", path.display(), i + 1),
                        )
                    })?;
                    values.insert(k.trim().to_string(), v.trim().to_string());
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok(Store { path, values, freeze, dirty: false })
    }

    pub fn in_memory(freeze: bool) -> Self {
        Store { path: PathBuf::new(), values: BTreeMap::new(), freeze, dirty: false }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn freezing(&self) -> bool {
        self.freeze
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl fmt::Display) {
        let value = value.to_string();
        if self.values.get(key) != Some(&value) {
            self.values.insert(key.to_string(), value);
            self.dirty = true;
        }
    }

    /// Freezes `value` under `key` when freezing, compares otherwise.
    pub fn check(&mut self, key: &str, value: impl fmt::Display) -> Status {
        let value = value.to_string();
        if self.freeze {
            self.set(key, &value);
            return Status::Frozen;
        }
        match self.values.get(key) {
            None => Status::Missing,
            Some(v) if *v == value => Status::Match,
            Some(v) => Status::Mismatch { stored: v.clone() },
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("{HEADER}\n");
        for (k, v) in &self.values {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    /// Writes the store if a freeze changed it.
    pub fn save(&mut self) -> io::Result<()> {
        if self.dirty && !self.path.as_os_str().is_empty() {
            fs::write(&self.path, self.render())?;
            self.dirty = false;
        }
        Ok(())
    }
}
