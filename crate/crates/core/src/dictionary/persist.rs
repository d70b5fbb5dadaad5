//! On-disk store: a directory holding the dictionary as structured records,
//! the conflict list, an append-only operation log and a lock file that
//! admits one writer process at a time.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use thiserror::Error;

use super::io::{export_dictionary, import_dictionary, Format};
use super::{Conflict, DictionaryError, Store};

const DICTIONARY_FILE: &str = "dictionary.ndjson";
const CONFLICTS_FILE: &str = "conflicts.ndjson";
const LOG_FILE: &str = "operations.log";
const LOCK_FILE: &str = "store.lock";

#[derive(Debug, Error)]
pub enum OpenError {
    #[error("store {0} is locked by another process (remove {0}/store.lock if it is stale)")]
    Locked(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Corrupt {
        path: PathBuf,
        #[source]
        source: DictionaryError,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> OpenError + '_ {
    move |source| OpenError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// An open, locked store directory. The lock is released on drop.
#[derive(Debug)]
pub struct StoreDir {
    root: PathBuf,
    lock: PathBuf,
}

impl StoreDir {
    /// Locks `root` (creating it if needed) and loads its contents.
    pub fn open(root: impl AsRef<Path>) -> Result<(StoreDir, Store), OpenError> {
        let root = root.as_ref().to_path_buf();
        fs::create_dir_all(&root).map_err(io_err(&root))?;
        let lock = root.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                return Err(OpenError::Locked(root));
            }
            Err(e) => return Err(io_err(&lock)(e)),
        }
        let dir = StoreDir { root, lock };
        let store = dir.load()?;
        Ok((dir, store))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn load(&self) -> Result<Store, OpenError> {
        let dict_path = self.root.join(DICTIONARY_FILE);
        let mut store = match fs::read(&dict_path) {
            Ok(bytes) => import_dictionary(&bytes, Format::Structured).map_err(|source| {
                OpenError::Corrupt {
                    path: dict_path.clone(),
                    source,
                }
            })?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => Store::new(),
            Err(e) => return Err(io_err(&dict_path)(e)),
        };
        let conflicts_path = self.root.join(CONFLICTS_FILE);
        let conflicts = match fs::read_to_string(&conflicts_path) {
            Ok(text) => text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| {
                    serde_json::from_str::<Conflict>(l).map_err(|e| OpenError::Corrupt {
                        path: conflicts_path.clone(),
                        source: DictionaryError::Import {
                            row: i + 1,
                            message: e.to_string(),
                        },
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(io_err(&conflicts_path)(e)),
        };
        if !conflicts.is_empty() {
            let entries = store.entries().to_vec();
            store = Store::from_parts(entries, conflicts);
        }
        Ok(store)
    }

    /// Writes the store atomically (temp file + rename per file).
    pub fn save(&self, store: &Store) -> Result<(), OpenError> {
        write_atomic(
            &self.root.join(DICTIONARY_FILE),
            &export_dictionary(store, Format::Structured),
        )?;
        let mut conflicts = String::new();
        for c in store.conflicts() {
            conflicts.push_str(&serde_json::to_string(c).expect("conflict serializes"));
            conflicts.push('\n');
        }
        write_atomic(&self.root.join(CONFLICTS_FILE), conflicts.as_bytes())
    }

    /// Appends one line to the operation log.
    pub fn log(&self, operation: &str, detail: serde_json::Value) -> Result<(), OpenError> {
        let path = self.root.join(LOG_FILE);
        let ts = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let line = serde_json::json!({ "ts": ts, "op": operation, "detail": detail });
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err(&path))?;
        writeln!(f, "{line}").map_err(io_err(&path))
    }
}

impl Drop for StoreDir {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock);
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), OpenError> {
    let tmp = path.with_extension("tmp");
    let mut f = File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(bytes).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{EntryKey, Language, Pos, Source, WordForm};

    #[test]
    fn second_open_is_locked_until_drop() {
        let tmp = tempfile::tempdir().unwrap();
        let (dir, _) = StoreDir::open(tmp.path()).unwrap();
        assert!(matches!(StoreDir::open(tmp.path()), Err(OpenError::Locked(_))));
        drop(dir);
        assert!(StoreDir::open(tmp.path()).is_ok());
    }

    #[test]
    fn save_and_reload() {
        let tmp = tempfile::tempdir().unwrap();
        let mut store = Store::new();
        store.push_entry(
            EntryKey::new("jogi", Language::Vep, Pos::Noun),
            vec![WordForm::new("joven", None, Source::Preexisting)],
            None,
        );
        {
            let (dir, _) = StoreDir::open(tmp.path()).unwrap();
            dir.save(&store).unwrap();
            dir.log("test", serde_json::json!({})).unwrap();
        }
        let (_dir, loaded) = StoreDir::open(tmp.path()).unwrap();
        assert_eq!(loaded, store);
    }
}
