//! Append-only json-lines store of chamber periods.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arrangement::Arrangement;
use crate::error::Result;
use crate::quadrature::{PeriodValue, QuadSettings};

#[derive(Serialize, Deserialize)]
struct Line {
    key: String,
    period: PeriodValue,
}

/// Content hash of everything a chamber period depends on.
pub fn period_key(arr: &Arrangement, chamber: &[i8], settings: &QuadSettings) -> String {
    let mut h = Sha256::new();
    h.update(arr.label.as_bytes());
    h.update([0]);
    h.update(arr.equation().as_bytes());
    h.update([0]);
    h.update(arr.octic_scale().to_string().as_bytes());
    h.update([0]);
    h.update(chamber.iter().map(|&s| s as u8).collect::<Vec<_>>());
    h.update(serde_json::to_vec(settings).expect("settings serialize"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Default)]
pub struct PeriodCache {
    path: Option<PathBuf>,
    entries: Mutex<HashMap<String, PeriodValue>>,
}

impl PeriodCache {
    /// A cache that keeps nothing between runs.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Load `path` if it exists; new entries are appended to it.
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let l: Line = serde_json::from_str(&line)?;
                entries.insert(l.key, l.period);
            }
        }
        Ok(Self { path: Some(path.to_path_buf()), entries: Mutex::new(entries) })
    }

    pub fn get(&self, key: &str) -> Option<PeriodValue> {
        self.entries.lock().expect("cache lock").get(key).cloned()
    }

    pub fn insert(&self, key: String, period: PeriodValue) -> Result<()> {
        let mut entries = self.entries.lock().expect("cache lock");
        if let Some(path) = &self.path {
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            let line = serde_json::to_string(&Line { key: key.clone(), period: period.clone() })?;
            writeln!(f, "{line}")?;
        }
        entries.insert(key, period);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
