//! JSONL result cache for Hall numbers.
//!
//! One file per (quiver hash, q). Each line is `{quiver, q, L, M, N, g}` with
//! `L`, `M`, `N` in the representation serialization format. Lines that fail
//! to parse or belong to another quiver or field are dropped on load. Writes
//! go to a temporary file in the same directory followed by a rename.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const CACHE_ENV: &str = "HALLQ_CACHE_DIR";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Record {
    pub quiver: String,
    pub q: u32,
    #[serde(rename = "L")]
    pub l: serde_json::Value,
    #[serde(rename = "M")]
    pub m: serde_json::Value,
    #[serde(rename = "N")]
    pub n: serde_json::Value,
    pub g: u128,
}

impl Record {
    fn key(&self) -> String {
        record_key(&self.l, &self.m, &self.n)
    }

    /// Parses one cache line; `None` for anything malformed.
    pub fn parse_line(line: &str) -> Option<Record> {
        let r: Record = serde_json::from_str(line).ok()?;
        for v in [&r.l, &r.m, &r.n] {
            let obj = v.as_object()?;
            if !(obj.contains_key("field") && obj.contains_key("dim") && obj.contains_key("mats")) {
                return None;
            }
        }
        Some(r)
    }
}

pub fn record_key(l: &serde_json::Value, m: &serde_json::Value, n: &serde_json::Value) -> String {
    format!("{l}|{m}|{n}")
}

pub struct DiskCache {
    path: PathBuf,
    quiver: String,
    q: u32,
    state: Mutex<State>,
}

#[derive(Default)]
struct State {
    entries: BTreeMap<String, Record>,
    dirty: bool,
    discarded: usize,
}

impl DiskCache {
    pub fn open(dir: &Path, quiver_hash: &str, q: u32) -> Result<DiskCache> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}-q{q}.jsonl", &quiver_hash[..16.min(quiver_hash.len())]));
        let cache = DiskCache { path, quiver: quiver_hash.to_string(), q, state: Mutex::default() };
        cache.reload()?;
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn read_valid(&self) -> Result<(Vec<Record>, usize)> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((Vec::new(), 0)),
            Err(e) => return Err(e.into()),
        };
        let mut good = Vec::new();
        let mut bad = 0;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            match Record::parse_line(line) {
                Some(r) if r.quiver == self.quiver && r.q == self.q => good.push(r),
                _ => bad += 1,
            }
        }
        Ok((good, bad))
    }

    fn reload(&self) -> Result<()> {
        let (records, bad) = self.read_valid()?;
        let mut st = self.state.lock().unwrap();
        for r in records {
            st.entries.insert(r.key(), r);
        }
        st.discarded += bad;
        if bad > 0 {
            st.dirty = true;
        }
        Ok(())
    }

    /// Number of malformed lines dropped so far.
    pub fn discarded(&self) -> usize {
        self.state.lock().unwrap().discarded
    }

    pub fn len(&self) -> usize {
        self.state.lock().unwrap().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, l: &serde_json::Value, m: &serde_json::Value, n: &serde_json::Value) -> Option<u128> {
        self.state.lock().unwrap().entries.get(&record_key(l, m, n)).map(|r| r.g)
    }

    pub fn put(&self, l: serde_json::Value, m: serde_json::Value, n: serde_json::Value, g: u128) {
        let rec = Record { quiver: self.quiver.clone(), q: self.q, l, m, n, g };
        let mut st = self.state.lock().unwrap();
        let key = rec.key();
        if st.entries.get(&key) != Some(&rec) {
            st.entries.insert(key, rec);
            st.dirty = true;
        }
    }

    /// Merges with the file on disk and atomically replaces it.
    pub fn flush(&self) -> Result<()> {
        if !self.state.lock().unwrap().dirty {
            return Ok(());
        }
        let (on_disk, _) = self.read_valid()?;
        let mut st = self.state.lock().unwrap();
        for r in on_disk {
            st.entries.entry(r.key()).or_insert(r);
        }
        let dir = self.path.parent().unwrap_or(Path::new("."));
        let mut tmp = tempfile_in(dir)?;
        for r in st.entries.values() {
            serde_json::to_writer(&mut tmp.1, r)?;
            tmp.1.write_all(b"\n")?;
        }
        tmp.1.sync_all()?;
        drop(tmp.1);
        fs::rename(&tmp.0, &self.path)?;
        st.dirty = false;
        Ok(())
    }
}

impl Drop for DiskCache {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}

fn tempfile_in(dir: &Path) -> Result<(PathBuf, fs::File)> {
    let pid = std::process::id();
    for attempt in 0u32.. {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.subsec_nanos())
            .unwrap_or(0);
        let path = dir.join(format!(".hallq-{pid}-{nanos}-{attempt}.tmp"));
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(f) => return Ok((path, f)),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e.into()),
        }
    }
    unreachable!()
}
