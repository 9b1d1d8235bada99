//! Append-only storage of raw per-sample values, one directory per config hash.

use super::sweep::SweepRecord;
use crate::error::{Error, Result};
use crate::output::fmt_f64;
use serde::Serialize;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

const HEADER: &str = "point,quantity,subregion,sample,value\n";

#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub point: usize,
    pub quantity: String,
    pub subregion: Option<usize>,
    pub sample: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct ResultsStore {
    dir: PathBuf,
}

impl ResultsStore {
    /// Opens `root/<hash>`, writing `config.json` on first use.
    pub fn open<T: Serialize>(root: &Path, hash: &str, config: &T) -> Result<Self> {
        let dir = root.join(hash);
        fs::create_dir_all(&dir)?;
        let cfg = dir.join("config.json");
        if !cfg.exists() {
            fs::write(&cfg, serde_json::to_string_pretty(config)?)?;
        }
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn raw_path(&self) -> PathBuf {
        self.dir.join("raw.csv")
    }

    /// Appends the raw values of a record; records without raw values are rejected.
    pub fn append(&self, record: &SweepRecord) -> Result<()> {
        let path = self.raw_path();
        let fresh = !path.exists();
        let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
        let mut buf = String::new();
        if fresh {
            buf.push_str(HEADER);
        }
        for col in &record.columns {
            let raw = col.raw.as_ref().ok_or_else(|| {
                Error::InvalidParameters("record carries no raw values (set keep_raw)".into())
            })?;
            let sub = col.subregion.map(|a| a.to_string()).unwrap_or_default();
            for (k, v) in raw.iter().enumerate() {
                buf.push_str(&format!(
                    "{},{},{},{},{}\n",
                    record.point.index,
                    col.quantity.name(),
                    sub,
                    k,
                    fmt_f64(*v)
                ));
            }
        }
        f.write_all(buf.as_bytes())?;
        Ok(())
    }

    pub fn read(&self) -> Result<Vec<RawRow>> {
        let path = self.raw_path();
        if !path.exists() {
            return Ok(Vec::new());
        }
        let text = fs::read_to_string(path)?;
        let bad = |l: &str| Error::Domain(format!("malformed raw row: {l}"));
        text.lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                if f.len() != 5 {
                    return Err(bad(l));
                }
                Ok(RawRow {
                    point: f[0].parse().map_err(|_| bad(l))?,
                    quantity: f[1].to_string(),
                    subregion: if f[2].is_empty() {
                        None
                    } else {
                        Some(f[2].parse().map_err(|_| bad(l))?)
                    },
                    sample: f[3].parse().map_err(|_| bad(l))?,
                    value: f[4].parse().map_err(|_| bad(l))?,
                })
            })
            .collect()
    }
}
