//! Append-only JSON-lines store of sieve results.
//!
//! Each line is either a decomposition record or an "exhausted" record
//! `{"n": .., "unresolved": [stages], "bounds": {..}}` saying those stages
//! found nothing under those bounds. Every decomposition is re-verified and
//! replayed on load. A torn final line (crash mid-write) is truncated away.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::config::{Bounds, PipelineConfig, Stage};
use super::pipeline::replay;
use crate::decomposition::{Decomposition, Method};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unresolved {
    pub n: u128,
    pub unresolved: Vec<Stage>,
    pub bounds: Bounds,
}

/// What the cache knows about one `n` for a given stage list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lookup<'a> {
    Solved(&'a Decomposition),
    Exhausted,
    Miss,
}

pub struct Cache {
    path: PathBuf,
    solved: BTreeMap<u128, Vec<Decomposition>>,
    unresolved: BTreeMap<u128, Vec<Unresolved>>,
    writer: Mutex<BufWriter<File>>,
}

/// Whether `d` is something the current bounds could have produced.
fn within_bounds(d: &Decomposition, cfg: &PipelineConfig) -> bool {
    let le = |k: &str, max: u64| d.param(k).is_none_or(|v| v <= max as u128);
    match d.method() {
        Method::MultiplierSplit => le("r1", cfg.r1_max),
        Method::Parametric => le("w5", cfg.w5_max) && le("u5", cfg.u5_max),
        Method::Oracle => d.n() <= cfg.oracle_max_n as u128,
        _ => true,
    }
}

fn truncate_torn_tail(file: &mut File) -> Result<()> {
    let len = file.metadata()?.len();
    if len == 0 {
        return Ok(());
    }
    let mut buf = Vec::new();
    file.seek(SeekFrom::Start(0))?;
    file.read_to_end(&mut buf)?;
    if buf.last() != Some(&b'\n') {
        let keep = buf.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        file.set_len(keep as u64)?;
    }
    Ok(())
}

impl Cache {
    /// Opens (creating if needed) the cache at `path`. With `load`, existing
    /// records are read, verified and indexed; otherwise they are ignored
    /// and new records are only appended.
    pub fn open(path: &Path, load: bool) -> Result<Cache> {
        let mut file = OpenOptions::new()
            .read(true)
            .create(true)
            .append(true)
            .open(path)?;
        truncate_torn_tail(&mut file)?;
        let mut cache = Cache {
            path: path.to_path_buf(),
            solved: BTreeMap::new(),
            unresolved: BTreeMap::new(),
            writer: Mutex::new(BufWriter::new(file.try_clone()?)),
        };
        if load {
            file.seek(SeekFrom::Start(0))?;
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                cache.ingest(&line).map_err(|e| {
                    Error::InvalidInput(format!("{}:{}: {e}", path.display(), i + 1))
                })?;
            }
        }
        Ok(cache)
    }

    fn ingest(&mut self, line: &str) -> Result<()> {
        // parsed straight into the target types; `Value` would lose u128 precision
        #[derive(Deserialize)]
        struct Probe {
            unresolved: Option<serde::de::IgnoredAny>,
        }
        if serde_json::from_str::<Probe>(line)?.unresolved.is_some() {
            let u: Unresolved = serde_json::from_str(line)?;
            let slot = self.unresolved.entry(u.n).or_default();
            if !slot.contains(&u) {
                slot.push(u);
            }
        } else {
            let d = Decomposition::from_json(line)?;
            replay(&d)?;
            let slot = self.solved.entry(d.n()).or_default();
            if !slot.iter().any(|e| e.method() == d.method()) {
                slot.push(d);
            }
        }
        Ok(())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Number of distinct `n` with a stored decomposition.
    pub fn solved_len(&self) -> usize {
        self.solved.len()
    }

    pub fn decompositions(&self, n: u128) -> &[Decomposition] {
        self.solved.get(&n).map_or(&[], Vec::as_slice)
    }

    /// A stored decomposition from the earliest stage of `stages` that
    /// fits `cfg`'s bounds; else whether a matching exhausted record covers
    /// all of `stages`.
    pub fn lookup(&self, n: u128, stages: &[Stage], cfg: &PipelineConfig) -> Lookup<'_> {
        let ds = self.decompositions(n);
        for &st in stages {
            if let Some(d) = ds
                .iter()
                .find(|d| Stage::of_method(d.method()) == Some(st) && within_bounds(d, cfg))
            {
                return Lookup::Solved(d);
            }
        }
        let bounds = cfg.bounds();
        let covered = self.unresolved.get(&n).is_some_and(|us| {
            us.iter()
                .any(|u| u.bounds == bounds && stages.iter().all(|s| u.unresolved.contains(s)))
        });
        if covered {
            Lookup::Exhausted
        } else {
            Lookup::Miss
        }
    }

    pub fn append_solved(&self, d: &Decomposition) -> Result<()> {
        let mut w = self.writer.lock().expect("cache writer poisoned");
        writeln!(w, "{}", d.to_json())?;
        Ok(())
    }

    pub fn append_exhausted(&self, u: &Unresolved) -> Result<()> {
        let mut w = self.writer.lock().expect("cache writer poisoned");
        writeln!(w, "{}", serde_json::to_string(u)?)?;
        Ok(())
    }

    pub fn flush(&self) -> Result<()> {
        let mut w = self.writer.lock().expect("cache writer poisoned");
        w.flush()?;
        w.get_ref().sync_data()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{params, UnitTriple};

    fn d409() -> Decomposition {
        Decomposition::new(
            409,
            UnitTriple::new(104, 6544, 85072).unwrap(),
            Method::MultiplierSplit,
            params([("m", 102), ("r", 2), ("a", 1), ("b", 13), ("r1", 2)]),
        )
        .unwrap()
    }

    #[test]
    fn round_trip_and_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let cfg = PipelineConfig::default();
        {
            let c = Cache::open(&path, true).unwrap();
            c.append_solved(&d409()).unwrap();
            c.append_exhausted(&Unresolved {
                n: 409,
                unresolved: vec![Stage::Split],
                bounds: cfg.bounds(),
            })
            .unwrap();
            c.flush().unwrap();
        }
        let c = Cache::open(&path, true).unwrap();
        assert_eq!(
            c.lookup(409, &[Stage::Split, Stage::Multiplier], &cfg),
            Lookup::Solved(&d409())
        );
        assert_eq!(c.lookup(409, &[Stage::Split], &cfg), Lookup::Exhausted);
        assert_eq!(c.lookup(409, &[Stage::Parametric], &cfg), Lookup::Miss);
        let tight = PipelineConfig {
            r1_max: 1,
            ..cfg.clone()
        };
        assert_eq!(c.lookup(409, &[Stage::Multiplier], &tight), Lookup::Miss);
        // different bounds: the exhausted record does not apply
        assert_eq!(c.lookup(409, &[Stage::Split], &tight), Lookup::Miss);
        assert_eq!(c.lookup(577, &[Stage::Split], &cfg), Lookup::Miss);
    }

    #[test]
    fn torn_tail_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        std::fs::write(&path, format!("{}\n{{\"n\": 5", d409().to_json())).unwrap();
        let c = Cache::open(&path, true).unwrap();
        assert_eq!(c.solved_len(), 1);
        c.append_solved(&d409()).unwrap();
        c.flush().unwrap();
        drop(c);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(
            Cache::open(&path, true).unwrap().decompositions(409).len(),
            1
        );
    }

    #[test]
    fn tampered_lines_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let bad = d409().to_json().replace("85072", "85073");
        std::fs::write(&path, format!("{bad}\n")).unwrap();
        assert!(Cache::open(&path, true).is_err());
        // a verifying triple whose witness does not replay
        let wrong = d409().to_json().replace("\"b\":13", "\"b\":12");
        assert_ne!(wrong, d409().to_json());
        std::fs::write(&path, format!("{wrong}\n")).unwrap();
        assert!(Cache::open(&path, true).is_err());
        // without loading, nothing is read
        assert!(Cache::open(&path, false).is_ok());
    }
}
