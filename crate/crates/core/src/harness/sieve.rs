use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::cache::{Cache, Lookup, Unresolved};
use super::config::{PipelineConfig, Stage};
use super::pipeline::{Pipeline, SolveReport};
use crate::decomposition::Decomposition;
use crate::error::{Error, Result};

// indices per parallel batch; the cache is flushed and events emitted between batches
const BATCH: u64 = 4096;

/// Which integers to sieve: `n = 24l + 1` for `l` in range, or `n` directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RangeSpec {
    L { lo: u64, hi: u64 },
    N { lo: u64, hi: u64 },
}

impl RangeSpec {
    pub fn bounds(&self) -> (u64, u64) {
        match *self {
            RangeSpec::L { lo, hi } | RangeSpec::N { lo, hi } => (lo, hi),
        }
    }

    /// Number of indices.
    pub fn size(&self) -> u64 {
        let (lo, hi) = self.bounds();
        hi - lo + 1
    }

    pub fn n_of(&self, index: u64) -> u128 {
        match self {
            RangeSpec::L { .. } => 24 * index as u128 + 1,
            RangeSpec::N { .. } => index as u128,
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bounds();
        let min = match self {
            RangeSpec::L { .. } => 1,
            RangeSpec::N { .. } => 2,
        };
        if lo < min || lo > hi {
            return Err(Error::InvalidInput(format!("bad range {lo}..={hi}")));
        }
        // keeps every n inside u64 for event records
        if matches!(self, RangeSpec::L { .. }) && hi > (u64::MAX - 1) / 24 {
            return Err(Error::InvalidInput(format!("l = {hi} is too large")));
        }
        Ok(())
    }
}

impl std::fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RangeSpec::L { lo, hi } => write!(f, "l {lo}..={hi} (n = 24l+1)"),
            RangeSpec::N { lo, hi } => write!(f, "n {lo}..={hi}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SieveReport {
    pub range: RangeSpec,
    pub methods: Vec<Stage>,
    /// Solved indices per stage.
    pub counts: BTreeMap<Stage, u64>,
    /// Indices no selected stage resolved, ascending.
    pub exceptions: Vec<u64>,
    /// Indices where a resource limit left the answer open, ascending.
    pub inconclusive: Vec<u64>,
    /// Indices answered from the cache without solver work.
    pub cached: u64,
    pub solver_calls: u64,
    pub wall_time_ms: u64,
}

impl SieveReport {
    pub fn solved(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report always serializes")
    }

    pub fn to_text(&self) -> String {
        let list = |v: &[u64]| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
            }
        };
        let mut s = String::new();
        let methods = self
            .methods
            .iter()
            .map(|m| m.name())
            .collect::<Vec<_>>()
            .join(",");
        let rows: Vec<(String, String)> = [
            ("range".to_string(), self.range.to_string()),
            ("methods".into(), methods),
            ("indices".into(), self.range.size().to_string()),
            ("solved".into(), self.solved().to_string()),
        ]
        .into_iter()
        .chain(
            self.counts
                .iter()
                .map(|(k, v)| (format!("  {k}"), v.to_string())),
        )
        .chain([
            (
                "exceptions".into(),
                format!("{}: {}", self.exceptions.len(), list(&self.exceptions)),
            ),
            (
                "inconclusive".into(),
                format!("{}: {}", self.inconclusive.len(), list(&self.inconclusive)),
            ),
            ("cached".into(), self.cached.to_string()),
            ("solver calls".into(), self.solver_calls.to_string()),
            (
                "wall time".into(),
                format!("{:.3} s", self.wall_time_ms as f64 / 1000.0),
            ),
        ])
        .collect();
        let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            let _ = writeln!(s, "{k:<w$}  {v}");
        }
        s
    }

    /// One row per exception or inconclusive index.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["index", "n", "status"])?;
        let mut rows: Vec<(u64, &str)> = self
            .exceptions
            .iter()
            .map(|&i| (i, "exception"))
            .chain(self.inconclusive.iter().map(|&i| (i, "inconclusive")))
            .collect();
        rows.sort_unstable();
        for (i, status) in rows {
            w.write_record([
                i.to_string(),
                self.range.n_of(i).to_string(),
                status.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Default)]
pub struct SieveOptions<'a> {
    /// Read the cache and skip indices it already answers.
    pub resume: bool,
    /// JSON-lines progress sink.
    pub events: Option<&'a mut dyn Write>,
}

#[derive(Debug)]
enum Outcome {
    Cached(Stage),
    CachedExhausted,
    Solved(Stage, Decomposition),
    Exhausted,
    Inconclusive(String),
}

impl Outcome {
    fn label(&self) -> &'static str {
        match self {
            Outcome::Cached(_) | Outcome::Solved(..) => "solved",
            Outcome::CachedExhausted | Outcome::Exhausted => "exception",
            Outcome::Inconclusive(_) => "inconclusive",
        }
    }
}

fn classify(r: SolveReport) -> Outcome {
    if r.inconclusive() {
        let reason = r
            .stages
            .iter()
            .find_map(|s| match &s.status {
                super::pipeline::StageStatus::Inconclusive { reason } => Some(reason.clone()),
                _ => None,
            })
            .unwrap_or_default();
        return Outcome::Inconclusive(reason);
    }
    match (r.solved_by(), r.decomposition) {
        (Some(st), Some(d)) => Outcome::Solved(st, d),
        _ => Outcome::Exhausted,
    }
}

fn emit(events: &mut Option<&mut dyn Write>, v: serde_json::Value) -> Result<()> {
    if let Some(w) = events.as_deref_mut() {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

/// Runs the pipeline restricted to `methods` over `range`. The report does
/// not depend on the thread count. With a cache configured, new results are
/// appended; with `opts.resume`, cached answers are reused.
pub fn sieve(
    range: RangeSpec,
    methods: &[Stage],
    cfg: &PipelineConfig,
    mut opts: SieveOptions,
) -> Result<SieveReport> {
    range.validate()?;
    if methods.is_empty() {
        return Err(Error::Config("method filter is empty".into()));
    }
    let start = Instant::now();
    let (lo, hi) = range.bounds();
    let pipeline = Pipeline::for_max_n(cfg.clone(), range.n_of(hi))?;
    let cache = match &cfg.cache {
        Some(p) => Some(Cache::open(p, opts.resume)?),
        None => None,
    };
    let pool = cfg.thread_pool()?;
    let mut report = SieveReport {
        range,
        methods: methods.to_vec(),
        counts: BTreeMap::new(),
        exceptions: Vec::new(),
        inconclusive: Vec::new(),
        cached: 0,
        solver_calls: 0,
        wall_time_ms: 0,
    };
    emit(
        &mut opts.events,
        serde_json::json!({"event": "start", "range": range, "methods": methods, "total": range.size()}),
    )?;

    let mut batch_lo = lo;
    while batch_lo <= hi {
        let batch_hi = hi.min(batch_lo.saturating_add(BATCH - 1));
        let outcomes: Vec<Outcome> = pool.install(|| {
            (batch_lo..=batch_hi)
                .into_par_iter()
                .map(|i| {
                    let n = range.n_of(i);
                    if opts.resume {
                        match cache.as_ref().map(|c| c.lookup(n, methods, cfg)) {
                            Some(Lookup::Solved(d)) => {
                                return Ok(Outcome::Cached(
                                    Stage::of_method(d.method()).expect("cached stage"),
                                ))
                            }
                            Some(Lookup::Exhausted) => return Ok(Outcome::CachedExhausted),
                            _ => {}
                        }
                    }
                    pipeline.solve_with(n, methods).map(classify)
                })
                .collect::<Result<_>>()
        })?;
        for (i, o) in (batch_lo..=batch_hi).zip(outcomes) {
            let n = range.n_of(i);
            match &o {
                Outcome::Cached(st) => {
                    report.cached += 1;
                    *report.counts.entry(*st).or_default() += 1;
                }
                Outcome::CachedExhausted => {
                    report.cached += 1;
                    report.exceptions.push(i);
                }
                Outcome::Solved(st, d) => {
                    report.solver_calls += 1;
                    *report.counts.entry(*st).or_default() += 1;
                    if let Some(c) = &cache {
                        c.append_solved(d)?;
                    }
                }
                Outcome::Exhausted => {
                    report.solver_calls += 1;
                    report.exceptions.push(i);
                    if let Some(c) = &cache {
                        c.append_exhausted(&Unresolved {
                            n,
                            unresolved: methods.to_vec(),
                            bounds: cfg.bounds(),
                        })?;
                    }
                }
                Outcome::Inconclusive(_) => {
                    report.solver_calls += 1;
                    report.inconclusive.push(i);
                }
            }
            if opts.events.is_some() {
                let mut ev = serde_json::json!({"event": "index", "index": i, "n": n as u64, "outcome": o.label()});
                match &o {
                    Outcome::Cached(st) => {
                        ev["stage"] = st.name().into();
                        ev["cached"] = true.into();
                    }
                    Outcome::CachedExhausted => ev["cached"] = true.into(),
                    Outcome::Solved(st, d) => {
                        ev["stage"] = st.name().into();
                        ev["method"] = d.method().to_string().into();
                    }
                    Outcome::Inconclusive(reason) => ev["reason"] = reason.clone().into(),
                    Outcome::Exhausted => {}
                }
                emit(&mut opts.events, ev)?;
            }
        }
        if let Some(c) = &cache {
            c.flush()?;
        }
        batch_lo = batch_hi + 1;
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    emit(
        &mut opts.events,
        serde_json::json!({"event": "finish", "solved": report.solved(), "exceptions": report.exceptions,
            "inconclusive": report.inconclusive, "wall_time_ms": report.wall_time_ms}),
    )?;
    Ok(report)
}
