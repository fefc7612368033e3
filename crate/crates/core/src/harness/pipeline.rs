use serde::Serialize;

use super::config::{PipelineConfig, Stage};
use crate::decomposition::{Decomposition, Method, UnitTriple};
use crate::error::{Error, Result};
use crate::identities::{apply_family, classify_with};
use crate::oracle::enumerate_all;
use crate::parametric::{self, parametric_first};
use crate::splitsearch::{self, SplitOutcome, SplitSearch};

// a smallest-prime-factor table costs 4 bytes per entry
const TABLE_LIMIT: u128 = 1 << 25;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum StageStatus {
    Solved,
    /// Searched to the configured bounds, nothing found.
    Exhausted,
    /// A resource limit cut the search short.
    Inconclusive {
        reason: String,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub stage: Stage,
    #[serde(flatten)]
    pub status: StageStatus,
}

/// Outcome of [`Pipeline::solve`]: the first decomposition found, plus what
/// each stage that ran did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub n: u128,
    pub decomposition: Option<Decomposition>,
    pub stages: Vec<StageReport>,
}

impl SolveReport {
    pub fn solved(&self) -> bool {
        self.decomposition.is_some()
    }

    pub fn inconclusive(&self) -> bool {
        !self.solved()
            && self
                .stages
                .iter()
                .any(|s| matches!(s.status, StageStatus::Inconclusive { .. }))
    }

    pub fn solved_by(&self) -> Option<Stage> {
        self.decomposition
            .as_ref()
            .and_then(|d| Stage::of_method(d.method()))
    }
}

pub struct Pipeline {
    cfg: PipelineConfig,
    split: SplitSearch,
}

fn inconclusive(e: Error) -> Result<(StageStatus, Option<Decomposition>)> {
    if e.is_resource_limit() {
        Ok((
            StageStatus::Inconclusive {
                reason: e.to_string(),
            },
            None,
        ))
    } else {
        Err(e)
    }
}

fn from_split(o: SplitOutcome) -> (StageStatus, Option<Decomposition>) {
    match o.found {
        Some(sol) => (StageStatus::Solved, Some(sol.decomposition)),
        None if !o.limits.is_empty() => (
            StageStatus::Inconclusive {
                reason: format!(
                    "{} candidates hit resource limits; first: {}",
                    o.limits.len(),
                    o.limits[0].message
                ),
            },
            None,
        ),
        None => (StageStatus::Exhausted, None),
    }
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        let split = SplitSearch::new(cfg.factorizer());
        Ok(Pipeline { cfg, split })
    }

    /// Like [`Pipeline::new`], with a factor table sized for `n <= max_n`.
    pub fn for_max_n(cfg: PipelineConfig, max_n: u128) -> Result<Self> {
        cfg.validate()?;
        let split = SplitSearch::with_table_for(max_n.min(TABLE_LIMIT), cfg.factorizer());
        Ok(Pipeline { cfg, split })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    /// Runs the configured stages in order.
    pub fn solve(&self, n: u128) -> Result<SolveReport> {
        self.solve_with(n, &self.cfg.methods)
    }

    /// Runs `stages` in the given order, stopping at the first verified decomposition.
    pub fn solve_with(&self, n: u128, stages: &[Stage]) -> Result<SolveReport> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "n must be at least 2, got {n}"
            )));
        }
        let mut report = SolveReport {
            n,
            decomposition: None,
            stages: Vec::new(),
        };
        for &stage in stages {
            let (status, found) = self.run_stage(stage, n)?;
            report.stages.push(StageReport { stage, status });
            if found.is_some() {
                report.decomposition = found;
                break;
            }
        }
        Ok(report)
    }

    fn run_stage(&self, stage: Stage, n: u128) -> Result<(StageStatus, Option<Decomposition>)> {
        let skip = |reason: &str| {
            Ok((
                StageStatus::Skipped {
                    reason: reason.into(),
                },
                None,
            ))
        };
        let m = (n % 4 == 1).then_some(n / 4);
        match stage {
            Stage::Identity => {
                let c = match classify_with(n, self.split.factorizer()) {
                    Ok(c) => c,
                    Err(e) => return inconclusive(e),
                };
                match c.matches.first() {
                    Some(fm) => match apply_family(fm.family, n, &fm.params) {
                        Ok(d) => Ok((StageStatus::Solved, Some(d))),
                        Err(e) => inconclusive(e),
                    },
                    None if !c.unknown.is_empty() => Ok((
                        StageStatus::Inconclusive {
                            reason: format!(
                                "could not decide {:?}",
                                c.unknown.iter().map(|f| f.to_string()).collect::<Vec<_>>()
                            ),
                        },
                        None,
                    )),
                    None => Ok((StageStatus::Exhausted, None)),
                }
            }
            Stage::Split | Stage::Multiplier => {
                let Some(m) = m else {
                    return skip("n is not 1 mod 4");
                };
                let r1_max = if stage == Stage::Split {
                    1
                } else {
                    self.cfg.r1_max as u128
                };
                match self.split.multiplier_search_m(m, r1_max) {
                    Ok(o) => Ok(from_split(o)),
                    Err(e) => inconclusive(e),
                }
            }
            Stage::Parametric => {
                if m.is_none() {
                    return skip("n is not 1 mod 4");
                }
                match parametric_first(n, self.cfg.w5_max as u128, self.cfg.u5_max as u128) {
                    Ok(Some(w)) => Ok((StageStatus::Solved, Some(w.decomposition()?))),
                    Ok(None) => Ok((StageStatus::Exhausted, None)),
                    Err(e) => inconclusive(e),
                }
            }
            Stage::Oracle => {
                if n > self.cfg.oracle_max_n as u128 {
                    return skip("n exceeds oracle_max_n");
                }
                match enumerate_all(n, Some(1)).solutions.first() {
                    Some(&t) => Ok((
                        StageStatus::Solved,
                        Some(Decomposition::new(
                            n,
                            t,
                            Method::Oracle,
                            Default::default(),
                        )?),
                    )),
                    None => Ok((StageStatus::Exhausted, None)),
                }
            }
        }
    }
}

/// Solves `n` with a fresh pipeline for `cfg`.
pub fn solve(n: u128, cfg: &PipelineConfig) -> Result<SolveReport> {
    Pipeline::new(cfg.clone())?.solve(n)
}

/// Re-derives `d`'s triple from its method and parameters and checks it
/// matches the stored one. Oracle and manual records carry no witness and
/// are only re-verified.
pub fn replay(d: &Decomposition) -> Result<()> {
    let t: UnitTriple = match d.method() {
        Method::Identity(id) => apply_family(id, d.n(), d.params())?.triple(),
        Method::Split | Method::MultiplierSplit => splitsearch::replay(d)?,
        Method::Parametric | Method::Corollary => parametric::replay(d)?,
        Method::Oracle | Method::Manual => d.triple(),
    };
    if t.canonical() != d.triple().canonical() {
        return Err(Error::InvalidInput(format!(
            "replaying {d} gives ({}, {}, {})",
            t.x, t.y, t.z
        )));
    }
    Ok(())
}
