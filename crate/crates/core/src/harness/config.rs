use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decomposition::Method;
use crate::error::{Error, Result};
use crate::exactmath::{Factorizer, DEFAULT_WORK_BUDGET};

/// Environment variable overriding the cache path.
pub const ENV_CACHE: &str = "UNITFRAC_CACHE";
/// Environment variable overriding the worker thread count.
pub const ENV_THREADS: &str = "UNITFRAC_THREADS";

/// One step of the solve pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Identity,
    Split,
    Multiplier,
    Parametric,
    Oracle,
}

impl Stage {
    pub const ALL: [Stage; 5] = [
        Stage::Identity,
        Stage::Split,
        Stage::Multiplier,
        Stage::Parametric,
        Stage::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Identity => "identity",
            Stage::Split => "split",
            Stage::Multiplier => "multiplier",
            Stage::Parametric => "parametric",
            Stage::Oracle => "oracle",
        }
    }

    /// The stage that produces decompositions tagged `m`.
    pub fn of_method(m: Method) -> Option<Stage> {
        match m {
            Method::Identity(_) => Some(Stage::Identity),
            Method::Split => Some(Stage::Split),
            Method::MultiplierSplit => Some(Stage::Multiplier),
            Method::Parametric | Method::Corollary => Some(Stage::Parametric),
            Method::Oracle => Some(Stage::Oracle),
            Method::Manual => None,
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s.trim())
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown method {s:?} (expected one of identity, split, multiplier, parametric, oracle)"
                ))
            })
    }
}

/// Parses `"split,multiplier"`.
pub fn parse_stages(s: &str) -> Result<Vec<Stage>> {
    let stages = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>>>()?;
    if stages.is_empty() {
        return Err(Error::Config("method list is empty".into()));
    }
    Ok(stages)
}

/// Search bounds that decide whether an exhausted search stays exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub r1_max: u64,
    pub w5_max: u64,
    pub u5_max: u64,
    pub oracle_max_n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Stages tried in order.
    pub methods: Vec<Stage>,
    pub r1_max: u64,
    pub w5_max: u64,
    pub u5_max: u64,
    /// Pollard-Brent iterations per factorization.
    pub work_budget: u64,
    pub seed: u64,
    /// The oracle stage only runs for `n` up to this.
    pub oracle_max_n: u64,
    pub cache: Option<PathBuf>,
    /// Worker threads; `None` uses every core.
    pub threads: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            methods: Stage::ALL.to_vec(),
            r1_max: 100,
            w5_max: 1000,
            u5_max: 1000,
            work_budget: DEFAULT_WORK_BUDGET,
            seed: 0,
            oracle_max_n: 10_000,
            cache: None,
            threads: None,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Applies `UNITFRAC_CACHE` and `UNITFRAC_THREADS` through `lookup`.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<()> {
        if let Some(p) = lookup(ENV_CACHE).filter(|s| !s.is_empty()) {
            self.cache = Some(PathBuf::from(p));
        }
        if let Some(t) = lookup(ENV_THREADS).filter(|s| !s.is_empty()) {
            let t = t.parse().map_err(|_| {
                Error::Config(format!(
                    "{ENV_THREADS} must be a positive integer, got {t:?}"
                ))
            })?;
            self.threads = Some(t);
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("method order is empty".into()));
        }
        for (name, v) in [
            ("r1_max", self.r1_max),
            ("w5_max", self.w5_max),
            ("u5_max", self.u5_max),
            ("work_budget", self.work_budget),
            ("oracle_max_n", self.oracle_max_n),
        ] {
            if v < 1 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn bounds(&self) -> Bounds {
        Bounds {
            r1_max: self.r1_max,
            w5_max: self.w5_max,
            u5_max: self.u5_max,
            oracle_max_n: self.oracle_max_n,
        }
    }

    pub fn factorizer(&self) -> Factorizer {
        Factorizer::new(self.work_budget, self.seed)
    }

    pub fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))
    }
}
