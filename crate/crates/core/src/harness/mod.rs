//! The operational shell: solve pipeline, range sieve, result cache,
//! reports and the golden decompositions.

mod cache;
mod config;
mod golden;
mod pipeline;
mod sieve;

pub use cache::{Cache, Lookup, Unresolved};
pub use config::{parse_stages, Bounds, PipelineConfig, Stage, ENV_CACHE, ENV_THREADS};
pub use golden::{check as check_golden, golden_suite, GoldenItem, GoldenResult, GOLDEN};
pub use pipeline::{replay, solve, Pipeline, SolveReport, StageReport, StageStatus};
pub use sieve::{sieve, RangeSpec, SieveOptions, SieveReport};
