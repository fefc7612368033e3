//! `unitfrac` command line.
//!
//! Exit status: 0 success, 1 not found or mismatch, 2 usage or input error,
//! 3 resource limit.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use unitfrac::harness::{
    golden_suite, parse_stages, sieve, Pipeline, PipelineConfig, RangeSpec, SieveOptions,
    ENV_CACHE, ENV_THREADS,
};
use unitfrac::identities::{families_tsv, residue_atlas, ResidueStatus};
use unitfrac::oracle::enumerate_all;
use unitfrac::parametric::{parametric_first, parametric_search};
use unitfrac::{verify_triple, Error, UnitTriple};

const OK: u8 = 0;
const NOT_FOUND: u8 = 1;
const USAGE: u8 = 2;
const RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "unitfrac",
    version,
    about = "Exact decompositions 4/n = 1/x + 1/y + 1/z"
)]
struct Cli {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[command(subcommand)]
    cmd: Command,
}

/// Pipeline settings. Precedence: flag, then environment, then config file, then defaults.
#[derive(Args)]
struct ConfigArgs {
    /// TOML file with pipeline settings
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Stage order, e.g. identity,split,multiplier,parametric,oracle
    #[arg(long, global = true)]
    methods: Option<String>,
    #[arg(long, global = true)]
    r1_max: Option<u64>,
    #[arg(long, global = true)]
    w5_max: Option<u64>,
    #[arg(long, global = true)]
    u5_max: Option<u64>,
    /// Pollard-Brent iterations per factorization
    #[arg(long, global = true)]
    work_budget: Option<u64>,
    #[arg(long, global = true)]
    oracle_max_n: Option<u64>,
    /// Append-only JSON-lines result cache
    #[arg(long, global = true, env = ENV_CACHE)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, env = ENV_THREADS)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Find one decomposition of 4/N
    Solve {
        n: u128,
        /// Print every stage's status, not just the decomposition
        #[arg(long)]
        verbose: bool,
    },
    /// Run the pipeline over a range of l (n = 24l+1) or of n
    #[command(group(ArgGroup::new("range").required(true).args(["l_start", "n_start"])))]
    Sieve(SieveArgs),
    /// Check 4/N = 1/X + 1/Y + 1/Z exactly
    Verify { n: u128, x: u128, y: u128, z: u128 },
    /// Enumerate canonical solutions by brute force
    Oracle {
        n: u128,
        #[arg(long)]
        count_only: bool,
        /// Stop after this many solutions
        #[arg(long)]
        max: Option<usize>,
    },
    /// Parametric (w5, u5) witnesses for P = 1 mod 4 within --w5-max/--u5-max, as JSON lines
    Parametric {
        p: u128,
        /// Every witness (the default)
        #[arg(long, conflicts_with = "first")]
        all: bool,
        #[arg(long)]
        first: bool,
    },
    /// Identity families
    Families {
        /// Print the family table as TSV
        #[arg(long)]
        list: bool,
    },
    /// Residue classes mod 120 or 840 and the identity covering each
    Atlas {
        #[arg(long, default_value_t = 840)]
        modulus: u128,
        /// Only print classes no identity covers
        #[arg(long)]
        exceptions: bool,
    },
    /// Verify the twelve hard-case decompositions
    Golden,
}

#[derive(Args)]
struct SieveArgs {
    #[arg(long, requires = "l_end", conflicts_with_all = ["n_start", "n_end"])]
    l_start: Option<u64>,
    #[arg(long, requires = "l_start")]
    l_end: Option<u64>,
    #[arg(long, requires = "n_end")]
    n_start: Option<u64>,
    #[arg(long, requires = "n_start")]
    n_end: Option<u64>,
    /// Write the JSON report here
    #[arg(long)]
    report: Option<PathBuf>,
    /// Reuse cached answers
    #[arg(long)]
    resume: bool,
    /// Write exceptions and inconclusive indices as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Stream JSON-lines progress events to this file ("-" for stderr)
    #[arg(long)]
    events: Option<PathBuf>,
}

fn build_config(a: &ConfigArgs) -> unitfrac::Result<PipelineConfig> {
    let mut cfg = match &a.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(m) = &a.methods {
        cfg.methods = parse_stages(m)?;
    }
    macro_rules! set {
        ($($f:ident),*) => {$(if let Some(v) = a.$f.clone() { cfg.$f = v; })*};
    }
    set!(r1_max, w5_max, u5_max, work_budget, oracle_max_n);
    if a.cache.is_some() {
        cfg.cache = a.cache.clone();
    }
    if a.threads.is_some() {
        cfg.threads = a.threads;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn error_code(e: &Error) -> u8 {
    match e {
        e if e.is_resource_limit() => RESOURCE,
        Error::InvalidInput(_)
        | Error::Config(_)
        | Error::ResidueMismatch { .. }
        | Error::ConditionViolation { .. } => USAGE,
        _ => NOT_FOUND,
    }
}

fn run(cli: Cli) -> unitfrac::Result<u8> {
    let cfg = build_config(&cli.cfg)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match cli.cmd {
        Command::Solve { n, verbose } => {
            let r = Pipeline::new(cfg)?.solve(n)?;
            if verbose || !r.solved() {
                writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
            } else if let Some(d) = &r.decomposition {
                writeln!(out, "{}", d.to_json())?;
            }
            if r.solved() {
                OK
            } else if r.inconclusive() {
                eprintln!("unitfrac: no decomposition of 4/{n}; some stages hit resource limits");
                RESOURCE
            } else {
                eprintln!("unitfrac: no decomposition of 4/{n} within the configured bounds");
                NOT_FOUND
            }
        }
        Command::Sieve(s) => {
            let range = match (s.l_start, s.l_end, s.n_start, s.n_end) {
                (Some(lo), Some(hi), ..) => RangeSpec::L { lo, hi },
                (_, _, Some(lo), Some(hi)) => RangeSpec::N { lo, hi },
                _ => {
                    return Err(Error::InvalidInput(
                        "give --l-start/--l-end or --n-start/--n-end".into(),
                    ))
                }
            };
            let mut sink: Option<Box<dyn Write>> = match &s.events {
                Some(p) if p.as_os_str() == "-" => Some(Box::new(io::stderr())),
                Some(p) => Some(Box::new(BufWriter::new(File::create(p)?))),
                None => None,
            };
            let methods = cfg.methods.clone();
            let opts = SieveOptions {
                resume: s.resume,
                events: sink.as_mut().map(|w| w.as_mut() as &mut dyn Write),
            };
            let report = sieve(range, &methods, &cfg, opts)?;
            if let Some(w) = sink.as_mut() {
                w.flush()?;
            }
            if let Some(p) = &s.report {
                std::fs::write(p, report.to_json() + "\n")?;
            }
            if let Some(p) = &s.csv {
                report.write_csv(p)?;
            }
            write!(out, "{}", report.to_text())?;
            if report.inconclusive.is_empty() {
                OK
            } else {
                RESOURCE
            }
        }
        Command::Verify { n, x, y, z } => {
            let ok =
                n >= 1 && x >= 1 && y >= 1 && z >= 1 && verify_triple(n, &UnitTriple { x, y, z });
            writeln!(out, "{ok}")?;
            if ok {
                OK
            } else {
                NOT_FOUND
            }
        }
        Command::Oracle { n, count_only, max } => {
            if n < 2 {
                return Err(Error::InvalidInput(format!(
                    "n must be at least 2, got {n}"
                )));
            }
            let r = enumerate_all(n, max);
            if count_only {
                writeln!(out, "{}", r.solutions.len())?;
            } else {
                for t in &r.solutions {
                    writeln!(out, "{}", serde_json::to_string(t)?)?;
                }
            }
            if r.solutions.is_empty() {
                NOT_FOUND
            } else {
                OK
            }
        }
        Command::Parametric { p, first, .. } => {
            let (w5_max, u5_max) = (cfg.w5_max as u128, cfg.u5_max as u128);
            let ws = if first {
                parametric_first(p, w5_max, u5_max)?.into_iter().collect()
            } else {
                parametric_search(p, w5_max, u5_max)?
            };
            for w in &ws {
                writeln!(out, "{}", serde_json::to_string(w)?)?;
            }
            if ws.is_empty() {
                NOT_FOUND
            } else {
                OK
            }
        }
        Command::Families { list: _ } => {
            write!(out, "{}", families_tsv())?;
            OK
        }
        Command::Atlas {
            modulus,
            exceptions,
        } => {
            for c in residue_atlas(modulus)? {
                match c.status {
                    ResidueStatus::Resolved(id) if !exceptions => {
                        writeln!(out, "{}\t{id}", c.residue)?
                    }
                    ResidueStatus::PossibleException => writeln!(out, "{}\t-", c.residue)?,
                    _ => {}
                }
            }
            OK
        }
        Command::Golden => {
            let mut all = true;
            for r in golden_suite() {
                let t = r.triple;
                let status = if r.passed() { "PASS" } else { "FAIL" };
                write!(
                    out,
                    "{status} ({}) l={} n={} ({}, {}, {})",
                    r.label, r.l, r.n, t.x, t.y, t.z
                )?;
                if let Some(note) = &r.label_mismatch {
                    write!(out, " [{note}]")?;
                }
                writeln!(out)?;
                all &= r.passed();
            }
            if all {
                OK
            } else {
                NOT_FOUND
            }
        }
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("unitfrac: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
