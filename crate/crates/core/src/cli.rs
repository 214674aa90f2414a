//! Command-line front end; `run` maps every outcome to an exit code.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::{Error, Result};
use crate::matching::Matching;
use crate::medial::MedialGraph;
use crate::poset::{find_p3_shelling, GradedPoset, Strictness};
use crate::verify::{default_checks, expand_checks, run_check, Context};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const MAX_BUILD_N: usize = 6;
const MAX_VERIFY_N: usize = 5;

#[derive(Parser, Debug)]
#[command(
    name = "uncrossing",
    version,
    about = "The uncrossing poset on matchings of 2n points"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Number of chords
    #[arg(short, long)]
    pub n: usize,
    /// Write to this file instead of standard output
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build P_n (or P̂_n) and write it as JSON
    Build {
        #[command(flatten)]
        common: Common,
        /// Add the bottom element 0̂
        #[arg(long)]
        bottom: bool,
    },
    /// Run verification checks and print one JSON report per line
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated check names; `lemmas` expands to the lemma suite
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Wall-clock limit in seconds; checks not started in time count as failed
        #[arg(long, default_value_t = 600)]
        budget: u64,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Hasse diagram as DOT
    ExportDot {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        bottom: bool,
    },
    /// Möbius value of two elements against the rank parity
    Mobius {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        bottom: bool,
        /// Element id, or `bottom` / `top`
        x: String,
        y: String,
    },
    /// The five-symbol EL-labeling of P̂_3 and its check
    Shelling {
        #[command(flatten)]
        common: Common,
        /// Require strictly increasing chains
        #[arg(long)]
        strict: bool,
    },
    /// Lensless diagram of a matching and the reductions of its single smoothings
    MedialDemo {
        #[command(flatten)]
        common: Common,
        /// Partner sequence, comma separated (default: the top element)
        #[arg(long, value_delimiter = ',')]
        partners: Vec<usize>,
    },
}

enum Outcome {
    Pass,
    Fail,
}

/// Parses `args` and runs the command; the return value is the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    match execute(cli.command) {
        Ok(Outcome::Pass) => EXIT_PASS,
        Ok(Outcome::Fail) => EXIT_FAIL,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownCheck(_) => Failure::Usage(e.to_string()),
            e => Failure::Run(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(Error::Internal(e.to_string()))
    }
}

fn check_n(n: usize, max: usize) -> std::result::Result<(), Failure> {
    if n == 0 || n > max {
        return Err(Failure::Usage(format!(
            "n must be between 1 and {max}, got {n}"
        )));
    }
    Ok(())
}

fn emit(common: &Common, text: &str) -> std::result::Result<(), Failure> {
    match &common.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn element(p: &GradedPoset, name: &str) -> std::result::Result<usize, Failure> {
    let id = match name {
        "bottom" => p.bottom(),
        "top" => p.top(),
        _ => name.parse().ok(),
    };
    let id = id.ok_or_else(|| Failure::Usage(format!("no element {name:?}")))?;
    p.check_id(id).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(id)
}

fn execute(command: Command) -> std::result::Result<Outcome, Failure> {
    match command {
        Command::Build { common, bottom } => {
            check_n(common.n, MAX_BUILD_N)?;
            let p = GradedPoset::build(common.n, bottom);
            emit(&common, &(p.to_json() + "\n"))?;
            Ok(Outcome::Pass)
        }
        Command::ExportDot { common, bottom } => {
            check_n(common.n, MAX_BUILD_N)?;
            emit(&common, &GradedPoset::build(common.n, bottom).to_dot())?;
            Ok(Outcome::Pass)
        }
        Command::Verify {
            common,
            checks,
            seed,
            budget,
            jobs,
        } => {
            check_n(common.n, MAX_VERIFY_N)?;
            let names = if checks.is_empty() {
                default_checks(common.n)
            } else {
                expand_checks(&checks)?
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()
                .map_err(|e| Failure::Run(Error::Internal(e.to_string())))?;
            pool.install(|| verify(&common, &names, seed, Duration::from_secs(budget)))
        }
        Command::Mobius {
            common,
            bottom,
            x,
            y,
        } => {
            check_n(common.n, MAX_BUILD_N)?;
            let p = GradedPoset::build(common.n, bottom);
            let (x, y) = (element(&p, &x)?, element(&p, &y)?);
            let mu = match p.mobius(x, y) {
                Ok(mu) => mu,
                Err(e @ Error::NotComparable(..)) => {
                    eprintln!("error: {e}");
                    return Ok(Outcome::Fail);
                }
                Err(e) => return Err(e.into()),
            };
            let parity = if (p.rank(y) - p.rank(x)) % 2 == 0 {
                1
            } else {
                -1
            };
            let line = json!({"x": x, "y": y, "mu": mu, "parity": parity});
            emit(&common, &format!("{line}\n"))?;
            Ok(if mu == parity {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Command::Shelling { common, strict } => {
            if common.n != 3 {
                return Err(Failure::Usage(
                    "the labeling is defined for n = 3 only".into(),
                ));
            }
            let p = GradedPoset::build(3, true);
            let strictness = if strict {
                Strictness::Strict
            } else {
                Strictness::Weak
            };
            let found = find_p3_shelling(&p, strictness)?;
            let mut labels = Vec::new();
            for &(a, b) in p.covers() {
                labels.push(json!({"lower": a, "upper": b, "label": found.labeling.symbol(a, b)?}));
            }
            let out =
                json!({"relabeling": found.relabeling, "labels": labels, "report": found.report});
            emit(
                &common,
                &(serde_json::to_string_pretty(&out).expect("serializes") + "\n"),
            )?;
            eprintln!("{}", found.report);
            Ok(if found.report.passed() {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Command::MedialDemo { common, partners } => {
            check_n(common.n, MAX_BUILD_N)?;
            let tau = if partners.is_empty() {
                Matching::top(common.n)
            } else {
                let tau = Matching::new(partners).map_err(|e| Failure::Usage(e.to_string()))?;
                if tau.n() != common.n {
                    return Err(Failure::Usage(format!(
                        "matching has {} chords, n is {}",
                        tau.n(),
                        common.n
                    )));
                }
                tau
            };
            emit(
                &common,
                &(serde_json::to_string_pretty(&medial_demo(&tau)?).expect("serializes") + "\n"),
            )?;
            Ok(Outcome::Pass)
        }
    }
}

fn verify(
    common: &Common,
    names: &[&str],
    seed: u64,
    budget: Duration,
) -> std::result::Result<Outcome, Failure> {
    let start = Instant::now();
    let ctx = Context::new(common.n);
    let mut lines = String::new();
    let mut all_passed = true;
    for name in names {
        if start.elapsed() > budget {
            eprintln!(
                "FAIL {name}: budget of {}s exhausted before start",
                budget.as_secs()
            );
            all_passed = false;
            continue;
        }
        let report = run_check(name, &ctx, seed)?;
        eprintln!("{report}");
        all_passed &= report.passed();
        lines.push_str(&report.to_json());
        lines.push('\n');
    }
    emit(common, &lines)?;
    Ok(if all_passed {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn medial_demo(tau: &Matching) -> Result<serde_json::Value> {
    let g = MedialGraph::from_matching(tau);
    let mut smoothings = Vec::new();
    for v in g.crossings() {
        for dir in 0..2u8 {
            let r = g.resolve_crossing(v, dir)?;
            smoothings.push(json!({
                "crossing": v,
                "dir": dir,
                "lensless": r.is_lensless(),
                "reduced": r.to_matching()?.partners(),
            }));
        }
    }
    Ok(json!({
        "partners": tau.partners(),
        "crossingNumber": tau.crossing_number(),
        "diagram": g.dump(),
        "smoothings": smoothings,
    }))
}
