//! Command-line front end for `ussr-core`.
//!
//! Exit codes: 0 success, 1 disagreement found (or internal error), 2 parse,
//! I/O or usage error, 3 domain violation, 4 resource limit.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ussr_core::basis::{approx_values, lightest_basis};
use ussr_core::instances::{gen_family, is_zero, min_gap, DEFAULT_ENUMERATION_CAP};
use ussr_core::ltf::{synth_lp, synth_round};
use ussr_core::numtheory::square_free_part;
use ussr_core::oracle::decide;
use ussr_core::text::{read_advice, read_instance, write_advice, write_ussr, write_uussr};
use ussr_core::{Advice, DomainSpec, Family};

pub mod bench;
pub mod verify;

pub use bench::{bench_precision, BenchRecord};
pub use verify::{verify_advice, VerificationReport, VerifyMode};

/// Environment variable overriding the number of verification workers.
pub const WORKERS_ENV: &str = "USSR_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ussr_core::Error),
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: ussr_core::Error },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let core = match self {
            CliError::Core(e) | CliError::Input { source: e, .. } => e,
            CliError::Io { .. } => return 2,
        };
        match core {
            ussr_core::Error::Internal(_) => 1,
            ussr_core::Error::Parse { .. } => 2,
            ussr_core::Error::Domain(_) => 3,
            ussr_core::Error::ResourceLimit(_) => 4,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "ussr", version, about = "Exact signs of sums of square roots, with advice synthesis and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the exact sign (-1, 0 or +1) of an instance.
    Sign {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        max_bits: Option<u64>,
    },
    /// Rewrite an instance over the square-free basis.
    Normalize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print whether an instance sums to exactly zero.
    Zero {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print n as c^2 * s with s square-free.
    Decompose { n: u64 },
    /// Smallest nonzero |value| over a coefficient domain.
    MinGap {
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Synthesize advice for a coefficient domain.
    Synth {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, value_enum)]
        method: SynthMethod,
        /// Store the inverse basis matrix (basis advice only).
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        pmant: Option<u64>,
        #[arg(long)]
        pdrop: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide an instance using advice.
    Decide {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        advice: PathBuf,
    },
    /// Check advice against the exact oracle.
    Verify {
        #[arg(long)]
        advice: PathBuf,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0, requires = "samples")]
        seed: u64,
        #[arg(long)]
        report: PathBuf,
    },
    /// Record oracle precision for a family of instances.
    Bench {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        k_max: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct DomainArgs {
    #[arg(long)]
    k: u64,
    #[arg(long = "B")]
    bound: i64,
}

impl DomainArgs {
    fn domain(&self) -> CliResult<DomainSpec> {
        Ok(DomainSpec::new(self.k, self.bound)?)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SynthMethod {
    LtfRound,
    LtfLp,
    Basis,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: ussr_core::Error| e.to_string())
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

fn with_path<T>(path: &Path, r: ussr_core::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Input { path: path.into(), source })
}

fn load_instance(path: &Path) -> CliResult<ussr_core::UussrInstance> {
    let file = with_path(path, read_instance(&read_file(path)?))?;
    Ok(file.to_uussr()?)
}

fn load_advice(path: &Path) -> CliResult<Advice> {
    with_path(path, read_advice(&read_file(path)?))
}

/// Worker count from [`WORKERS_ENV`], else the available parallelism.
pub fn workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Maps `f` over `items` on up to `workers` threads, preserving order.
pub fn parallel_map<T: Sync, U: Send>(
    items: &[T],
    workers: usize,
    f: impl Fn(&T) -> ussr_core::Result<U> + Sync,
) -> ussr_core::Result<Vec<U>> {
    let workers = workers.clamp(1, items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let parts: Vec<ussr_core::Result<Vec<U>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<ussr_core::Result<Vec<U>>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut merged = Vec::with_capacity(items.len());
    for part in parts {
        merged.extend(part?);
    }
    Ok(merged)
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    let mut say = |line: String| {
        let _ = writeln!(out, "{line}");
    };
    match command {
        Command::Sign { input, max_bits } => {
            let inst = load_instance(&input)?;
            say(decide(&inst, max_bits)?.sign.to_string());
        }
        Command::Normalize { input, out } => {
            let inst = load_instance(&input)?;
            write_file(&out, &write_uussr(&inst))?;
        }
        Command::Zero { input } => {
            let inst = load_instance(&input)?;
            say(is_zero(&inst).to_string());
        }
        Command::Decompose { n } => {
            let d = square_free_part(n)?;
            say(format!("{} = {}^2 * {}", d.n, d.core, d.part));
        }
        Command::MinGap { domain } => {
            let gap = min_gap(&domain.domain()?, DEFAULT_ENUMERATION_CAP)?;
            let witness: Vec<String> = gap.witness.delta().iter().map(i64::to_string).collect();
            say(format!(
                "enclosure [{}, {}] ~ {:.12}",
                gap.enclosure.lo(),
                gap.enclosure.hi(),
                gap.enclosure.lo().to_f64()
            ));
            say(format!("witness {}", witness.join(" ")));
        }
        Command::Synth { domain, method, inverse, pmant, pdrop, out } => {
            let dom = domain.domain()?;
            let advice: Advice = match method {
                SynthMethod::LtfRound => synth_round(&dom, DEFAULT_ENUMERATION_CAP)?.into(),
                SynthMethod::LtfLp => synth_lp(&dom, DEFAULT_ENUMERATION_CAP)?.into(),
                SynthMethod::Basis => {
                    let (basis, _) = lightest_basis(&dom, DEFAULT_ENUMERATION_CAP)?;
                    let adv = approx_values(&basis, pmant, pdrop)?;
                    if inverse { adv.with_inverse()? } else { adv }.into()
                }
            };
            write_file(&out, &write_advice(&advice))?;
            say(format!("wrote {} {} advice for {dom}", advice.kind(), advice.method()));
        }
        Command::Decide { input, advice } => {
            let inst = load_instance(&input)?;
            let adv = load_advice(&advice)?;
            say(adv.decide(&inst)?.to_string());
        }
        Command::Verify { advice, exhaustive: _, samples, seed, report } => {
            let adv = load_advice(&advice)?;
            let mode = match samples {
                Some(samples) => VerifyMode::Sampled { samples, seed },
                None => VerifyMode::Exhaustive,
            };
            let rep = verify_advice(&adv, mode, workers())?;
            write_file(&report, &rep.to_csv())?;
            say(format!(
                "{}/{} agree, {} disagree, max {} bits, {:.3}s",
                rep.agree,
                rep.total,
                rep.disagree.len(),
                rep.max_bits_used,
                rep.wall_time.as_secs_f64()
            ));
            if !rep.verified() {
                return Ok(1);
            }
        }
        Command::Bench { family, k_max, seed, out } => {
            let records = bench_precision(family, k_max, seed)?;
            write_file(&out, &bench::records_to_csv(family, k_max, seed, &records))?;
            say(format!("wrote {} records", records.len()));
        }
        Command::Gen { family, k, seed, out } => {
            let inst = gen_family(family, k, seed)?;
            write_file(&out, &write_ussr(&inst))?;
        }
    }
    Ok(0)
}
