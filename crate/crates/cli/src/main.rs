//! `statgeo`: verify, classify and tabulate statistical manifolds.

mod format;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand};
use statgeo::cosymplectic::product_construct;
use statgeo::expr::parse;
use statgeo::fixture::{builtin_fixture, Fixture, BUILTIN_NAMES};
use statgeo::report::Sampling;
use statgeo::spec_file::{load, ManifoldSpec};
use statgeo::structures::classify;
use statgeo::table::{box_center, coefficient_table, TableKind};
use statgeo::verify::check_fixture;


#[derive(Parser)]
#[command(name = "statgeo", version, about = "Verify identities of statistical manifolds with contact and Hermitian structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable identity check and report residuals
    Check {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Classify the almost contact metric structure
    Classify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print a connection, difference tensor or operator table at a point
    Table {
        /// Table to print
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(TableKind::NAMES).map(|s| s.parse::<TableKind>().expect("listed name")))]
        which: TableKind,
        #[command(flatten)]
        input: Input,
        /// Evaluation point, comma separated; defaults to the sampling box center
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Option<Vec<f64>>,
        #[arg(long)]
        json: bool,
    },
    /// Build the product of a line with a Kaehler statistical base
    Product {
        #[command(flatten)]
        input: Input,
        /// Line coefficient lambda(t)
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Output spec path; stdout when omitted
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// Built-in fixture name
    #[arg(long, conflicts_with = "spec")]
    builtin: Option<String>,
    /// JSON manifold spec file
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct SamplingArgs {
    /// Number of sample points
    #[arg(long)]
    points: Option<usize>,
    /// Sampling seed
    #[arg(long)]
    seed: Option<u64>,
    /// Residual tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Sampling interval LO,HI; once for all coordinates or once per coordinate
    #[arg(long = "box", allow_hyphen_values = true)]
    sample_box: Vec<String>,
}

/// Input failures, reported with exit code 2.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn env_tolerance() -> Result<Option<f64>> {
    match std::env::var("STATGEO_TOL") {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| format!("STATGEO_TOL: invalid number `{v}`"))?)),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(anyhow!("STATGEO_TOL: {e}")),
    }
}

/// Loads the fixture; sampling layers are defaults, then `STATGEO_TOL`, then the spec file.
fn load_input(input: &Input) -> Result<(Fixture, Sampling)> {
    let mut base = Sampling::default();
    if let Some(tol) = env_tolerance()? {
        base = base.with_tolerance(tol);
    }
    match (&input.builtin, &input.spec) {
        (Some(name), _) => {
            let f = builtin_fixture(name).map_err(|e| anyhow!("{e}; known: {}", BUILTIN_NAMES.join(", ")))?;
            Ok((f, base))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            load(&text, base).map_err(|e| anyhow!("{}: {e}", path.display()))
        }
        (None, None) => bail!("give a spec file or --builtin NAME"),
    }
}

fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| anyhow!("--box expects LO,HI, got `{s}`"))?;
    let (lo, hi): (f64, f64) = (lo.trim().parse()?, hi.trim().parse()?);
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        bail!("--box interval `{s}` is empty");
    }
    Ok((lo, hi))
}

impl SamplingArgs {
    fn apply(&self, mut s: Sampling, dim: usize) -> Result<Sampling> {
        if let Some(p) = self.points {
            if p == 0 {
                bail!("--points must be positive");
            }
            s.points = p;
        }
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(tol) = self.tol {
            s.tolerance = tol;
        }
        if s.tolerance.is_nan() || s.tolerance <= 0.0 {
            bail!("tolerance must be positive");
        }
        let intervals = self.sample_box.iter().map(|b| parse_interval(b)).collect::<Result<Vec<_>>>()?;
        match intervals.len() {
            0 => {}
            1 => s.sample_box = Some(vec![intervals[0]; dim]),
            n if n == dim => s.sample_box = Some(intervals),
            n => bail!("--box given {n} times for a {dim}-dimensional manifold"),
        }
        Ok(s)
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, InputError> {
    match cli.command {
        Command::Check { input, sampling, json } => {
            let (f, base) = load_input(&input)?;
            let sampling = sampling.apply(base, f.dim())?;
            let report = check_fixture(&f, &sampling);
            if json {
                emit(&(report.to_json() + "\n"))?;
            } else {
                emit(&render::check_text(&report))?;
            }
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Classify { input, sampling, json } => {
            let (f, base) = load_input(&input)?;
            let sampling = sampling.apply(base, f.dim())?;
            let class = classify(&f, &sampling)?;
            match (class, json) {
                (Some(c), true) => {
                    let mut v = serde_json::to_value(c)?;
                    v["summary"] = c.summary().into();
                    emit(&(serde_json::to_string_pretty(&v)? + "\n"))?;
                }
                (Some(c), false) => emit(&(c.summary() + "\n"))?,
                (None, true) => emit("null\n")?,
                (None, false) => emit("no almost contact structure\n")?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { input, which, at, json } => {
            let (f, sampling) = load_input(&input)?;
            let point = match at {
                Some(p) if p.len() != f.dim() => {
                    return Err(anyhow!("--at needs {} coordinates, got {}", f.dim(), p.len()).into())
                }
                Some(p) => p,
                None => box_center(&f, sampling.sample_box.as_deref()),
            };
            let t = coefficient_table(&f, which, &point)?;
            if json {
                emit(&(serde_json::to_string_pretty(&t)? + "\n"))?;
            } else {
                emit(&render::table_text(&t))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Product { input, lambda, out } => {
            let (base, _) = load_input(&input)?;
            let lambda = parse(&lambda, &["t".to_string()]).map_err(|e| anyhow!("--lambda: {e}"))?;
            let product = product_construct(&base, &lambda)?;
            let text = ManifoldSpec::from_fixture(&product)?.to_json();
            match out {
                Some(path) => std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
                None => emit(&(text + "\n"))?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
