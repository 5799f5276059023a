use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use unlattice::convergence::{check, gauge_table, CheckConfig, Mode};
use unlattice::exec::Exec;
use unlattice::extraction::{extract_ae_subsequence, ExtractConfig};
use unlattice::gallery;
use unlattice::laws::{run_law, LawConfig, LAW_IDS};
use unlattice::sample::DEFAULT_SEED;
use unlattice::spaces::SpacePair;
use unlattice::{Error, ExtScalar, NormValue};

#[derive(Parser)]
#[command(name = "unlattice", version, about = "Exact un-convergence checks on concrete vector lattices")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Indices checked per family.
    #[arg(long, global = true, default_value_t = unlattice::convergence::DEFAULT_HORIZON)]
    horizon: u64,
    /// Test vectors drawn from the dense ideal.
    #[arg(long, global = true, default_value_t = unlattice::spaces::DEFAULT_BUDGET)]
    budget: usize,
    /// Finest level of the ε grid is 2^-eps_depth.
    #[arg(long, global = true, default_value_t = 20)]
    eps_depth: u32,
    /// Evaluate on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Table of exact gauges ‖|y_n| ∧ x‖ against the standard test vectors.
    Gauge {
        #[arg(long)]
        family: String,
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = 16)]
        n_max: u64,
        /// Write the table here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Verdict JSON for one family under one mode of convergence.
    Check {
        #[arg(long)]
        family: String,
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Executable laws.
    Laws {
        #[command(subcommand)]
        action: LawsAction,
    },
    /// Subsequence with summable exceptional sets from a family null in measure.
    Extract {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Sample points for the pointwise spot check.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// The family gallery.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
}

#[derive(Subcommand)]
enum LawsAction {
    Run {
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GalleryAction {
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Un,
    Pointwise,
    Measure,
    Ae,
    Uniform,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Un => Mode::Un,
            ModeArg::Pointwise => Mode::Pointwise,
            ModeArg::Measure => Mode::Measure,
            ModeArg::Ae => Mode::Ae,
            ModeArg::Uniform => Mode::Uniform,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Failures of a run, separated by the exit code they map to.
enum Failure {
    Usage(anyhow::Error),
    Laws,
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(
                Error::UnknownFamily(_)
                | Error::UnknownLaw(_)
                | Error::UnsupportedPair(_)
                | Error::Parse(_)
                | Error::BadParams(_)
                | Error::KindMismatch(_)
                | Error::BadUnit(_)
                | Error::NotDense { .. },
            ) => Failure::Usage(e),
            _ => Failure::Runtime(e),
        }
    }
}

fn seed() -> Result<u64> {
    match std::env::var("UNLATTICE_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Error::BadParams(format!("UNLATTICE_SEED must be an unsigned integer, got `{s}`")).into()),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn check_config(run: &RunArgs) -> Result<CheckConfig> {
    if run.eps_depth == 0 {
        return Err(Error::BadParams("eps-depth must be at least 1".into()).into());
    }
    if run.horizon == 0 || run.budget == 0 {
        return Err(Error::BadParams("horizon and budget must be at least 1".into()).into());
    }
    let mut cfg = CheckConfig::default().with_horizon(run.horizon).with_budget(run.budget);
    cfg.eps_grid = (1..=run.eps_depth as u64).map(unlattice::lattice::rational::dyadic).collect();
    if run.sequential {
        cfg = cfg.with_exec(Exec::Sequential);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// `(num, den, p, approx)`: the gauge is `(num/den)^(1/p)`, or the float `num` when
/// `approx` is set.
fn csv_fields(v: &NormValue) -> (String, String, u32, bool) {
    let exact = |s: &ExtScalar| match s {
        ExtScalar::Finite(r) => (r.numer().to_string(), r.denom().to_string()),
        ExtScalar::PositiveInfinity => ("inf".to_string(), "1".to_string()),
    };
    match (v, v.as_exact()) {
        (_, Some(s)) => {
            let (n, d) = exact(&s);
            (n, d, 1, false)
        }
        (NormValue::Power { p, power }, None) => {
            let (n, d) = exact(power);
            (n, d, *p, false)
        }
        (other, None) => (format!("{:e}", other.to_f64()), "1".to_string(), 1, true),
    }
}

fn run_gauge(run: &RunArgs, family: &str, pair: &str, n_max: u64, csv_path: Option<&Path>) -> Result<()> {
    if n_max == 0 {
        return Err(Error::BadParams("n-max must be at least 1".into()).into());
    }
    let fam = gallery::family(family)?;
    let pair = SpacePair::build(pair)?;
    let (_, rows) = gauge_table(&fam, &pair, n_max, run.budget)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "test_vector_id", "gauge_num", "gauge_den", "power_root", "approx"])?;
    for r in rows {
        let (num, den, p, approx) = csv_fields(&r.value);
        w.write_record([r.n.to_string(), r.test_vector_id.to_string(), num, den, p.to_string(), approx.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    emit(csv_path, &String::from_utf8(bytes)?)
}

fn run_check(run: &RunArgs, family: &str, pair: Option<&str>, mode: Mode, json: Option<&Path>) -> Result<()> {
    let cfg = check_config(run)?;
    let fam = gallery::family(family)?;
    let pair = pair.map(SpacePair::build).transpose()?;
    let v = check(&fam, pair.as_ref(), mode, &cfg)?;
    emit(json, &(v.to_json() + "\n"))
}

fn run_laws(run: &RunArgs, law: Option<&str>, json: Option<&Path>) -> std::result::Result<(), Failure> {
    let mut cfg = LawConfig::default().with_seed(seed()?);
    cfg.check = check_config(run)?;
    let ids: Vec<&str> = match law {
        Some(id) => vec![id],
        None => LAW_IDS.to_vec(),
    };
    let mut reports = Vec::with_capacity(ids.len());
    let mut text = String::new();
    for id in ids {
        let r = run_law(id, &cfg).map_err(anyhow::Error::from)?;
        let failed = r.failures().count();
        text += &format!("{} {} ({} cases, {} failed): {}\n", r.law, if r.passed { "PASS" } else { "FAIL" }, r.cases.len(), failed, r.statement);
        for c in r.failures() {
            text += &format!("  {}: {}\n", c.case, c.detail);
        }
        reports.push(r);
    }
    emit(None, &text)?;
    if let Some(p) = json {
        let body = serde_json::to_string_pretty(&reports).context("serializing law reports")?;
        emit(Some(p), &(body + "\n"))?;
    }
    if reports.iter().all(|r| r.passed) { Ok(()) } else { Err(Failure::Laws) }
}

fn run_extract(run: &RunArgs, family: &str, k: u32, samples: usize, json: Option<&Path>) -> Result<()> {
    if run.horizon == 0 {
        return Err(Error::BadParams("horizon must be at least 1".into()).into());
    }
    let fam = gallery::family(family)?;
    let cfg = ExtractConfig { horizon: run.horizon, samples, seed: seed()?, ..ExtractConfig::default() };
    let r = extract_ae_subsequence(&fam, None, k, &cfg)?;
    emit(json, &(r.to_json() + "\n"))
}

fn run_gallery(format: Format) -> Result<()> {
    let entries = gallery::entries();
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&entries)? + "\n",
        Format::Text => {
            let mut s = String::new();
            for e in &entries {
                s += &format!("{}\n  params: {}\n  {}\n", e.name, e.params, e.anchor);
                for x in &e.expected {
                    s += &format!("  {:<12} {:<10} {:?}\n", x.pair, x.mode.to_string(), x.class);
                }
            }
            s
        }
    };
    emit(None, &text)
}

fn dispatch(cli: &Cli) -> std::result::Result<(), Failure> {
    let run = &cli.run;
    match &cli.command {
        Command::Gauge { family, pair, n_max, csv } => run_gauge(run, family, pair, *n_max, csv.as_deref())?,
        Command::Check { family, pair, mode, json } => run_check(run, family, pair.as_deref(), (*mode).into(), json.as_deref())?,
        Command::Laws { action: LawsAction::Run { law, json } } => run_laws(run, law.as_deref(), json.as_deref())?,
        Command::Extract { family, k, json, samples } => run_extract(run, family, *k, *samples, json.as_deref())?,
        Command::Gallery { action: GalleryAction::List { format } } => run_gallery(*format)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Laws) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
