//! Command-line front end: `analyze`, `sweep-ising`, `assist`, `gen`.
//!
//! Exit codes: 0 success, 1 parse/validation error, 2 invalid arguments,
//! 3 internal numerical fault.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::correlations::{DiscordReport, LocalEntropies};
use crate::distribution::{distribution_report, DistributionReport};
use crate::error::{Error, Result};
use crate::io::{
    self, generate, parse_state, sweep_ising, write_sweep_csv, Generator, GeneratorParams, StateFile,
    SweepParams,
};
use crate::linalg::LogBase;
use crate::measures::MeasureKind;
use crate::search::{dump_pure_members, max_accessible_coherence, EnsembleMemberDump, SearchOptions};

#[derive(Debug, Parser)]
#[command(name = "cohdist", version, about = "Coherence distribution in bipartite quantum states")]
pub struct Cli {
    /// Logarithm base for entropic quantities.
    #[arg(long, global = true, value_enum, default_value = "2")]
    pub log_base: LogBaseArg,

    /// Also write a machine-readable report to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,

    /// Master seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LogBaseArg {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

impl From<LogBaseArg> for LogBase {
    fn from(a: LogBaseArg) -> Self {
        match a {
            LogBaseArg::Two => LogBase::Two,
            LogBaseArg::E => LogBase::E,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    L1,
    Rel,
    Both,
}

impl MeasureArg {
    fn kinds(self) -> Vec<MeasureKind> {
        match self {
            MeasureArg::L1 => vec![MeasureKind::L1],
            MeasureArg::Rel => vec![MeasureKind::RelativeEntropy],
            MeasureArg::Both => MeasureKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition the coherence of a bipartite state file.
    Analyze {
        state: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        measure: MeasureArg,
    },
    /// Sweep J/lambda for the two-site Ising ground state and write a CSV table.
    SweepIsing {
        #[arg(long, default_value_t = 0.0)]
        jmin: f64,
        #[arg(long, default_value_t = 10.0)]
        jmax: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, default_value_t = io::DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search pure-state decompositions for the maximal accessible coherence.
    Assist {
        state: PathBuf,
        #[arg(long, value_enum, default_value = "rel")]
        measure: MeasureArg,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
        /// Write the best ensemble (JSON) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated state file.
    Gen {
        /// One of: intro-example, bell, schmidt, ising-ground, product-plus.
        generator: String,
        #[arg(long)]
        j: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Coefficient matrix file (single-system state file) for `schmidt`.
        #[arg(long)]
        coefficients: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::InvalidState { .. }
        | Error::Io(_)
        | Error::NotHermitian { .. }
        | Error::DimensionMismatch { .. }
        | Error::InvalidCoefficients(_) => 1,
        Error::InvalidParameter(_) | Error::InvalidRange(_) | Error::UnknownGenerator(_) => 2,
        Error::PartitionViolation { .. } | Error::RankMismatch { .. } => 3,
    }
}

/// Parses `args` and runs the command, writing human output to `out` and
/// errors to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let base: LogBase = cli.log_base.into();
    match &cli.command {
        Command::Analyze { state, measure } => {
            let report = analyze(state, *measure, base)?;
            print_analysis(out, &report)?;
            if let Some(path) = &cli.json {
                write_json(path, &report)?;
            }
        }
        Command::SweepIsing {
            jmin,
            jmax,
            steps,
            epsilon,
            lambda,
            out: csv_path,
        } => {
            let params = SweepParams {
                jmin: *jmin,
                jmax: *jmax,
                steps: *steps,
                epsilon: *epsilon,
                lambda: *lambda,
            };
            let rows = sweep_ising(&params)?;
            match csv_path {
                Some(path) => {
                    let file = fs::File::create(path)?;
                    write_sweep_csv(std::io::BufWriter::new(file), &rows, base)?;
                    writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
                }
                None => write_sweep_csv(&mut *out, &rows, base)?,
            }
        }
        Command::Assist {
            state,
            measure,
            restarts,
            max_iters,
            out: ensemble_path,
        } => {
            if *restarts == 0 {
                return Err(Error::InvalidParameter("--restarts must be at least 1".into()));
            }
            let opts = SearchOptions {
                restarts: *restarts,
                max_iters: *max_iters,
                seed: cli.seed,
                ensemble_size: None,
            };
            let reports = assist(state, *measure, &opts, base)?;
            for r in &reports {
                writeln!(
                    out,
                    "{:<17} best_value {}  upper_bound {}  converged {}  restarts {}",
                    r.measure.name(),
                    io::format_value(r.best_value),
                    r.upper_bound.map(io::format_value).unwrap_or_else(|| "inf".into()),
                    r.converged,
                    r.restarts_used
                )?;
            }
            if let Some(path) = ensemble_path {
                write_json(path, &reports)?;
            }
            if let Some(path) = &cli.json {
                write_json(path, &reports)?;
            }
        }
        Command::Gen {
            generator,
            j,
            lambda,
            epsilon,
            coefficients,
            out: path,
        } => {
            let gen: Generator = generator.parse()?;
            let coefficients = match coefficients {
                Some(p) => Some(parse_state(p)?.density_matrix().matrix().clone()),
                None => None,
            };
            let params = GeneratorParams {
                j: *j,
                lambda: *lambda,
                epsilon: *epsilon,
                coefficients,
            };
            let state = generate(gen, &params)?;
            io::write_state(path, &StateFile::from_bipartite(&state))?;
            writeln!(out, "wrote {generator} state to {}", path.display())?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub dims: [usize; 2],
    pub log_base: &'static str,
    pub reports: Vec<DistributionReport>,
    pub discord: DiscordReport,
    pub negativity: f64,
}

fn log_base_name(base: LogBase) -> &'static str {
    match base {
        LogBase::Two => "2",
        LogBase::E => "e",
    }
}

/// Partition plus discord for a state file. Entropic values are in `base`.
pub fn analyze(path: &Path, measure: MeasureArg, base: LogBase) -> Result<AnalysisReport> {
    let state = parse_state(path)?.into_bipartite()?;
    let factor = base.from_bits(1.0);
    let reports = measure
        .kinds()
        .into_iter()
        .map(|kind| {
            let r = distribution_report(&state, kind)?;
            Ok(if kind.is_entropic() { r.scaled(factor) } else { r })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnalysisReport {
        dims: [state.dim_a(), state.dim_b()],
        log_base: log_base_name(base),
        reports,
        discord: DiscordReport::from_entropies(&LocalEntropies::of(&state)).scaled(factor),
        negativity: state.negativity(),
    })
}

fn print_analysis(out: &mut dyn Write, a: &AnalysisReport) -> Result<()> {
    writeln!(out, "state dims {}x{}  (entropies in log base {})", a.dims[0], a.dims[1], a.log_base)?;
    writeln!(
        out,
        "{:<17} {:>18} {:>18} {:>18} {:>18} {:>18} {:>18} {:>18}",
        "measure", "c_total", "c_a", "acc_a", "c_b", "acc_b", "remaining", "residual"
    )?;
    for r in &a.reports {
        write!(out, "{:<17}", r.measure.name())?;
        for v in r.parts().iter().chain(std::iter::once(&r.residual)) {
            write!(out, " {:>18}", io::format_value(*v))?;
        }
        writeln!(out)?;
    }
    let d = &a.discord;
    writeln!(out, "mutual_info      {}", io::format_value(d.mutual_info))?;
    writeln!(out, "discord_left     {}", io::format_value(d.discord_left))?;
    writeln!(out, "discord_right    {}", io::format_value(d.discord_right))?;
    writeln!(out, "discord_both     {}", io::format_value(d.discord_both))?;
    writeln!(out, "classical_left   {}", io::format_value(d.classical_left))?;
    writeln!(out, "classical_both   {}", io::format_value(d.classical_both))?;
    writeln!(out, "negativity       {}", io::format_value(a.negativity))?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct AssistReport {
    pub measure: MeasureKind,
    pub seed: u64,
    pub best_value: f64,
    /// `None` when no finite bound is available.
    pub upper_bound: Option<f64>,
    pub converged: bool,
    pub restarts_used: usize,
    pub ensemble: Vec<EnsembleMemberDump>,
}

pub fn assist(path: &Path, measure: MeasureArg, opts: &SearchOptions, base: LogBase) -> Result<Vec<AssistReport>> {
    let parsed = parse_state(path)?;
    let rho = parsed.density_matrix();
    Ok(measure
        .kinds()
        .into_iter()
        .map(|kind| {
            let r = max_accessible_coherence(rho, kind, opts);
            let factor = if kind.is_entropic() { base.from_bits(1.0) } else { 1.0 };
            AssistReport {
                measure: kind,
                seed: opts.seed,
                best_value: r.best_value * factor,
                upper_bound: r.upper_bound.is_finite().then_some(r.upper_bound * factor),
                converged: r.converged,
                restarts_used: r.restarts_used,
                ensemble: dump_pure_members(&r.best_ensemble),
            }
        })
        .collect())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
