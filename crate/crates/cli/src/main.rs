//! `sbp`: plan, benchmark and render from JSON configs.
//!
//! Exit codes: 0 when the run completed (whether or not a path was found),
//! 2 for input or configuration errors, 3 for internal errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sbp_core::bench::{self, BenchmarkSpec, ConfigDoc, PlanConfig};
use sbp_core::{Error, Registry};

#[derive(Debug, Parser)]
#[command(name = "sbp", version, about = "Sampling-based motion planning runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a single plan and write its JSON record.
    Plan {
        #[arg(long)]
        config: PathBuf,
        /// Also render the run as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Record destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run templates × planners × seeds with rendering off.
    Benchmark {
        #[arg(long)]
        config: PathBuf,
        /// Per-run CSV.
        #[arg(long)]
        out: PathBuf,
        /// Per (template, planner) JSON summary.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
    },
    /// Print the registered planners and samplers.
    List,
    /// Re-run a plan config and render it.
    Render {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

/// Built-ins plus anything registered here at startup.
fn registry() -> Registry {
    Registry::with_builtins()
}

fn write_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Internal(format!("cannot write {}: {e}", path.display()))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| write_failure(path, e))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> sbp_core::Result<()>) -> CliResult {
    let mut w = create(path)?;
    f(&mut w).map_err(|e| write_failure(path, e))?;
    w.flush().map_err(|e| write_failure(path, e))
}

fn load_plan(path: &Path, registry: &Registry) -> CliResult<PlanConfig> {
    match bench::load_config(path, registry)? {
        ConfigDoc::Plan(cfg) => Ok(cfg),
        ConfigDoc::Benchmark(_) => Err(Failure::Input(format!(
            "{} is a benchmark config; use `sbp benchmark`",
            path.display()
        ))),
    }
}

fn load_benchmark(path: &Path, registry: &Registry) -> CliResult<BenchmarkSpec> {
    match bench::load_config(path, registry)? {
        ConfigDoc::Benchmark(spec) => Ok(spec),
        ConfigDoc::Plan(_) => Err(Failure::Input(format!(
            "{} is a single plan config; use `sbp plan`",
            path.display()
        ))),
    }
}

fn plan(config: &Path, svg: Option<PathBuf>, out: Option<PathBuf>) -> CliResult {
    let registry = registry();
    let cfg = load_plan(config, &registry)?;
    let grid = bench::load_map(&cfg.scenario.map_path)?;
    let exec = bench::execute(&cfg, &registry, grid)?;
    if let Some(path) = svg.or(cfg.svg_out.clone()) {
        write_file(&path, |w| exec.render(w))?;
    }
    let json = exec.output().to_json()?;
    match out.or(cfg.record_out.clone()) {
        Some(path) => write_file(&path, |w| Ok(w.write_all(json.as_bytes())?))?,
        None => io::stdout()
            .write_all(json.as_bytes())
            .map_err(|e| Failure::Internal(format!("cannot write stdout: {e}")))?,
    }
    let r = &exec.record;
    match r.cost {
        Some(c) => eprintln!("{}: path found, cost {c:.3}, {} samples", r.planner, r.samples_drawn),
        None => eprintln!("{}: no path after {} samples", r.planner, r.samples_drawn),
    }
    Ok(())
}

fn benchmark(config: &Path, out: &Path, summary: Option<&Path>, jobs: usize) -> CliResult {
    let registry = registry();
    let spec = load_benchmark(config, &registry)?;
    let result = bench::run_benchmark(&spec, &registry, jobs)?;
    write_file(out, |w| bench::write_csv(&result.records, w))?;
    if let Some(path) = summary {
        write_file(path, |w| bench::write_summary(&result.summaries, w))?;
    }
    for s in &result.summaries {
        let cost = s.cost_median.map_or("-".to_string(), |c| format!("{c:.3}"));
        eprintln!(
            "{:<16} {:<12} success {:>3}/{:<3} median cost {cost}",
            s.config_id, s.planner, s.successes, s.runs
        );
    }
    Ok(())
}

fn render(config: &Path, svg: &Path) -> CliResult {
    let registry = registry();
    let cfg = load_plan(config, &registry)?;
    let grid = bench::load_map(&cfg.scenario.map_path)?;
    let exec = bench::execute(&cfg, &registry, grid)?;
    write_file(svg, |w| exec.render(w))
}

fn list() -> CliResult {
    let registry = registry();
    println!("planners: {}", registry.list_planners().join(", "));
    println!("samplers: {}", registry.list_samplers().join(", "));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Plan { config, svg, out } => plan(&config, svg, out),
        Command::Benchmark {
            config,
            out,
            summary,
            jobs,
        } => benchmark(&config, &out, summary.as_deref(), jobs as usize),
        Command::List => list(),
        Command::Render { config, svg } => render(&config, &svg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
