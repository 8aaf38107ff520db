mod error;
mod input;
mod report;
mod solve;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hobo_core::problems::Example;
use hobo_core::sampler::RunOptions;

use crate::error::{io_error, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "hobo",
    version,
    about = "Higher-order binary optimization: compile, sample, and plan contractions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile and sample a problem, printing the best entries.
    Solve {
        /// `.hobo` source, `.json` term list, or a built-in example name.
        input: String,
        #[command(flatten)]
        run: SolveArgs,
    },
    /// Cost report for contracting the dense tensor directly.
    Path {
        input: String,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Tensor-train cores and their contraction cost report.
    Tt {
        input: String,
        #[command(flatten)]
        plan: PlanArgs,
        /// Relative singular-value cutoff.
        #[arg(long, default_value_t = 1e-12, value_parser = parse_tol)]
        tol: f64,
    },
    /// Write a built-in example's source, or solve it with --run.
    Example {
        #[arg(value_parser = ["seating", "pythagoras", "tsp"])]
        name: String,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        run: bool,
        #[command(flatten)]
        solve: SolveArgs,
    },
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    sweeps: u64,
    /// Gradient steps per shot.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    /// Gradient step size; defaults to 1 / max|coefficient|.
    #[arg(long)]
    step_size: Option<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sampler name: sa or grad.
    #[arg(long, default_value = "sa")]
    sampler: String,
    /// Entries to print.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    top: u64,
    /// Worker threads; all cores when absent.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Recheck tracked energies during annealing.
    #[arg(long)]
    check_energy: bool,
    /// Write the best entry's grid as a PPM image.
    #[arg(long)]
    ppm: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlanArgs {
    /// Planner name: greedy, cheapest or optimal.
    #[arg(long, default_value = "greedy")]
    planner: String,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..1.0).contains(&t) {
        Ok(t)
    } else {
        Err("must lie in [0, 1)".into())
    }
}

impl SolveArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            shots: self.shots as usize,
            sweeps: self.sweeps as usize,
            steps: self.steps as usize,
            step_size: self.step_size,
            seed: self.seed,
            workers: self.workers.map(|w| w as usize),
            check_energy: self.check_energy,
            schedule: None,
        }
    }
}

fn emit<T: serde::Serialize>(
    json: bool,
    doc: &T,
    text: impl FnOnce(&T) -> String,
) -> Result<String, CliError> {
    Ok(if json {
        serde_json::to_string_pretty(doc).expect("serializable") + "\n"
    } else {
        text(doc)
    })
}

fn run_solve(
    spec: &hobo_core::ProblemSpec,
    args: &SolveArgs,
    json: bool,
) -> Result<String, CliError> {
    let sol = solve::solve(spec, &args.sampler, &args.options(), args.top as usize)?;
    if let Some(path) = &args.ppm {
        solve::write_ppm(&sol, path)?;
    }
    emit(json, &sol, solve::render_text)
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Solve { input, run } => run_solve(&input::load(input)?, run, cli.json),
        Command::Path { input, plan } => {
            let doc = report::direct(&input::load(input)?, &plan.planner)?;
            emit(cli.json, &doc, report::render_text)
        }
        Command::Tt { input, plan, tol } => {
            let doc = report::tensor_train(&input::load(input)?, &plan.planner, *tol)?;
            emit(cli.json, &doc, report::render_text)
        }
        Command::Example {
            name,
            output,
            run,
            solve,
        } => {
            let example = Example::from_name(name).expect("restricted by clap");
            let source = example.source();
            if *run {
                return run_solve(&hobo_core::parse_problem(&source)?, solve, cli.json);
            }
            match output {
                Some(path) => {
                    std::fs::write(path, &source).map_err(io_error(path))?;
                    Ok(String::new())
                }
                None => Ok(source),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // A closed pipe is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
