use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use expsplit::harness::{emit_report, run_plan, table_plan, verify, Aggregation, ErrorKind, ExperimentPlan, Format};
use expsplit::integrate::{Backend, Method, SplitDisplay, TraceMode};
use expsplit::matfun::KrylovConfig;
use expsplit::problems::{benchmark, BENCHMARK_NAMES};

#[derive(Parser, Debug)]
#[command(name = "expsplit", version, about = "Convergence experiments for corrected exponential splitting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one step-size ladder.
    Run(RunArgs),
    /// Run the configuration of one published table.
    Reproduce(ReproduceArgs),
    /// Run the property checks.
    Verify,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    problem: String,
    #[arg(long)]
    method: String,
    #[arg(long)]
    h: f64,
    /// Comma-separated, strictly decreasing step sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<f64>,
    #[arg(long = "T")]
    t_end: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    #[arg(long)]
    table: usize,
    /// Use the published mesh width where the default is coarser.
    #[arg(long)]
    full_h: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    #[arg(long, value_enum, default_value_t = ErrorArg::Both)]
    error: ErrorArg,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long, value_enum, default_value_t = TraceArg::Numeric)]
    trace: TraceArg,
    #[arg(long, value_enum, default_value_t = DisplayArg::Chained)]
    split_display: DisplayArg,
    /// Reduction of the one-step errors of a local-error run.
    #[arg(long, value_enum, default_value_t = AggregationArg::Max)]
    local_aggregation: AggregationArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BackendArg {
    Dense,
    Krylov,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ErrorArg {
    Local,
    Global,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Pretty,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AggregationArg {
    Max,
    Mean,
    First,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TraceArg {
    Numeric,
    Exact,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DisplayArg {
    Chained,
    Literal,
}

/// Failure classes map onto exit codes 2 (usage) and 1 (numerics).
enum Failure {
    Usage(String),
    Numerical(String),
}

impl CommonArgs {
    fn apply(&self, plan: &mut ExperimentPlan) {
        if let Some(b) = self.backend {
            plan.backend = match b {
                BackendArg::Dense => Backend::DensePrecomputed,
                BackendArg::Krylov => Backend::Krylov(KrylovConfig::default()),
            };
        }
        plan.errors = match self.error {
            ErrorArg::Local => ErrorKind::Local,
            ErrorArg::Global => ErrorKind::Global,
            ErrorArg::Both => ErrorKind::Both,
        };
        plan.trace = match self.trace {
            TraceArg::Numeric => TraceMode::Numeric,
            TraceArg::Exact => TraceMode::Exact,
        };
        plan.split_display = match self.split_display {
            DisplayArg::Chained => SplitDisplay::Chained,
            DisplayArg::Literal => SplitDisplay::Literal,
        };
        plan.aggregation = match self.local_aggregation {
            AggregationArg::Max => Aggregation::Max,
            AggregationArg::Mean => Aggregation::Mean,
            AggregationArg::First => Aggregation::First,
        };
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Pretty => Format::Pretty,
        }
    }
}

fn run_args_plan(args: &RunArgs) -> Result<ExperimentPlan, Failure> {
    if benchmark(&args.problem).is_none() {
        return Err(Failure::Usage(format!(
            "unknown problem `{}` (known: {})",
            args.problem,
            BENCHMARK_NAMES.join(", ")
        )));
    }
    let method: Method = args.method.parse().map_err(|e: expsplit::Error| Failure::Usage(e.to_string()))?;
    let mut plan = ExperimentPlan::new(&args.problem, method, args.h, args.k.clone(), args.t_end);
    args.common.apply(&mut plan);
    Ok(plan)
}

fn execute(plan: &ExperimentPlan, common: &CommonArgs) -> Result<(), Failure> {
    plan.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let started = Instant::now();
    let report = run_plan(plan).map_err(|e| match e {
        expsplit::Error::Config(_) | expsplit::Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
        other => Failure::Numerical(other.to_string()),
    })?;
    let text = emit_report(&report, common.format());
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Numerical(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    eprintln!(
        "{} {} h={} T={} in {:.1}s",
        plan.problem,
        plan.method,
        plan.h,
        plan.t_end,
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

fn run_verify() -> Result<(), Failure> {
    let checks = verify::run_all();
    let mut failed = 0;
    for c in &checks {
        println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        return Err(Failure::Numerical(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => run_args_plan(args).and_then(|plan| execute(&plan, &args.common)),
        Command::Reproduce(args) => {
            table_plan(args.table, args.full_h).map_err(|e| Failure::Usage(e.to_string())).and_then(|mut plan| {
                args.common.apply(&mut plan);
                execute(&plan, &args.common)
            })
        }
        Command::Verify => run_verify(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
