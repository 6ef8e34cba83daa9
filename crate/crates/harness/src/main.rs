use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sogas_core::qsub::Phase;
use sogas_harness::demo::grover_demo;
use sogas_harness::experiment::{run_method, run_sweep, Backend, ExperimentConfig, Method, SweepKind};
use sogas_harness::instance_file::parse_instance;
use sogas_harness::instances::Family;
use sogas_harness::output::{emit_csv, emit_plot, emit_trace};
use sogas_harness::HarnessError;

#[derive(Parser)]
#[command(name = "sogas", version, about = "Quantum vs classical fixed-confidence selection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write CSV and chart output.
    Run(RunArgs),
    /// Solve one instance read from a file.
    Solve(SolveArgs),
    /// Print a Grover success-probability check.
    Demo {
        /// Search-space size (power of two).
        #[arg(long)]
        grover: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// size | gap | distribution | single
    #[arg(long)]
    sweep: String,
    /// Comma-separated sizes, inverse gaps or family names.
    #[arg(long, value_delimiter = ',')]
    values: Vec<String>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = ExperimentConfig::DEFAULT_REPLICATIONS)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// contract | statevector-hybrid
    #[arg(long, default_value = "statevector-hybrid")]
    backend: String,
    #[arg(long, default_value_t = 1.0)]
    cost_constant: f64,
    /// Solution count for gap, distribution and single sweeps.
    #[arg(long)]
    size: Option<usize>,
    /// Instance family for size, gap and single sweeps.
    #[arg(long, default_value = "bernoulli")]
    family: String,
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Log-scaled chart axes.
    #[arg(long)]
    log_axes: bool,
    /// Region-search trace CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// sogas | csogas
    #[arg(long, default_value = "sogas")]
    method: String,
    #[arg(long, default_value = "statevector-hybrid")]
    backend: String,
    #[arg(long, default_value_t = 1.0)]
    cost_constant: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run(args: RunArgs) -> Result<(), HarnessError> {
    let sweep: SweepKind = args.sweep.parse()?;
    let values: Vec<&str> = args.values.iter().map(String::as_str).collect();
    let mut cfg = ExperimentConfig::new(sweep, &values);
    cfg.eps = args.epsilon;
    cfg.delta = args.delta;
    cfg.replications = args.reps;
    cfg.seed = args.seed;
    cfg.backend = args.backend.parse()?;
    cfg.cost_constant = args.cost_constant;
    cfg.family = args.family.parse::<Family>()?;
    if let Some(size) = args.size {
        cfg.size = size;
    }
    let out = run_sweep(&cfg)?;
    emit_csv(&out.rows, &args.csv)?;
    if let Some(plot) = &args.plot {
        let dat = emit_plot(&out.rows, plot, args.log_axes)?;
        eprintln!("wrote {} and {}", plot.display(), dat.display());
    }
    if let Some(trace) = &args.trace {
        emit_trace(&out.traces(&cfg.points()?), trace)?;
    }
    for r in &out.rows {
        println!(
            "{:<7} {:>12} mean={:.1} ci95={:.1} pcs={:.3}",
            r.method, r.sweep_value, r.mean_queries, r.ci95, r.pcs
        );
    }
    Ok(())
}

fn solve(args: SolveArgs) -> Result<(), HarnessError> {
    let text = std::fs::read_to_string(&args.instance)
        .map_err(|source| HarnessError::Io { path: args.instance.display().to_string(), source })?;
    let instance = parse_instance(&text, args.epsilon, args.delta)?;
    let method: Method = args.method.parse()?;
    let mut cfg = ExperimentConfig::new(SweepKind::Single, &[]);
    cfg.backend = args.backend.parse::<Backend>()?;
    cfg.cost_constant = args.cost_constant;
    cfg.eps = args.epsilon;
    cfg.delta = args.delta;
    cfg.validate()?;
    let result = run_method(method, &instance, &cfg, args.seed)?;
    match result.selected {
        Some(i) => {
            let s = &instance.solutions()[i];
            println!("selected {} (mean {:.6}, best {:.6})", s.id, s.mean(), instance.best_mean());
        }
        None => println!("no solution selected"),
    }
    println!("eps-optimal {}", result.correct);
    println!("region [{:.6}, {:.6}]", result.final_region.a, result.final_region.b);
    for phase in Phase::ALL {
        println!("{:<20} {}", phase.name(), result.ledger.count(phase));
    }
    println!("{:<20} {}", "total", result.total_queries());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Solve(a) => solve(a),
        Command::Demo { grover } => grover_demo(grover).map(|d| {
            println!("items {} marked {} iterations {}", d.items, d.marked, d.iterations);
            println!("success {:.12} closed form {:.12}", d.success, d.closed_form);
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
