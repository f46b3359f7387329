use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use ezr::bench::{load_records, run_bench, run_cell, BenchPlan, Method, RankReport, DEFAULT_BUDGETS, DEFAULT_REPEATS};
use ezr::dataset::read_manifest;
use ezr::evalstats::Evaluator;
use ezr::synth::{gen_sparse, SynthSpec};
use ezr::Dataset;

#[derive(Parser)]
#[command(name = "ezr", version, about = "Label-frugal multi-objective optimization and benchmarking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one optimizer once and print its record as JSON.
    Run {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "ezr")]
        method: Method,
        #[arg(long, default_value_t = 32)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep datasets x methods x budgets x seeds into a JSONL file.
    Bench {
        /// Dataset CSV; repeat for several.
        #[arg(long = "data")]
        data: Vec<PathBuf>,
        /// File listing one dataset path per line.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "ezr,random,kpp")]
        methods: Vec<Method>,
        #[arg(long, value_delimiter = ',')]
        budgets: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_REPEATS)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "results.jsonl")]
        out: PathBuf,
    },
    /// Summarize a JSONL results file: win fractions and mean optimality.
    Rank {
        records: PathBuf,
        /// Also write the `method,budget,win_fraction` CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Generate a synthetic dataset with a planted set of key columns.
    Synth {
        #[arg(long, default_value_t = 1000)]
        rows: usize,
        #[arg(long, default_value_t = 20)]
        attrs: usize,
        #[arg(long, default_value_t = 3)]
        keys: usize,
        #[arg(long, default_value_t = 1)]
        objectives: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { data, method, budget, seed } => {
            let d = Dataset::load_csv(&data)?;
            let eval = Evaluator::new(&d).with_context(|| format!("cannot score {}", data.display()))?;
            let rec = run_cell(&d, &eval, method, budget, seed)
                .with_context(|| format!("{method} with budget {budget} on {}", data.display()))?;
            println!("{}", serde_json::to_string(&rec)?);
        }
        Command::Bench { mut data, manifest, methods, budgets, repeats, seed, out } => {
            if let Some(m) = manifest {
                data.extend(read_manifest(&m)?);
            }
            if data.is_empty() {
                bail!("no datasets given (use --data or --manifest)");
            }
            let plan = BenchPlan {
                datasets: data,
                methods,
                budgets: budgets.unwrap_or_else(|| DEFAULT_BUDGETS.to_vec()),
                repeats,
                base_seed: seed,
                output: out,
            };
            let records = run_bench(&plan)?;
            eprintln!("wrote {} records to {}", records.len(), plan.output.display());
        }
        Command::Rank { records, csv } => {
            let rs = load_records(&records).with_context(|| format!("reading {}", records.display()))?;
            let report = RankReport::from_records(&rs)?;
            print!("{}\n{}\n{}", report.win_table(), report.optimality_table(), report.to_csv());
            if let Some(p) = csv {
                std::fs::write(&p, report.to_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Command::Synth { rows, attrs, keys, objectives, noise, seed, out } => {
            let spec = SynthSpec { rows, attrs, keys, objectives, noise, seed };
            let syn = gen_sparse(&spec)?;
            let sidecar = syn.save(&out)?;
            eprintln!("wrote {} and {}", out.display(), sidecar.display());
            println!("{}", syn.optimum);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
