use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fuzzylink::dataset::Dataset;
use fuzzylink::pipeline::{
    compare, emit_report, format_report_table, generate_synthetic, read_truth, run_deterministic,
    run_linkage, run_probabilistic, write_pairs, write_synthetic, LinkageConfig, LinkageRun,
    ScoredSpace, Truth, PAIRS_FILE,
};
use fuzzylink::Result;

/// Fuzzy record linkage of two CSV files.
#[derive(Debug, Parser)]
#[command(name = "fuzzylink", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Inputs {
    /// Linkage configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Left dataset (CSV with a header row).
    #[arg(long)]
    left: PathBuf,
    /// Right dataset (CSV with a header row).
    #[arg(long)]
    right: PathBuf,
    /// Directory for pairs.csv, report.csv and report.txt.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Overrides the clustering and sampling seed from the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Baseline {
    Deterministic,
    Probabilistic,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run fuzzy record linkage as configured.
    Link {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Run a classical baseline.
    Baseline {
        #[arg(value_enum)]
        kind: Baseline,
        #[command(flatten)]
        inputs: Inputs,
        /// Known true pairs (left_id,right_id) for m/u estimation.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Run both baselines and Boolean-logic fuzzy linkage, then report.
    Compare {
        #[command(flatten)]
        inputs: Inputs,
        /// Known true pairs (left_id,right_id) for m/u estimation.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Generate a seeded benchmark: left.csv, right.csv, truth.csv, config.toml.
    Synth {
        #[arg(long, default_value = "synth")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        n_left: usize,
        #[arg(long, default_value_t = 500)]
        n_right: usize,
        /// Probability that a copied record is corrupted.
        #[arg(long, default_value_t = 0.3)]
        corruption: f64,
    },
}

struct Loaded {
    config: LinkageConfig,
    left: Dataset,
    right: Dataset,
}

fn load(inputs: &Inputs) -> Result<Loaded> {
    let mut config = LinkageConfig::from_path(&inputs.config)?;
    if let Some(seed) = inputs.seed {
        config.fcm.seed = seed;
    }
    for notice in &config.notices {
        eprintln!("note: {notice}");
    }
    Ok(Loaded {
        config,
        left: Dataset::from_csv_path(&inputs.left)?,
        right: Dataset::from_csv_path(&inputs.right)?,
    })
}

fn load_truth(path: Option<&Path>) -> Result<Option<Truth>> {
    path.map(read_truth).transpose()
}

fn finish(
    runs: &[LinkageRun],
    out_dir: &Path,
    pairs_name: impl Fn(&LinkageRun) -> String,
) -> Result<()> {
    let reports: Vec<_> = runs.iter().map(|r| r.report.clone()).collect();
    emit_report(&reports, out_dir)?;
    for run in runs {
        for d in &run.diagnostics {
            eprintln!("note [{}]: {d}", run.strategy);
        }
        write_pairs(run, out_dir.join(pairs_name(run)))?;
        eprintln!(
            "{}: {} pairs in {:.2?}",
            run.strategy, run.report.total_pairs, run.report.elapsed
        );
    }
    print!("{}", format_report_table(&reports));
    Ok(())
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Link { inputs } => {
            let Loaded {
                config,
                left,
                right,
            } = load(&inputs)?;
            let run = run_linkage(&config, &left, &right)?;
            finish(&[run], &inputs.out_dir, |_| PAIRS_FILE.into())
        }
        Command::Baseline {
            kind,
            inputs,
            truth,
        } => {
            let Loaded {
                config,
                left,
                right,
            } = load(&inputs)?;
            let truth = load_truth(truth.as_deref())?;
            let space = ScoredSpace::build(&config, &left, &right)?;
            let run = match kind {
                Baseline::Deterministic => run_deterministic(&config, &left, &right, &space)?,
                Baseline::Probabilistic => {
                    run_probabilistic(&config, &left, &right, &space, truth.as_ref())?
                }
            };
            finish(&[run], &inputs.out_dir, |_| PAIRS_FILE.into())
        }
        Command::Compare { inputs, truth } => {
            let Loaded {
                config,
                left,
                right,
            } = load(&inputs)?;
            let truth = load_truth(truth.as_deref())?;
            let cmp = compare(&config, &left, &right, truth.as_ref())?;
            finish(&cmp.runs, &inputs.out_dir, |r| {
                format!("pairs-{}.csv", r.strategy)
            })
        }
        Command::Synth {
            out_dir,
            seed,
            n_left,
            n_right,
            corruption,
        } => {
            let data = generate_synthetic(n_left, n_right, corruption, seed)?;
            write_synthetic(&data, &out_dir)?;
            eprintln!(
                "wrote {} left, {} right records and {} true pairs to {}",
                data.left.len(),
                data.right.len(),
                data.truth.len(),
                out_dir.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
