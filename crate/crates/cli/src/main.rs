use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use labeleval::commands::{self, Written};
use labeleval::config::{Overrides, RunConfig};
use labeleval::CliError;

/// Evaluate ingredient-list OCR output against COCO ground truth.
#[derive(Parser)]
#[command(name = "labeleval", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score OCR documents with the chosen strategies and write reports
    Evaluate {
        /// TOML run configuration; flags override its values
        #[arg(long, short)]
        config: Option<PathBuf>,
        #[command(flatten)]
        flags: Overrides,
    },
    /// Compare all four grouping strategies on the same documents
    Ablation {
        #[arg(long, short)]
        config: Option<PathBuf>,
        #[command(flatten)]
        flags: Overrides,
    },
    /// Generate a synthetic corpus from a spec file (JSON or TOML)
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Stratified train/test split of a COCO dataset by language
    Split {
        #[arg(long)]
        coco: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0.2)]
        fraction: f64,
        #[arg(long, short)]
        output: PathBuf,
    },
}

fn summarize(w: &Written) {
    for c in &w.report.coverage {
        println!(
            "{}: {} documents, {} evaluated, {} skipped without a label, {} labels without a document",
            c.engine,
            c.documents,
            c.evaluated,
            c.skipped_unlabeled.len(),
            c.missing_documents.len()
        );
    }
    for r in &w.report.results {
        let a = &r.aggregate;
        println!(
            "{:<12} {:<12} F1 {:.3}  fuzzy {:.3}  P {:.3}  R {:.3}  cat {:.1}%  n {}",
            r.engine, r.strategy, a.f1, a.fuzzy_f1, a.precision, a.recall, a.catastrophic_pct, a.n
        );
    }
    for t in &w.report.pairwise {
        println!("{:<12} {} vs {}: dF1 {:+.3}  p {:.4}", t.engine, t.a, t.b, t.delta_f1, t.p_value);
    }
    for f in &w.files {
        println!("wrote {}", f.display());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evaluate { config, flags } => {
            let cfg = RunConfig::resolve(config.as_deref(), &flags)?;
            summarize(&commands::evaluate(&cfg)?);
        }
        Command::Ablation { config, flags } => {
            let cfg = RunConfig::resolve(config.as_deref(), &flags)?;
            summarize(&commands::ablation(&cfg)?);
        }
        Command::Generate { spec, output, count, seed } => {
            let n = commands::generate(&spec, &output, count, seed)?;
            println!("wrote {n} items to {}", output.display());
        }
        Command::Split { coco, seed, fraction, output } => {
            let (counts, warnings) = commands::split(&coco, seed, fraction, &output)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            for (lang, (train, test)) in counts {
                println!("{lang}: train {train}, test {test}");
            }
            println!("wrote {}", output.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
