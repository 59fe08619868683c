use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use tweetseq::config::{check, Severity, CONFIG_VERSION};
use tweetseq::harness::Outcome;
use tweetseq::{
    datasets, lexicon, report, run_experiment, validate_config, DatasetFormat, ExperimentConfig, Overrides,
};
use tweetseq_core::ensemble::EnsembleKind;
use tweetseq_core::features::Vectorizer;
use tweetseq_core::pipeline::{run_pipeline, validate_sequence, PipelineOptions};
use tweetseq_core::{ClassifierKind, Sequence};

#[derive(Parser)]
#[command(name = "tweetseq", version, about = "Order-aware tweet preprocessing and classification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment grid described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Preset alias (T1..T8, PROPOSED) or comma-separated Roman numerals.
        #[arg(long)]
        sequence: Option<String>,
        #[arg(long, value_parser = parse_vectorizer)]
        vectorizer: Option<Vectorizer>,
        #[arg(long, value_parser = parse_model)]
        model: Option<ClassifierKind>,
        #[arg(long, value_parser = parse_ensemble)]
        ensemble: Option<EnsembleKind>,
        /// Reject sequences that break an ordering rule.
        #[arg(long)]
        strict: bool,
        /// Skip spelling correction.
        #[arg(long)]
        no_spell: bool,
    },
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Apply a sequence to a corpus file and write it as `id,text,label`.
    Preprocess {
        #[arg(long)]
        sequence: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "generic_csv")]
        format: DatasetFormat,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        no_spell: bool,
    },
}

fn parse_vectorizer(s: &str) -> Result<Vectorizer, String> {
    Vectorizer::parse(s).ok_or_else(|| format!("unknown vectorizer {s:?}; expected count or tfidf"))
}

fn parse_model(s: &str) -> Result<ClassifierKind, String> {
    s.parse().map_err(|e: tweetseq_core::Error| e.to_string())
}

fn parse_ensemble(s: &str) -> Result<EnsembleKind, String> {
    s.parse().map_err(|e: tweetseq_core::Error| e.to_string())
}

fn print_diagnostics(d: &tweetseq::Diagnostics) {
    for item in &d.items {
        let tag = match item.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        eprintln!("{tag}: {}", item.message);
    }
}

fn run(config: &Path, overrides: Overrides) -> Result<ExitCode> {
    let mut cfg = ExperimentConfig::load(config)?;
    cfg.apply(&overrides);
    if cfg.version != CONFIG_VERSION {
        bail!("unsupported config version {} (expected {CONFIG_VERSION})", cfg.version);
    }
    print_diagnostics(&check(&cfg));
    let out = run_experiment(&cfg);
    let dir = cfg.output_dir();
    for p in report::write_reports(&out.report, &dir)? {
        println!("wrote {}", p.display());
    }
    for (id, model) in &out.models {
        let name: String = id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
        model.save(&dir.join("models").join(format!("{name}.json")))?;
    }
    for c in &out.report.cells {
        match &c.outcome {
            Outcome::Ok { test, .. } => println!("{:<48} accuracy {:.4}", c.id, test.accuracy),
            Outcome::Failed { error } => println!("{:<48} failed: {error}", c.id),
        }
    }
    for e in &out.report.errors {
        eprintln!("error: {e}");
    }
    Ok(if out.report.all_failed() { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn validate(config: &Path) -> Result<ExitCode> {
    let d = validate_config(config)?;
    print_diagnostics(&d);
    if d.is_empty() {
        println!("ok");
    }
    Ok(if d.has_errors() { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn preprocess(
    sequence: &str,
    input: &Path,
    out: &Path,
    format: DatasetFormat,
    strict: bool,
    no_spell: bool,
) -> Result<ExitCode> {
    let seq = Sequence::resolve(sequence)?;
    let constraints = validate_sequence(&seq);
    for v in &constraints.violations {
        eprintln!("warning: sequence {}: {v}", seq.alias);
    }
    if strict {
        constraints.into_result()?;
    }
    let lex = lexicon::load(None).context("loading lexicons")?;
    let corpus = datasets::load_labeled(input, format)?;
    let done = run_pipeline(&seq, &corpus, &lex, PipelineOptions { spell_correct: !no_spell });
    report::write_atomic(out, datasets::to_generic_csv(&done).as_bytes())?;
    println!("wrote {} documents to {}", done.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, seed, sequence, vectorizer, model, ensemble, strict, no_spell } => {
            run(&config, Overrides { output_dir: out, seed, sequence, vectorizer, model, ensemble, strict, no_spell })
        }
        Command::Validate { config } => validate(&config),
        Command::Preprocess { sequence, input, out, format, strict, no_spell } => {
            preprocess(&sequence, &input, &out, format, strict, no_spell)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
