use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coauthor_rank::config::{parse_levels, RunConfig};
use coauthor_rank::pipeline::{run_command, Command, Inputs, Stage, StageError};
use coauthor_rank::{Error, ErrorClass};

/// PageRank and citation-personalized PageRank over coauthorship networks.
#[derive(Parser, Debug)]
#[command(name = "coauthor-rank", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Component sizes and the largest component's members.
    Component,
    /// PageRank at one damping value.
    Rank,
    /// Top-k authors per damping value and the cross-damping Spearman matrix.
    Sweep,
    /// Stratified Spearman correlation between PageRank and citation ranks.
    Correlate,
    /// Power-law fits of the citation and PageRank distributions.
    Fit,
    /// Rank changes between citation and PageRank rankings.
    Deltas,
    /// Comparison table across rankings and award-winner prefix recall.
    Compare,
}

#[derive(Args, Debug)]
struct Opts {
    /// Edge list: authorA<TAB>authorB[<TAB>weight].
    #[arg(long, global = true)]
    edges: Option<PathBuf>,
    /// Citations: author<TAB>total[<TAB>c1,c2,...].
    #[arg(long, global = true)]
    citations: Option<PathBuf>,
    /// Award winners, one author per line.
    #[arg(long, global = true)]
    awards: Option<PathBuf>,
    /// Extra integer column for `compare`, as NAME=PATH (repeatable).
    #[arg(long = "extra", global = true, value_name = "NAME=PATH")]
    extras: Vec<String>,
    /// `key = value` config file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    damping: Option<f64>,
    /// Comma-separated damping values for `sweep`.
    #[arg(long, global = true)]
    schedule: Option<String>,
    /// Comma-separated damping values for `compare`.
    #[arg(long, global = true)]
    compare: Option<String>,
    #[arg(long = "tol", global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// weighted | unweighted
    #[arg(long, global = true)]
    mode: Option<String>,
    /// uniform | citations
    #[arg(long, global = true)]
    teleport: Option<String>,
    /// Comma-separated level cut points for `correlate`.
    #[arg(long, global = true)]
    levels: Option<String>,
    /// csv | tsv | markdown
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    top_k: Option<usize>,
    /// Logarithmic bins for continuous power-law fits.
    #[arg(long, global = true)]
    bins: Option<usize>,
    /// Winners required by the prefix-recall report.
    #[arg(long, global = true)]
    winner_count: Option<usize>,
    /// Rank every component of two or more authors separately.
    #[arg(long, global = true)]
    all_components: bool,
}

fn config_error(e: Error) -> StageError {
    StageError {
        stage: Stage::Config,
        error: match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        },
    }
}

fn build_config(opts: &Opts) -> Result<RunConfig, StageError> {
    let mut config = RunConfig::default();
    if let Some(path) = &opts.config {
        config.apply_file(path).map_err(config_error)?;
    }
    let mut set = |key: &str, value: Option<String>| -> Result<(), StageError> {
        match value {
            Some(v) => config.set(key, &v).map_err(config_error),
            None => Ok(()),
        }
    };
    set("damping", opts.damping.map(|d| d.to_string()))?;
    set("schedule", opts.schedule.clone())?;
    set("compare", opts.compare.clone())?;
    set("tolerance", opts.tolerance.map(|t| t.to_string()))?;
    set("max_iter", opts.max_iter.map(|m| m.to_string()))?;
    set("mode", opts.mode.clone())?;
    set("teleport", opts.teleport.clone())?;
    set("format", opts.format.clone())?;
    set("top_k", opts.top_k.map(|k| k.to_string()))?;
    set("bins", opts.bins.map(|b| b.to_string()))?;
    set("winner_count", opts.winner_count.map(|w| w.to_string()))?;
    if let Some(levels) = &opts.levels {
        config.levels = parse_levels(levels).map_err(config_error)?;
    }
    if opts.all_components {
        config.all_components = true;
    }
    Ok(config)
}

fn build_inputs(opts: &Opts) -> Result<Inputs, StageError> {
    let edges = opts
        .edges
        .clone()
        .ok_or_else(|| config_error(Error::Config("--edges is required".into())))?;
    let extras = opts
        .extras
        .iter()
        .map(|spec| match spec.split_once('=') {
            Some((name, path)) if !name.trim().is_empty() && !path.is_empty() => {
                Ok((name.trim().to_string(), PathBuf::from(path)))
            }
            _ => Err(config_error(Error::Config(format!(
                "--extra expects NAME=PATH, got {spec:?}"
            )))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Inputs {
        edges,
        citations: opts.citations.clone(),
        awards: opts.awards.clone(),
        extras,
    })
}

fn run(cli: &Cli) -> Result<(), StageError> {
    let config = build_config(&cli.opts)?;
    let inputs = build_inputs(&cli.opts)?;
    let command = match cli.command {
        Cmd::Component => Command::Component,
        Cmd::Rank => Command::Rank,
        Cmd::Sweep => Command::Sweep,
        Cmd::Correlate => Command::Correlate,
        Cmd::Fit => Command::Fit,
        Cmd::Deltas => Command::Deltas,
        Cmd::Compare => Command::Compare,
    };
    let bundle = run_command(command, &inputs, &config)?;
    for warning in &bundle.warnings {
        eprintln!("warning: {warning}");
    }
    let text = bundle.render(config.format);
    match &cli.opts.output {
        Some(path) => std::fs::write(path, text).map_err(|source| StageError {
            stage: Stage::Config,
            error: Error::Io {
                path: path.clone(),
                source,
            },
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit_code(e: &StageError) -> u8 {
    match e.error.class() {
        ErrorClass::Input => 1,
        ErrorClass::Numerical => 2,
        ErrorClass::Usage => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({
                "error": {
                    "stage": e.stage.to_string(),
                    "kind": e.error.kind(),
                    "message": e.error.to_string(),
                }
            });
            eprintln!("{line}");
            ExitCode::from(exit_code(&e))
        }
    }
}
