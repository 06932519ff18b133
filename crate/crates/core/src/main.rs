use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use devinterest::metrics::{EmptySidePolicy, Membership};
use devinterest::pipeline::{self, MetricSelection, PartialConfig, RunConfig};
use devinterest::synthgen::{generate, GenSpec};
use devinterest::{ratio, write_dataset, Error};

#[derive(Parser)]
#[command(
    name = "devinterest",
    version,
    about = "Cross-platform developer interest similarity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Match accounts across platforms; writes links.csv and ambiguities.csv.
    Link(CommonArgs),
    /// Extract item interests; writes interests.jsonl.
    Extract(CommonArgs),
    /// Compute scores; writes scores.csv.
    Score {
        #[arg(value_enum)]
        selection: Selection,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Summarize <out>/scores.csv into summary.json and plotdata/.
    Report(CommonArgs),
    /// Link, extract, score (all metrics) and report in one run.
    All(CommonArgs),
    /// Write a synthetic dataset described by a JSON spec.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the indexed engine with the brute-force oracle.
    OracleCheck(CommonArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Selection {
    Cross,
    Pairs,
    Co,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum MembershipArg {
    Intersection,
    Subset,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmptySideArg {
    Undefined,
    Zero,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Directory holding the input files.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Output directory.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// JSON config file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    membership: Option<MembershipArg>,
    #[arg(long, value_enum)]
    empty_side: Option<EmptySideArg>,
    #[arg(long)]
    threads: Option<usize>,
    /// Developer cap for oracle-check.
    #[arg(long)]
    cap: Option<usize>,
}

impl CommonArgs {
    fn resolve(&self, selection: Option<MetricSelection>) -> Result<RunConfig, Error> {
        self.resolve_with(selection, true)
    }

    fn resolve_with(
        &self,
        selection: Option<MetricSelection>,
        writes_output: bool,
    ) -> Result<RunConfig, Error> {
        let flags = PartialConfig {
            input: self.input.clone(),
            output: self.out.clone(),
            selection,
            membership: self.membership.map(|m| match m {
                MembershipArg::Intersection => Membership::Intersection,
                MembershipArg::Subset => Membership::Subset,
            }),
            empty_side: self.empty_side.map(|e| match e {
                EmptySideArg::Undefined => EmptySidePolicy::Undefined,
                EmptySideArg::Zero => EmptySidePolicy::Zero,
            }),
            threads: self.threads,
            oracle_cap: self.cap,
        };
        let file = match &self.config {
            Some(path) => PartialConfig::from_file(path)?,
            None => PartialConfig::default(),
        };
        let mut merged = flags.or(file);
        if !writes_output && merged.output.is_none() {
            merged.output = Some(PathBuf::from("."));
        }
        let cfg = merged.resolve()?;
        pipeline::configure_threads(cfg.threads);
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Link(args) => {
            let l = pipeline::run_link(&args.resolve(None)?)?;
            eprintln!(
                "{} links, {} ambiguities",
                l.links.len(),
                l.ambiguities.len()
            );
        }
        Command::Extract(args) => {
            pipeline::run_extract(&args.resolve(None)?)?;
        }
        Command::Score { selection, common } => {
            let selection = match selection {
                Selection::Cross => MetricSelection::Cross,
                Selection::Pairs => MetricSelection::Pairs,
                Selection::Co => MetricSelection::Co,
                Selection::All => MetricSelection::All,
            };
            let records = pipeline::run_score(&common.resolve(Some(selection))?)?;
            eprintln!("{} scores", records.len());
        }
        Command::Report(args) => {
            pipeline::run_report(&args.resolve(None)?)?;
        }
        Command::All(args) => {
            pipeline::run_all(&args.resolve(Some(MetricSelection::All))?)?;
        }
        Command::Generate { spec, out } => {
            let text = std::fs::read_to_string(&spec).map_err(|e| Error::Io {
                path: spec.clone(),
                source: e,
            })?;
            let spec: GenSpec = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", spec.display())))?;
            write_dataset(&generate(&spec)?.dataset, &out)?;
        }
        Command::OracleCheck(args) => {
            let report = pipeline::run_oracle_check(&args.resolve_with(None, false)?)?;
            for m in &report.mismatches {
                let show = |v: &Option<Option<devinterest::Score>>| match v {
                    Some(v) => ratio::format_score(v.as_ref()),
                    None => "missing".to_string(),
                };
                println!(
                    "{} {}: engine {} oracle {}",
                    m.dev_id,
                    m.metric,
                    show(&m.engine),
                    show(&m.oracle)
                );
            }
            println!(
                "{} compared, {} mismatches",
                report.compared,
                report.mismatches.len()
            );
            if !report.mismatches.is_empty() {
                return Err(Error::Config(format!(
                    "{} oracle mismatches",
                    report.mismatches.len()
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
