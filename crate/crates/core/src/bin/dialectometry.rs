use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dialectometry::pipeline::{self, ConfigOverrides, PmiSettings, RunConfig};

const SCHEMAS: &str = "\
Input formats (UTF-8, tab-separated, LF line endings):

  corpus      header: location  word  source  transcription  cognate_id  exclusion
              source is older|newer|standard; exclusion is -|lex|morph|reduction|missing.
              Standard rows hold one transcription per word; their location is ignored.
  segments    symbol  V|C  flags      flags: - or a comma list of sonorant, schwa.
              Entries are added to the built-in IPA table.
  groups      location  FR|DUFR|GR|LS
  coords      location  lon  lat
  pmi table   symbol  symbol  distance      (- is the gap symbol)

Exit codes: 0 success, 1 data error, 2 configuration error.";

#[derive(Parser)]
#[command(name = "dialectometry", version, about = "Real-time dialect change measured against a standard variety", after_help = SCHEMAS)]
struct Cli {
    /// TOML file with any of the run settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Induce PMI segment distances from the corpus (writes pmi.tsv, pmi_log.txt).
    Pmi(RunArgs),
    /// Align every retained triple (writes changes.csv, alignments.txt, retention.csv).
    Align(RunArgs),
    /// Group summaries and LS contrasts from changes.csv (writes group_summary.csv, contrasts.csv, report.txt, geo.csv).
    Report(RunArgs),
}

#[derive(Args)]
#[command(after_help = SCHEMAS)]
struct RunArgs {
    /// Corpus TSV.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Extra segment table entries.
    #[arg(long)]
    segments: Option<PathBuf>,
    /// Dialect group map.
    #[arg(long)]
    groups: Option<PathBuf>,
    /// Location coordinates for geo.csv.
    #[arg(long)]
    coords: Option<PathBuf>,
    /// Change records for report [default: <out>/changes.csv].
    #[arg(long)]
    changes: Option<PathBuf>,
    /// binary, pmi or load:<pmi.tsv> [default: pmi].
    #[arg(long)]
    cost: Option<String>,
    /// PMI iteration cap [default: 50].
    #[arg(long)]
    max_iter: Option<usize>,
    /// PMI convergence tolerance [default: 1e-6].
    #[arg(long)]
    tol: Option<f64>,
    /// PMI pseudo-count [default: 0.5].
    #[arg(long)]
    smoothing: Option<f64>,
    /// Permutation seed [default: 1].
    #[arg(long)]
    seed: Option<u64>,
    /// Number of permutations, at least 999 [default: 9999].
    #[arg(long)]
    permutations: Option<usize>,
    /// Output directory [default: out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep the first of repeated corpus rows instead of failing.
    #[arg(long)]
    keep_first_duplicate: bool,
    /// Allow vowel-consonant substitutions.
    #[arg(long)]
    no_constraint: bool,
}

impl RunArgs {
    fn overrides(self) -> ConfigOverrides {
        ConfigOverrides {
            corpus: self.corpus,
            segment_table: self.segments,
            groups: self.groups,
            coords: self.coords,
            changes: self.changes,
            cost: self.cost,
            pmi: PmiSettings { max_iter: self.max_iter, tol: self.tol, smoothing: self.smoothing },
            seed: self.seed,
            permutations: self.permutations,
            output: self.out,
            keep_first_duplicate: self.keep_first_duplicate.then_some(true),
            no_constraint: self.no_constraint.then_some(true),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();

    let (name, args) = match cli.command {
        Command::Pmi(a) => ("pmi", a),
        Command::Align(a) => ("align", a),
        Command::Report(a) => ("report", a),
    };
    let result = RunConfig::resolve(cli.config.as_deref(), args.overrides()).and_then(|cfg| match name {
        "pmi" => pipeline::cmd_pmi(&cfg).map(|t| {
            println!("pmi: {} entries, {} iterations, converged={}", t.len(), t.iterations_run, t.converged)
        }),
        "align" => pipeline::cmd_align(&cfg).map(|run| {
            let n = run.records.len().max(1) as f64;
            let conv = run.records.iter().map(|r| r.conv).sum::<f64>() / n;
            let div = run.records.iter().map(|r| r.div).sum::<f64>() / n;
            println!("align: {} triples, mean conv {conv:.4}, mean div {div:.4}", run.records.len())
        }),
        _ => pipeline::cmd_report(&cfg).map(|run| print!("{}", run.report)),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
