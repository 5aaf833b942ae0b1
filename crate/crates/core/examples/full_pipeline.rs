//! The three commands on the bundled synthetic corpus, as the CLI runs
//! them, writing into a scratch directory.
//!
//!     cargo run --example full_pipeline -- [output-dir]

use std::path::PathBuf;

use dialectometry::pipeline::{cmd_align, cmd_pmi, cmd_report, ConfigOverrides, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("dialectometry-demo"));
    let base = ConfigOverrides {
        corpus: Some(data.join("synthetic_corpus.tsv")),
        groups: Some(data.join("groups.tsv")),
        coords: Some(data.join("coords.tsv")),
        output: Some(out.clone()),
        ..ConfigOverrides::default()
    };

    let pmi = cmd_pmi(&RunConfig::from_overrides(base.clone())?)?;
    println!("pmi: {} entries, converged {}", pmi.len(), pmi.converged);

    // binary costs count whole segments, so the proportions are directly
    // comparable with the injected rates
    let binary = RunConfig::from_overrides(ConfigOverrides { cost: Some("binary".into()), ..base })?;
    let run = cmd_align(&binary)?;
    println!("align: {} change records", run.records.len());
    let report = cmd_report(&binary)?;
    print!("{}", report.report);
    println!("outputs in {}", out.display());
    Ok(())
}
