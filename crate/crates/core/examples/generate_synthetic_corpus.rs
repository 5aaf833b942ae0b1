//! Writes the bundled synthetic data set.
//!
//!     cargo run --example generate_synthetic_corpus -- [output-dir]
//!
//! The default output directory is the crate's `data/`. Output is fully
//! determined by the seed in `SynthConfig::default()`.

use std::fmt::Write as _;
use std::path::PathBuf;

use dialectometry::corpus::{retention_report, write_records, GroupMap};
use dialectometry::synth::{northern_coordinates, synthetic_corpus, SynthConfig};
use dialectometry::{corpus, SegmentTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    std::fs::create_dir_all(&dir)?;

    let table = SegmentTable::builtin();
    let cfg = SynthConfig::default();
    let synth = synthetic_corpus(&cfg, &table);
    std::fs::write(dir.join("synthetic_corpus.tsv"), write_records(&synth.records))?;
    std::fs::write(dir.join("groups.tsv"), GroupMap::northern_netherlands().to_tsv())?;

    let mut coords = String::from("location\tlon\tlat\n");
    for (loc, (lon, lat)) in northern_coordinates() {
        writeln!(coords, "{loc}\t{lon}\t{lat}")?;
    }
    std::fs::write(dir.join("coords.tsv"), coords)?;

    let pairing = corpus::pair(&synth.records, &table)?;
    let report = retention_report(&pairing);
    println!("wrote {} records to {}", synth.records.len(), dir.display());
    println!("retained {} of {} pairs ({:.3})", report.retained, report.total, report.fraction());
    println!("injected conv {:.5}, div {:.5}", synth.injected_conv(), synth.injected_div());
    Ok(())
}
