//! Reading a corpus file, pairing older, newer and standard records, and
//! accounting for what was left out.
//!
//!     cargo run --example corpus_pairing -- [corpus.tsv]

use std::path::PathBuf;

use dialectometry::corpus::{ingest, pair, retention_report};
use dialectometry::SegmentTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_corpus.tsv"));
    let records = ingest(&path)?;
    let pairing = pair(&records, &SegmentTable::builtin())?;
    let report = retention_report(&pairing);

    println!("{} records -> {} triples, {} excluded", records.len(), pairing.triples.len(), pairing.excluded.len());
    for e in pairing.excluded.iter().take(5) {
        println!("  excluded ({}, {}): {}", e.location, e.word, e.reason.tag());
    }
    println!("retention {:.3}\n", report.fraction());
    print!("{}", report.to_csv());
    Ok(())
}
