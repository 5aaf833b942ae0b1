//! Learning segment distances from co-occurrence in alignments.
//!
//!     cargo run --example pmi_induction
//!
//! [i] is aligned with [ɪ] forty times and with [u] once, while [u] is
//! common elsewhere. The induced table puts [i] much closer to [ɪ].

use dialectometry::synth::vowel_shift_pairs;
use dialectometry::{induce, AlignmentCorpus, ConstraintPolicy, CostModel, PmiOptions, SegmentTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = SegmentTable::builtin();
    let corpus = AlignmentCorpus::new(vowel_shift_pairs(40, &table))?;
    let opts = PmiOptions { min_pairs: 0, ..PmiOptions::default() };
    let pmi = induce(&corpus, &CostModel::binary(ConstraintPolicy::PHONETIC), &opts)?;

    println!("{} aligned pairs, {} iterations, converged: {}", corpus.len(), pmi.iterations_run, pmi.converged);
    for (a, b) in [("i", "ɪ"), ("i", "u"), ("i", "-"), ("a", "ɑ"), ("i", "i")] {
        println!("d([{a}], [{b}]) = {:.4}", pmi.get(a, b).unwrap_or(f64::NAN));
    }
    print!("\nconvergence log:\n{}", pmi.convergence_log());

    // the table round-trips through its TSV form
    let reread = dialectometry::pmi::PmiTable::parse_tsv(pmi.to_tsv().as_bytes())?;
    assert_eq!(reread.get("i", "ɪ"), pmi.get("i", "ɪ"));
    Ok(())
}
