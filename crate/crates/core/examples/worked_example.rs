//! The [straat] example end to end: two pairwise alignments, with and
//! without the vowel-consonant constraint, and the three-way alignment
//! against the standard form.
//!
//!     cargo run --example worked_example

use dialectometry::{
    align2, align3, enumerate_optimal, ConstraintPolicy, CostModel, SegmentTable, Source,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = SegmentTable::builtin();
    let older = table.transcribe("stroːdə", "Kampen", "straat", Source::Older)?;
    let newer = table.transcribe("strɔət", "Kampen", "straat", Source::Newer)?;
    let standard = table.transcribe("strat", "Kampen", "straat", Source::Standard)?;

    for (label, policy) in [("unconstrained", ConstraintPolicy::NONE), ("vowel-consonant constraint", ConstraintPolicy::PHONETIC)] {
        let cm = CostModel::binary(policy);
        let al = align2(&older, &newer, &cm)?;
        println!("{label}: distance {}, longest optimal length {}, normalized {:.4}", al.total_cost, al.len(), al.normalized()?);
        print!("{al}");
        let optima = enumerate_optimal(&older.segments, &newer.segments, &cm, 10_000)?;
        println!("{} optimal alignments, lengths {:?}\n", optima.len(), optima.iter().map(|a| a.len()).collect::<Vec<_>>());
    }

    let cm = CostModel::binary(ConstraintPolicy::PHONETIC);
    let al3 = align3(&older, &newer, &standard, &cm)?;
    println!("three-way alignment, total cost {}", al3.total_cost);
    print!("{al3}");
    println!("convergence {:.4} (2/7 = {:.4}), divergence {:.4} (1/7 = {:.4})", al3.conv, 2.0 / 7.0, al3.div, 1.0 / 7.0);
    Ok(())
}
