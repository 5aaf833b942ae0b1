//! Tokenizing IPA transcriptions and extending the symbol table.
//!
//!     cargo run --example segment_tables

use dialectometry::phonetics::SymbolInfo;
use dialectometry::{ConstraintPolicy, SegmentTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut table = SegmentTable::builtin();
    for raw in ["stroːdə", "fiːr", "ɦʌudən", "t͡ʃaːʰ", "ã"] {
        let segs = table.tokenize(raw)?;
        let shown: Vec<String> = segs
            .iter()
            .map(|s| format!("{}:{}{}", s.symbol(), if s.is_vowel() { 'V' } else { 'C' }, if s.is_sonorant_consonant() { "+son" } else { "" }))
            .collect();
        println!("{raw:<10} -> {}", shown.join(" "));
    }

    // errors carry the offending position
    for bad in ["str7t", "ːa", "ˈstrat"] {
        println!("{bad:<10} -> {}", table.tokenize(bad).unwrap_err());
    }

    // r-coloured schwa is not built in; add it as a plain vowel
    table.insert('ɚ', SymbolInfo::vowel())?;
    let segs = table.tokenize("fiɚ")?;
    let policy = ConstraintPolicy::PHONETIC;
    let r = &SegmentTable::builtin().tokenize("r")?[0];
    println!("[ɚ]-[r] forbidden: {}", policy.forbids(&segs[2], r));
    let schwa = &table.tokenize("ə")?[0];
    println!("[ə]-[r] forbidden: {}", policy.forbids(schwa, r));

    print!("\nserialized extension entries:\n{}", {
        let mut extra = SegmentTable::empty();
        extra.insert('ɚ', SymbolInfo::vowel())?;
        extra.to_tsv()
    });
    Ok(())
}
