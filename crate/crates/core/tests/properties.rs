use std::sync::Arc;

use dialectometry::corpus::PairedTriple;
use dialectometry::pipeline::induction_pairs;
use dialectometry::{
    align3_segments, align_segments, induce, ConstraintPolicy, CostModel, PmiOptions, Segment, SegmentTable, Source,
};
use proptest::prelude::*;
use unicode_normalization::UnicodeNormalization;

const BASES: &[&str] = &["a", "e", "i", "o", "u", "ə", "ɛ", "ɪ", "ɔ", "t", "d", "s", "k", "n", "m", "r", "l", "j", "w", "ŋ"];
const MODIFIERS: &[&str] = &["", "", "", "ː", "ʰ", "\u{0303}", "\u{0325}"];

fn segment_text() -> impl Strategy<Value = String> {
    (prop::sample::select(BASES), prop::sample::select(MODIFIERS)).prop_map(|(b, m)| format!("{b}{m}"))
}

fn word(max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(segment_text(), 1..=max)
}

fn tokenize(parts: &[String]) -> Vec<Segment> {
    SegmentTable::builtin().tokenize(&parts.concat()).unwrap()
}

fn policy() -> impl Strategy<Value = ConstraintPolicy> {
    prop_oneof![Just(ConstraintPolicy::PHONETIC), Just(ConstraintPolicy::NONE)]
}

fn rebuild(cells: impl Iterator<Item = Option<Segment>>) -> String {
    cells.flatten().map(|s| s.symbol().to_string()).collect()
}

proptest! {
    #[test]
    fn tokenization_round_trips(parts in word(8)) {
        let text = parts.concat();
        let segs = SegmentTable::builtin().tokenize(&text).unwrap();
        prop_assert_eq!(segs.len(), parts.len());
        let joined: String = segs.iter().map(|s| s.symbol()).collect();
        prop_assert_eq!(joined, text.nfc().collect::<String>());
    }

    #[test]
    fn align2_is_an_optimal_symmetric_alignment(a in word(6), b in word(6), policy in policy()) {
        let (a, b) = (tokenize(&a), tokenize(&b));
        let cm = CostModel::binary(policy);
        let al = align_segments(&a, &b, &cm);
        // columns spell out both inputs and add up to the total
        prop_assert_eq!(rebuild(al.columns.iter().map(|c| c.left.clone())), rebuild(a.iter().cloned().map(Some)));
        prop_assert_eq!(rebuild(al.columns.iter().map(|c| c.right.clone())), rebuild(b.iter().cloned().map(Some)));
        let sum: f64 = al.columns.iter().map(|c| c.cost).sum();
        prop_assert!((sum - al.total_cost).abs() < 1e-9);
        // never worse than deleting and inserting everything
        prop_assert!(al.total_cost <= (a.len() + b.len()) as f64 + 1e-9);
        let back = align_segments(&b, &a, &cm);
        prop_assert!((back.total_cost - al.total_cost).abs() < 1e-9);
        prop_assert_eq!(back.len(), al.len());
        let norm = al.normalized().unwrap();
        prop_assert!((0.0..=1.0).contains(&norm));
        prop_assert!(al.len() >= a.len().max(b.len()) && al.len() <= a.len() + b.len());
    }

    #[test]
    fn align3_columns_cover_inputs(x in word(5), y in word(5), z in word(5), policy in policy()) {
        let (x, y, z) = (tokenize(&x), tokenize(&y), tokenize(&z));
        let cm = CostModel::binary(policy);
        let al = align3_segments(&x, &y, &z, &cm);
        prop_assert_eq!(rebuild(al.columns.iter().map(|c| c.x.clone())), rebuild(x.iter().cloned().map(Some)));
        prop_assert_eq!(rebuild(al.columns.iter().map(|c| c.y.clone())), rebuild(y.iter().cloned().map(Some)));
        prop_assert_eq!(rebuild(al.columns.iter().map(|c| c.z.clone())), rebuild(z.iter().cloned().map(Some)));
        for c in &al.columns {
            prop_assert!(c.x.is_some() || c.y.is_some() || c.z.is_some());
        }
        let sum: f64 = al.columns.iter().map(|c| c.column_cost).sum();
        prop_assert!((sum - al.total_cost).abs() < 1e-9);
        prop_assert!(al.conv >= 0.0 && al.div >= 0.0 && al.conv + al.div <= 1.0 + 1e-12);
        let swapped = align3_segments(&y, &x, &z, &cm);
        prop_assert_eq!(swapped.conv, al.div);
        prop_assert_eq!(swapped.div, al.conv);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn induced_tables_are_normalized(words in prop::collection::vec((word(5), word(5), word(5)), 3..12)) {
        let table = SegmentTable::builtin();
        let triples: Vec<PairedTriple> = words
            .iter()
            .enumerate()
            .map(|(i, (o, n, s))| {
                let w = format!("w{i}");
                PairedTriple {
                    location: "L".into(),
                    word: w.clone(),
                    older: table.transcribe(&o.concat(), "L", &w, Source::Older).unwrap(),
                    newer: table.transcribe(&n.concat(), "L", &w, Source::Newer).unwrap(),
                    standard: table.transcribe(&s.concat(), "L", &w, Source::Standard).unwrap(),
                }
            })
            .collect();
        let opts = PmiOptions { max_iter: 5, min_pairs: 0, ..PmiOptions::default() };
        let pmi = induce(&induction_pairs(&triples).unwrap(), &CostModel::binary(ConstraintPolicy::PHONETIC), &opts).unwrap();
        prop_assert!(pmi.iterations_run <= 5);
        for (a, b, d) in pmi.entries() {
            prop_assert!((0.0..=1.0).contains(&d), "[{}]-[{}] = {}", a, b, d);
            if a == b {
                prop_assert_eq!(d, 0.0);
            }
        }
        // learned costs keep the decomposition bounded
        let cm = CostModel::learned(Arc::new(pmi), ConstraintPolicy::PHONETIC);
        for t in &triples {
            let al = align3_segments(&t.older.segments, &t.newer.segments, &t.standard.segments, &cm);
            prop_assert!(al.conv + al.div <= 1.0 + 1e-12);
        }
    }
}
