use std::path::PathBuf;

use dialectometry::corpus::{ingest, pair, retention_report, write_records, GroupMap};
use dialectometry::pipeline::{cmd_align, cmd_pmi, cmd_report, ConfigOverrides, CostMode, RunConfig};
use dialectometry::synth::{synthetic_corpus, SynthConfig};
use dialectometry::SegmentTable;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

#[test]
fn bundled_corpus_matches_generator() {
    let synth = synthetic_corpus(&SynthConfig::default(), &SegmentTable::builtin());
    let bundled = std::fs::read_to_string(data("synthetic_corpus.tsv")).unwrap();
    assert_eq!(bundled, write_records(&synth.records));
    let groups = std::fs::read_to_string(data("groups.tsv")).unwrap();
    assert_eq!(groups, GroupMap::northern_netherlands().to_tsv());
}

#[test]
fn bundled_corpus_retention_and_determinism() {
    let table = SegmentTable::builtin();
    let records = ingest(&data("synthetic_corpus.tsv")).unwrap();
    let first = pair(&records, &table).unwrap();
    assert_eq!(first, pair(&records, &table).unwrap());
    let report = retention_report(&first);
    assert_eq!(report.locations.len(), 24);
    assert!((report.fraction() - 0.67).abs() < 0.01);
    // partition-complete: each (location, word) once
    let mut keys: Vec<(&str, &str)> = first
        .triples
        .iter()
        .map(|t| (t.location.as_str(), t.word.as_str()))
        .chain(first.excluded.iter().map(|e| (e.location.as_str(), e.word.as_str())))
        .collect();
    let n = keys.len();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), n);
    assert_eq!(n, 24 * 36);
}

#[test]
fn pipeline_pmi_then_load() {
    let dir = tempfile::tempdir().unwrap();
    let base = ConfigOverrides {
        corpus: Some(data("synthetic_corpus.tsv")),
        output: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    let pmi = cmd_pmi(&RunConfig::from_overrides(base.clone()).unwrap()).unwrap();
    assert!(pmi.converged);
    let table_path = dir.path().join("pmi.tsv");
    let loaded = RunConfig::from_overrides(ConfigOverrides {
        cost: Some(format!("load:{}", table_path.display())),
        output: Some(dir.path().join("loaded")),
        ..base.clone()
    })
    .unwrap();
    assert_eq!(loaded.cost_mode, CostMode::Load(table_path));
    let from_file = cmd_align(&loaded).unwrap();
    let induced = cmd_align(&RunConfig::from_overrides(base).unwrap()).unwrap();
    assert_eq!(from_file.records.len(), induced.records.len());
    for (a, b) in from_file.records.iter().zip(&induced.records) {
        assert!((a.conv - b.conv).abs() < 1e-9 && (a.div - b.div).abs() < 1e-9);
    }
}

#[test]
fn report_summaries_cover_all_groups() {
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig::from_overrides(ConfigOverrides {
        corpus: Some(data("synthetic_corpus.tsv")),
        groups: Some(data("groups.tsv")),
        cost: Some("binary".into()),
        output: Some(dir.path().to_path_buf()),
        permutations: Some(999),
        ..Default::default()
    })
    .unwrap();
    cmd_align(&config).unwrap();
    let run = cmd_report(&config).unwrap();
    let labels: Vec<&str> = run.summaries.iter().map(|s| s.label()).collect();
    assert_eq!(labels, ["FR", "DUFR", "GR", "LS", "ALL"]);
    let all = run.summaries.last().unwrap();
    assert_eq!(all.locations.len(), 24);
    assert!((all.mean_change().unwrap() - 0.034).abs() < 0.003);
    assert_eq!(run.contrasts.len(), 2);
    assert!(!dir.path().join("geo.csv").exists());
}
