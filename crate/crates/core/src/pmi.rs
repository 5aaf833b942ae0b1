//! Segment distances induced from alignment co-occurrence (PMI).
//!
//! Each round aligns every corpus pair under the current costs, counts how
//! often two symbols share a column (the gap counts as a symbol), turns the
//! smoothed counts into pointwise mutual information, and rescales negated
//! PMI into `[0, 1]`. Rounds repeat until the table stops moving.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::align2::align_segments;
use crate::cost::{ConstraintPolicy, CostModel, PairDistance};
use crate::phonetics::{Segment, Transcription, GAP};

#[derive(Debug, Error, PartialEq)]
pub enum PmiError {
    #[error("alignment corpus is empty")]
    EmptyCorpus,
    #[error("pair {index} mixes words {left:?} and {right:?}")]
    WordMismatch { index: usize, left: String, right: String },
    #[error("invalid induction options: {0}")]
    InvalidOptions(String),
    #[error("distance table line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid distance entry [{0}]-[{1}]: {2}")]
    InvalidEntry(String, String, String),
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmiOptions {
    pub max_iter: usize,
    pub tol: f64,
    /// Pseudo-count added to every symbol pair before estimating probabilities.
    pub smoothing: f64,
    /// Corpora with fewer pairs than this still run, with a warning.
    pub min_pairs: usize,
}

impl Default for PmiOptions {
    fn default() -> Self {
        Self { max_iter: 50, tol: 1e-6, smoothing: 0.5, min_pairs: 100 }
    }
}

impl PmiOptions {
    pub fn validate(&self) -> Result<(), PmiError> {
        if self.max_iter < 1 {
            return Err(PmiError::InvalidOptions("max_iter must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(PmiError::InvalidOptions("tol must be positive".into()));
        }
        if self.smoothing.is_nan() || self.smoothing <= 0.0 {
            return Err(PmiError::InvalidOptions("smoothing must be positive".into()));
        }
        Ok(())
    }
}

/// Same-word pairs of transcriptions from different varieties.
#[derive(Debug, Clone, Default)]
pub struct AlignmentCorpus {
    pairs: Vec<(Transcription, Transcription)>,
}

impl AlignmentCorpus {
    pub fn new(pairs: Vec<(Transcription, Transcription)>) -> Result<Self, PmiError> {
        for (index, (a, b)) in pairs.iter().enumerate() {
            if a.word != b.word {
                return Err(PmiError::WordMismatch { index, left: a.word.clone(), right: b.word.clone() });
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(Transcription, Transcription)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Per-round convergence record.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationLog {
    pub iteration: usize,
    /// Largest absolute distance change against the previous round; `None` in round 1.
    pub max_change: Option<f64>,
    /// Number of corpus pairs whose alignment differs from the previous round.
    pub alignments_changed: Option<usize>,
}

/// Symmetric symbol distances in `[0, 1]`, gap written as `-`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PmiTable {
    dist: BTreeMap<(String, String), f64>,
    pub iterations_run: usize,
    pub converged: bool,
    pub history: Vec<IterationLog>,
}

fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl PmiTable {
    /// Builds a table from explicit entries. Rejects values outside `[0, 1]`,
    /// nonzero self-distances, gap-gap entries and conflicting duplicates.
    pub fn from_entries<'a, I>(entries: I) -> Result<Self, PmiError>
    where
        I: IntoIterator<Item = (&'a str, &'a str, f64)>,
    {
        let mut dist = BTreeMap::new();
        for (a, b, d) in entries {
            let invalid = |why: &str| PmiError::InvalidEntry(a.to_string(), b.to_string(), why.to_string());
            if a == GAP && b == GAP {
                return Err(invalid("gap-gap distance is undefined"));
            }
            if !(0.0..=1.0).contains(&d) {
                return Err(invalid("distance outside [0, 1]"));
            }
            if a == b && d != 0.0 {
                return Err(invalid("self-distance must be 0"));
            }
            if let Some(prev) = dist.insert(key(a, b), d) {
                if prev != d {
                    return Err(invalid("conflicting duplicate entry"));
                }
            }
        }
        Ok(Self { dist, ..Self::default() })
    }

    /// Distance between two symbols; identical symbols are always 0.
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        if a == b && a != GAP {
            return Some(0.0);
        }
        self.dist.get(&key(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// Entries in lexicographic pair order, each unordered pair once.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.dist.iter().map(|((a, b), d)| (a.as_str(), b.as_str(), *d))
    }

    /// Costs for alignment: substitutions from the table, indels from the
    /// gap distances, with the constraint policy applied on top.
    pub fn to_cost_model(&self, policy: ConstraintPolicy) -> CostModel {
        CostModel::learned(Arc::new(self.clone()), policy)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (a, b, d) in self.entries() {
            writeln!(out, "{a}\t{b}\t{d}").expect("write to string");
        }
        out
    }

    pub fn parse_tsv<R: BufRead>(reader: R) -> Result<Self, PmiError> {
        let mut rows = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| PmiError::Io(e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse = |reason: String| PmiError::Parse { line: idx + 1, reason };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(parse(format!("expected 3 fields, got {}", fields.len())));
            }
            let d: f64 = fields[2].parse().map_err(|_| parse(format!("bad distance {:?}", fields[2])))?;
            rows.push((fields[0].to_string(), fields[1].to_string(), d));
        }
        Self::from_entries(rows.iter().map(|(a, b, d)| (a.as_str(), b.as_str(), *d)))
    }

    pub fn load(path: &Path) -> Result<Self, PmiError> {
        let file = std::fs::File::open(path).map_err(|e| PmiError::Io(format!("{}: {e}", path.display())))?;
        Self::parse_tsv(std::io::BufReader::new(file))
    }

    /// One line per round plus the final status.
    pub fn convergence_log(&self) -> String {
        let mut out = String::from("iteration\tmax_change\talignments_changed\n");
        for entry in &self.history {
            let change = entry.max_change.map_or("-".to_string(), |c| format!("{c:e}"));
            let changed = entry.alignments_changed.map_or("-".to_string(), |c| c.to_string());
            writeln!(out, "{}\t{change}\t{changed}", entry.iteration).expect("write to string");
        }
        writeln!(out, "# iterations_run={} converged={}", self.iterations_run, self.converged).expect("write to string");
        out
    }

    fn max_change(&self, other: &BTreeMap<(String, String), f64>) -> f64 {
        let keys: BTreeSet<&(String, String)> = self.dist.keys().chain(other.keys()).collect();
        keys.into_iter()
            .map(|k| {
                let a = self.dist.get(k).copied().unwrap_or(1.0);
                let b = other.get(k).copied().unwrap_or(1.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

impl PairDistance for PmiTable {
    fn distance(&self, a: Option<&Segment>, b: Option<&Segment>) -> f64 {
        let a = a.map_or(GAP, Segment::symbol);
        let b = b.map_or(GAP, Segment::symbol);
        if a == GAP && b == GAP {
            return 0.0;
        }
        self.get(a, b).unwrap_or_else(|| {
            log::warn!("no learned distance for [{a}]-[{b}], using 1.0");
            1.0
        })
    }
}

/// Column co-occurrence counts over unordered symbol pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoocCounts {
    counts: BTreeMap<(String, String), f64>,
    symbols: BTreeSet<String>,
}

impl CoocCounts {
    /// Registers a symbol without counting anything, so that it receives
    /// smoothing mass against every other symbol.
    pub fn add_symbol(&mut self, s: &str) {
        self.symbols.insert(s.to_string());
    }

    /// Adds `n` co-occurrences of the pair; `-` is the gap.
    pub fn add(&mut self, a: &str, b: &str, n: f64) {
        assert!(!(a == GAP && b == GAP), "gap-gap column");
        self.symbols.insert(a.to_string());
        self.symbols.insert(b.to_string());
        *self.counts.entry(key(a, b)).or_insert(0.0) += n;
    }

    pub fn get(&self, a: &str, b: &str) -> f64 {
        self.counts.get(&key(a, b)).copied().unwrap_or(0.0)
    }

    pub fn from_columns<'a, I>(columns: I) -> Self
    where
        I: IntoIterator<Item = (Option<&'a str>, Option<&'a str>)>,
    {
        let mut counts = Self::default();
        counts.symbols.insert(GAP.to_string());
        for (a, b) in columns {
            counts.add(a.unwrap_or(GAP), b.unwrap_or(GAP), 1.0);
        }
        counts
    }

    /// Unordered pairs over all symbols (gap included), gap-gap excluded.
    fn pairs(&self) -> Vec<(String, String)> {
        let symbols: Vec<&String> = self.symbols.iter().collect();
        let mut out = Vec::new();
        for (i, a) in symbols.iter().enumerate() {
            for b in &symbols[i..] {
                if a.as_str() == GAP && b.as_str() == GAP {
                    continue;
                }
                out.push(((*a).clone(), (*b).clone()));
            }
        }
        out
    }

    /// Smoothed PMI (base 2) for every unordered symbol pair.
    ///
    /// Counts are spread symmetrically over the ordered joint distribution:
    /// an off-diagonal pair contributes half its smoothed count to each of
    /// (a, b) and (b, a). Marginals are row sums of that joint.
    pub fn pmi(&self, smoothing: f64) -> BTreeMap<(String, String), f64> {
        let pairs = self.pairs();
        let mut joint: BTreeMap<(String, String), f64> = BTreeMap::new();
        let mut marginal: BTreeMap<&str, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (a, b) in &pairs {
            let c = self.get(a, b) + smoothing;
            total += c;
            if a == b {
                *marginal.entry(a).or_insert(0.0) += c;
            } else {
                *marginal.entry(a).or_insert(0.0) += c / 2.0;
                *marginal.entry(b).or_insert(0.0) += c / 2.0;
            }
            joint.insert((a.clone(), b.clone()), c);
        }
        joint
            .into_iter()
            .map(|((a, b), c)| {
                let p_ab = if a == b { c / total } else { c / 2.0 / total };
                let p_a = marginal[a.as_str()] / total;
                let p_b = marginal[b.as_str()] / total;
                let pmi = (p_ab / (p_a * p_b)).log2();
                ((a, b), pmi)
            })
            .collect()
    }

    /// Negated PMI min-max rescaled into `[0, 1]` over all pairs (the
    /// diagonal included), then self-distances forced to 0.
    pub fn distances(&self, smoothing: f64) -> BTreeMap<(String, String), f64> {
        let pmi = self.pmi(smoothing);
        let lo = pmi.values().map(|p| -p).fold(f64::INFINITY, f64::min);
        let hi = pmi.values().map(|p| -p).fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        pmi.into_iter()
            .map(|((a, b), p)| {
                let d = if a == b {
                    0.0
                } else if span > 0.0 {
                    ((-p - lo) / span).clamp(0.0, 1.0)
                } else {
                    1.0
                };
                ((a, b), d)
            })
            .collect()
    }
}

type Signature = Vec<(Option<String>, Option<String>)>;

fn align_corpus(corpus: &AlignmentCorpus, cm: &CostModel) -> Vec<Signature> {
    corpus
        .pairs
        .par_iter()
        .map(|(a, b)| {
            align_segments(&a.segments, &b.segments, cm)
                .symbol_pairs()
                .into_iter()
                .map(|(l, r)| (l.map(str::to_string), r.map(str::to_string)))
                .collect()
        })
        .collect()
}

fn count(corpus: &AlignmentCorpus, alignments: &[Signature]) -> CoocCounts {
    let mut counts = CoocCounts::from_columns(
        alignments.iter().flatten().map(|(l, r)| (l.as_deref(), r.as_deref())),
    );
    for (a, b) in &corpus.pairs {
        for s in a.segments.iter().chain(&b.segments) {
            counts.add_symbol(s.symbol());
        }
    }
    counts
}

/// Iteratively induces a distance table from `corpus`, starting from the
/// costs in `init`. Later rounds keep `init`'s constraint policy.
pub fn induce(corpus: &AlignmentCorpus, init: &CostModel, opts: &PmiOptions) -> Result<PmiTable, PmiError> {
    opts.validate()?;
    if corpus.is_empty() {
        return Err(PmiError::EmptyCorpus);
    }
    if corpus.len() < opts.min_pairs {
        log::warn!(
            "PMI induction on only {} pairs (minimum {}); distances will be dominated by smoothing",
            corpus.len(),
            opts.min_pairs
        );
    }

    let policy = init.policy();
    let mut cm = init.clone();
    let mut table = PmiTable::default();
    let mut prev_alignments: Option<Vec<Signature>> = None;

    for iteration in 1..=opts.max_iter {
        let alignments = align_corpus(corpus, &cm);
        let dist = count(corpus, &alignments).distances(opts.smoothing);

        let (max_change, changed) = match &prev_alignments {
            None => (None, None),
            Some(prev) => {
                let changed = prev.iter().zip(&alignments).filter(|(p, a)| p != a).count();
                (Some(table.max_change(&dist)), Some(changed))
            }
        };
        table.history.push(IterationLog { iteration, max_change, alignments_changed: changed });
        table.dist = dist;
        table.iterations_run = iteration;
        log::debug!("pmi round {iteration}: max change {max_change:?}, alignments changed {changed:?}");

        let converged = matches!(max_change, Some(c) if c < opts.tol) || changed == Some(0);
        if converged {
            table.converged = true;
            return Ok(table);
        }
        cm = table.to_cost_model(policy);
        prev_alignments = Some(alignments);
    }
    log::warn!("PMI induction did not converge in {} iterations", opts.max_iter);
    table.converged = false;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phonetics::{SegmentTable, Source};

    fn pair(a: &str, b: &str, word: &str) -> (Transcription, Transcription) {
        let t = SegmentTable::builtin();
        (t.transcribe(a, "L", word, Source::Older).unwrap(), t.transcribe(b, "L", word, Source::Standard).unwrap())
    }

    fn binary() -> CostModel {
        CostModel::binary(ConstraintPolicy::PHONETIC)
    }

    fn quiet() -> PmiOptions {
        PmiOptions { min_pairs: 0, ..PmiOptions::default() }
    }

    #[test]
    fn empty_corpus() {
        let corpus = AlignmentCorpus::default();
        assert_eq!(induce(&corpus, &binary(), &quiet()), Err(PmiError::EmptyCorpus));
    }

    #[test]
    fn pairs_must_share_word() {
        let (a, _) = pair("stra", "stra", "straat");
        let (_, b) = pair("stra", "stra", "steen");
        assert!(matches!(AlignmentCorpus::new(vec![(a, b)]), Err(PmiError::WordMismatch { index: 0, .. })));
    }

    #[test]
    fn rejects_bad_options() {
        let corpus = AlignmentCorpus::new(vec![pair("a", "a", "w")]).unwrap();
        for opts in [
            PmiOptions { max_iter: 0, ..quiet() },
            PmiOptions { tol: 0.0, ..quiet() },
            PmiOptions { smoothing: 0.0, ..quiet() },
        ] {
            assert!(matches!(induce(&corpus, &binary(), &opts), Err(PmiError::InvalidOptions(_))));
        }
    }

    #[test]
    fn identity_corpus_has_zero_diagonal_and_positive_off_diagonal() {
        let corpus =
            AlignmentCorpus::new(vec![pair("stra", "stra", "straat"), pair("stil", "stil", "stil")]).unwrap();
        let table = induce(&corpus, &binary(), &quiet()).unwrap();
        assert!(table.converged);
        assert_eq!(table.iterations_run, 2);
        for (a, b, d) in table.entries() {
            assert!((0.0..=1.0).contains(&d));
            if a == b {
                assert_eq!(d, 0.0);
            } else {
                assert!(d > 0.0, "[{a}]-[{b}] = {d}");
            }
        }
    }

    #[test]
    fn hand_computed_pmi() {
        // Columns: (a,a) x2, (a,o) x1. Symbols {-, a, o}; smoothing 1.
        // Unordered smoothed counts: (-,-) excluded, (-,a)=1, (-,o)=1,
        // (a,a)=3, (a,o)=2, (o,o)=1 -> total 8.
        // Marginals: a = 3 + 1/2 + 2/2 = 4.5, o = 1 + 1/2 + 2/2 = 2.5, - = 1.
        let mut counts = CoocCounts::default();
        counts.add_symbol(GAP);
        counts.add("a", "a", 2.0);
        counts.add("a", "o", 1.0);
        let pmi = counts.pmi(1.0);
        let expected_ao: f64 = f64::log2((2.0 / 2.0 / 8.0) / ((4.5 / 8.0) * (2.5 / 8.0)));
        let expected_aa: f64 = f64::log2((3.0 / 8.0) / ((4.5 / 8.0) * (4.5 / 8.0)));
        assert!((pmi[&key("a", "o")] - expected_ao).abs() < 1e-12);
        assert!((pmi[&key("a", "a")] - expected_aa).abs() < 1e-12);
        let dist = counts.distances(1.0);
        assert_eq!(dist[&key("a", "a")], 0.0);
        assert!(dist.values().all(|d| (0.0..=1.0).contains(d)));
        assert!(dist.values().any(|&d| d == 1.0));
    }

    #[test]
    fn frequent_partner_is_closer() {
        let mut pairs = Vec::new();
        for _ in 0..40 {
            pairs.push(pair("bit", "bɪt", "bit"));
        }
        pairs.push(pair("bit", "but", "but"));
        for _ in 0..40 {
            pairs.push(pair("bɪt", "bɪt", "bɪt"));
            pairs.push(pair("but", "but", "but"));
        }
        let corpus = AlignmentCorpus::new(pairs).unwrap();
        let table = induce(&corpus, &binary(), &quiet()).unwrap();
        assert!(table.get("i", "ɪ").unwrap() < table.get("i", "u").unwrap());
    }

    #[test]
    fn single_round_never_converges() {
        let corpus = AlignmentCorpus::new(vec![pair("stra", "strɔ", "straat")]).unwrap();
        let table = induce(&corpus, &binary(), &PmiOptions { max_iter: 1, ..quiet() }).unwrap();
        assert!(!table.converged);
        assert_eq!(table.iterations_run, 1);
        assert!(table.convergence_log().contains("converged=false"));
    }

    #[test]
    fn tsv_round_trip() {
        let corpus = AlignmentCorpus::new(vec![pair("stroːdə", "strɔət", "straat"), pair("stil", "stɪl", "stil")])
            .unwrap();
        let table = induce(&corpus, &binary(), &quiet()).unwrap();
        let text = table.to_tsv();
        let parsed = PmiTable::parse_tsv(text.as_bytes()).unwrap();
        assert_eq!(parsed.to_tsv(), text);
        assert_eq!(parsed.get("t", GAP), table.get(GAP, "t"));
        let lines: Vec<&str> = text.lines().collect();
        let mut sorted = lines.clone();
        sorted.sort_by_key(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].to_string(), f[1].to_string())
        });
        assert_eq!(lines, sorted);
    }

    #[test]
    fn table_entry_validation() {
        assert!(PmiTable::from_entries([("a", "o", 1.5)]).is_err());
        assert!(PmiTable::from_entries([("a", "a", 0.1)]).is_err());
        assert!(PmiTable::from_entries([(GAP, GAP, 0.0)]).is_err());
        assert!(PmiTable::from_entries([("a", "o", 0.1), ("o", "a", 0.2)]).is_err());
        assert!(PmiTable::from_entries([("a", "o", 0.1), ("o", "a", 0.1)]).is_ok());
        assert!(matches!(
            PmiTable::parse_tsv("a\to\n".as_bytes()),
            Err(PmiError::Parse { line: 1, .. })
        ));
    }
}
