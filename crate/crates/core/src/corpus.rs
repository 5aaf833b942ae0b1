//! Corpus ingestion, triple pairing and exclusion accounting.
//!
//! Input is a TSV file with header
//! `location  word  source  transcription  cognate_id  exclusion`, where
//! `source` is `older`, `newer` or `standard` and `exclusion` is one of
//! `-`, `lex`, `morph`, `reduction`, `missing`. Standard rows hold one
//! reference transcription per word; their location column is ignored
//! (conventionally `*`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use thiserror::Error;

use crate::phonetics::{PhoneticsError, SegmentTable, Source, Transcription};

pub const CORPUS_HEADER: [&str; 6] = ["location", "word", "source", "transcription", "cognate_id", "exclusion"];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: duplicate {} record for ({location}, {word})", role.as_str())]
    DuplicateRecord { line: usize, location: String, word: String, role: Source },
    #[error("({location}, {word}, {}): {error}", role.as_str())]
    Tokenize { location: String, word: String, role: Source, error: PhoneticsError },
}

/// Why a (location, word) pair was left out. Variant order is reporting
/// priority when several reasons apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exclusion {
    MissingData,
    LexicalMismatch,
    MorphologicalVariant,
    PhoneticReduction,
}

impl Exclusion {
    pub const ALL: [Exclusion; 4] = [
        Exclusion::MissingData,
        Exclusion::LexicalMismatch,
        Exclusion::MorphologicalVariant,
        Exclusion::PhoneticReduction,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Exclusion::MissingData => "missing",
            Exclusion::LexicalMismatch => "lex",
            Exclusion::MorphologicalVariant => "morph",
            Exclusion::PhoneticReduction => "reduction",
        }
    }

    fn parse(tag: &str) -> Result<Option<Self>, String> {
        match tag {
            "-" | "" => Ok(None),
            other => Self::ALL
                .into_iter()
                .find(|e| e.tag() == other)
                .map(Some)
                .ok_or_else(|| format!("unknown exclusion tag {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    pub location: String,
    pub word: String,
    pub source: Source,
    pub raw: String,
    pub cognate_id: Option<String>,
    pub exclusion: Option<Exclusion>,
    /// 1-based line in the input file; 0 for records built in memory.
    pub line: usize,
}

impl CorpusRecord {
    pub fn new(location: &str, word: &str, source: Source, raw: &str) -> Self {
        Self {
            location: location.to_string(),
            word: word.to_string(),
            source,
            raw: raw.to_string(),
            cognate_id: Some(word.to_string()),
            exclusion: None,
            line: 0,
        }
    }

    pub fn with_cognate(mut self, cognate: &str) -> Self {
        self.cognate_id = Some(cognate.to_string());
        self
    }

    pub fn excluded(mut self, reason: Exclusion) -> Self {
        self.exclusion = Some(reason);
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Keep the first of repeated (location, word, source) rows instead of
    /// failing; repeats are returned for reporting.
    pub keep_first_duplicate: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ingested {
    pub records: Vec<CorpusRecord>,
    /// Repeated rows dropped under [`IngestOptions::keep_first_duplicate`].
    pub duplicates: Vec<CorpusRecord>,
}

/// Reads a corpus file, rejecting duplicate rows.
pub fn ingest(path: &Path) -> Result<Vec<CorpusRecord>, CorpusError> {
    Ok(ingest_with(path, IngestOptions::default())?.records)
}

pub fn ingest_with(path: &Path, opts: IngestOptions) -> Result<Ingested, CorpusError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CorpusError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_records(std::io::BufReader::new(file), opts)
}

fn duplicate_key(r: &CorpusRecord) -> (String, String, Source) {
    let location = if r.source == Source::Standard { String::new() } else { r.location.clone() };
    (location, r.word.clone(), r.source)
}

pub fn parse_records<R: BufRead>(reader: R, opts: IngestOptions) -> Result<Ingested, CorpusError> {
    let mut out = Ingested::default();
    let mut seen: BTreeMap<(String, String, Source), usize> = BTreeMap::new();
    let mut header_seen = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| CorpusError::Parse { line: line_no, reason: e.to_string() })?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let parse = |reason: String| CorpusError::Parse { line: line_no, reason };
        if !header_seen {
            if fields != CORPUS_HEADER {
                return Err(parse(format!("expected header {:?}", CORPUS_HEADER.join("\t"))));
            }
            header_seen = true;
            continue;
        }
        if fields.len() != CORPUS_HEADER.len() {
            return Err(parse(format!("expected {} fields, got {}", CORPUS_HEADER.len(), fields.len())));
        }
        let source: Source = fields[2].parse().map_err(parse)?;
        let exclusion = Exclusion::parse(fields[5]).map_err(parse)?;
        if fields[0].is_empty() && source != Source::Standard {
            return Err(parse("empty location".into()));
        }
        if fields[1].is_empty() {
            return Err(parse("empty word".into()));
        }
        let cognate_id = match fields[4] {
            "" | "-" => None,
            c => Some(c.to_string()),
        };
        let record = CorpusRecord {
            location: fields[0].to_string(),
            word: fields[1].to_string(),
            source,
            raw: fields[3].to_string(),
            cognate_id,
            exclusion,
            line: line_no,
        };
        let key = duplicate_key(&record);
        if seen.contains_key(&key) {
            if opts.keep_first_duplicate {
                log::warn!("line {line_no}: repeated {} token of ({}, {}) ignored", source.as_str(), record.location, record.word);
                out.duplicates.push(record);
                continue;
            }
            return Err(CorpusError::DuplicateRecord {
                line: line_no,
                location: record.location,
                word: record.word,
                role: source,
            });
        }
        seen.insert(key, line_no);
        out.records.push(record);
    }
    if !header_seen {
        return Err(CorpusError::Parse { line: 0, reason: "missing header row".into() });
    }
    Ok(out)
}

/// Serializes records in the input format (header included).
pub fn write_records(records: &[CorpusRecord]) -> String {
    let mut out = CORPUS_HEADER.join("\t");
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.location,
            r.word,
            r.source.as_str(),
            r.raw,
            r.cognate_id.as_deref().unwrap_or("-"),
            r.exclusion.map_or("-", Exclusion::tag),
        )
        .expect("write to string");
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedTriple {
    pub location: String,
    pub word: String,
    pub older: Transcription,
    pub newer: Transcription,
    pub standard: Transcription,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcludedPair {
    pub location: String,
    pub word: String,
    pub reason: Exclusion,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pairing {
    pub triples: Vec<PairedTriple>,
    pub excluded: Vec<ExcludedPair>,
}

fn is_missing(r: Option<&CorpusRecord>) -> bool {
    match r {
        None => true,
        Some(r) => r.exclusion == Some(Exclusion::MissingData) || r.raw.trim().is_empty() || r.raw == "-",
    }
}

/// Combines older, newer and standard records per (location, word).
///
/// Every (location, word) seen in an older or newer row ends up either as a
/// triple or as an exclusion with the highest-priority reason. Output is
/// ordered by location, then word.
pub fn pair(records: &[CorpusRecord], table: &SegmentTable) -> Result<Pairing, CorpusError> {
    let mut standard: BTreeMap<&str, &CorpusRecord> = BTreeMap::new();
    type OlderNewer<'a> = (Option<&'a CorpusRecord>, Option<&'a CorpusRecord>);
    let mut groups: BTreeMap<(&str, &str), OlderNewer> = BTreeMap::new();
    for r in records {
        match r.source {
            Source::Standard => {
                standard.entry(&r.word).or_insert(r);
            }
            Source::Older => {
                groups.entry((&r.location, &r.word)).or_default().0.get_or_insert(r);
            }
            Source::Newer => {
                groups.entry((&r.location, &r.word)).or_default().1.get_or_insert(r);
            }
        }
    }

    let mut out = Pairing::default();
    for ((location, word), (older, newer)) in groups {
        let std_rec = standard.get(word).copied();
        let trio = [older, newer, std_rec];
        let mut reasons: Vec<Exclusion> = trio.iter().flatten().filter_map(|r| r.exclusion).collect();
        if trio.iter().any(|r| is_missing(*r)) {
            reasons.push(Exclusion::MissingData);
        }
        if let (Some(o), Some(n)) = (older, newer) {
            if let (Some(a), Some(b)) = (&o.cognate_id, &n.cognate_id) {
                if a != b {
                    reasons.push(Exclusion::LexicalMismatch);
                }
            }
        }
        if let Some(reason) = reasons.into_iter().min() {
            out.excluded.push(ExcludedPair { location: location.to_string(), word: word.to_string(), reason });
            continue;
        }
        let (older, newer, std_rec) = (older.unwrap(), newer.unwrap(), std_rec.unwrap());
        let transcribe = |r: &CorpusRecord| {
            table.transcribe(&r.raw, location, word, r.source).map_err(|error| CorpusError::Tokenize {
                location: location.to_string(),
                word: word.to_string(),
                role: r.source,
                error,
            })
        };
        out.triples.push(PairedTriple {
            location: location.to_string(),
            word: word.to_string(),
            older: transcribe(older)?,
            newer: transcribe(newer)?,
            standard: transcribe(std_rec)?,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocationRetention {
    pub location: String,
    pub retained: usize,
    pub excluded: BTreeMap<Exclusion, usize>,
}

impl LocationRetention {
    pub fn total(&self) -> usize {
        self.retained + self.excluded.values().sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetentionReport {
    pub locations: Vec<LocationRetention>,
    pub retained: usize,
    pub total: usize,
}

impl RetentionReport {
    /// Retained share of all (location, word) pairs; 0 for an empty corpus.
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.retained as f64 / self.total as f64
        }
    }

    pub fn retained_at(&self, location: &str) -> Option<usize> {
        self.locations.iter().find(|l| l.location == location).map(|l| l.retained)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("location,retained,missing,lex,morph,reduction,total\n");
        let mut line = |name: &str, retained: usize, ex: &BTreeMap<Exclusion, usize>, total: usize| {
            let n = |e: Exclusion| ex.get(&e).copied().unwrap_or(0);
            writeln!(
                out,
                "{},{retained},{},{},{},{},{total}",
                csv_field(name),
                n(Exclusion::MissingData),
                n(Exclusion::LexicalMismatch),
                n(Exclusion::MorphologicalVariant),
                n(Exclusion::PhoneticReduction),
            )
            .expect("write to string");
        };
        let mut all: BTreeMap<Exclusion, usize> = BTreeMap::new();
        for l in &self.locations {
            line(&l.location, l.retained, &l.excluded, l.total());
            for (e, n) in &l.excluded {
                *all.entry(*e).or_insert(0) += n;
            }
        }
        line("ALL", self.retained, &all, self.total);
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn retention_report(pairing: &Pairing) -> RetentionReport {
    let mut by_location: BTreeMap<&str, LocationRetention> = BTreeMap::new();
    for t in &pairing.triples {
        by_location
            .entry(&t.location)
            .or_insert_with(|| LocationRetention { location: t.location.clone(), retained: 0, excluded: BTreeMap::new() })
            .retained += 1;
    }
    for e in &pairing.excluded {
        *by_location
            .entry(&e.location)
            .or_insert_with(|| LocationRetention { location: e.location.clone(), retained: 0, excluded: BTreeMap::new() })
            .excluded
            .entry(e.reason)
            .or_insert(0) += 1;
    }
    let retained = pairing.triples.len();
    RetentionReport { locations: by_location.into_values().collect(), retained, total: retained + pairing.excluded.len() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DialectGroup {
    FR,
    DUFR,
    GR,
    LS,
}

impl DialectGroup {
    pub const ALL: [DialectGroup; 4] = [DialectGroup::FR, DialectGroup::DUFR, DialectGroup::GR, DialectGroup::LS];

    pub fn as_str(self) -> &'static str {
        match self {
            DialectGroup::FR => "FR",
            DialectGroup::DUFR => "DUFR",
            DialectGroup::GR => "GR",
            DialectGroup::LS => "LS",
        }
    }
}

impl std::str::FromStr for DialectGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "FR" => Ok(DialectGroup::FR),
            "DUFR" | "DU-FR" => Ok(DialectGroup::DUFR),
            "GR" => Ok(DialectGroup::GR),
            "LS" => Ok(DialectGroup::LS),
            other => Err(format!("unknown dialect group {other:?}")),
        }
    }
}

/// Location to dialect group. The LS contrast sets Low Saxon (without
/// Groningen) against the other three groups.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupMap {
    assignments: BTreeMap<String, DialectGroup>,
}

const NORTHERN_GROUPS: [(&str, DialectGroup); 24] = [
    ("Grouw", DialectGroup::FR),
    ("Jubbega", DialectGroup::FR),
    ("Lemmer", DialectGroup::FR),
    ("Noordwolde", DialectGroup::FR),
    ("Sexbierum", DialectGroup::FR),
    ("Veenwouden", DialectGroup::FR),
    ("Workum", DialectGroup::FR),
    ("Dokkum", DialectGroup::DUFR),
    ("Sint-Annaparochie", DialectGroup::DUFR),
    ("Sneek", DialectGroup::DUFR),
    ("Eelde", DialectGroup::GR),
    ("Finsterwolde", DialectGroup::GR),
    ("Grijpskerk", DialectGroup::GR),
    ("Roswinkel", DialectGroup::GR),
    ("Slochteren", DialectGroup::GR),
    ("Groenlo", DialectGroup::LS),
    ("Grolloo", DialectGroup::LS),
    ("IJsselmuiden", DialectGroup::LS),
    ("Kampen", DialectGroup::LS),
    ("Koekange", DialectGroup::LS),
    ("Laren", DialectGroup::LS),
    ("Ommen", DialectGroup::LS),
    ("Tilligte", DialectGroup::LS),
    ("Zwinderen", DialectGroup::LS),
];

impl GroupMap {
    pub fn new(assignments: impl IntoIterator<Item = (String, DialectGroup)>) -> Self {
        Self { assignments: assignments.into_iter().collect() }
    }

    /// The 24 northern Netherlands locations and their groups.
    pub fn northern_netherlands() -> Self {
        Self::new(NORTHERN_GROUPS.iter().map(|(l, g)| (l.to_string(), *g)))
    }

    pub fn get(&self, location: &str) -> Option<DialectGroup> {
        self.assignments.get(location).copied()
    }

    pub fn is_ls(&self, location: &str) -> Option<bool> {
        self.get(location).map(|g| g == DialectGroup::LS)
    }

    pub fn locations(&self) -> impl Iterator<Item = (&str, DialectGroup)> {
        self.assignments.iter().map(|(l, g)| (l.as_str(), *g))
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// `location<TAB>group` lines; `#` comments and a `location<TAB>group`
    /// header are skipped.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self, CorpusError> {
        let mut assignments = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| CorpusError::Parse { line: line_no, reason: e.to_string() })?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') || line == "location\tgroup" {
                continue;
            }
            let parse = |reason: String| CorpusError::Parse { line: line_no, reason };
            let (location, group) = line.split_once('\t').ok_or_else(|| parse("expected location<TAB>group".into()))?;
            let group: DialectGroup = group.parse().map_err(parse)?;
            if assignments.insert(location.to_string(), group).is_some_and(|prev| prev != group) {
                return Err(parse(format!("location {location:?} assigned to two groups")));
            }
        }
        Ok(Self { assignments })
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let file = std::fs::File::open(path)
            .map_err(|e| CorpusError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(std::io::BufReader::new(file))
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("location\tgroup\n");
        for (l, g) in self.locations() {
            writeln!(out, "{l}\t{}", g.as_str()).expect("write to string");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "location\tword\tsource\ttranscription\tcognate_id\texclusion\n\
Kampen\tstraat\tolder\tstroːdə\tstraat\t-\n\
Kampen\tstraat\tnewer\tstrɔət\tstraat\t-\n\
*\tstraat\tstandard\tstrat\tstraat\t-\n";

    fn read(text: &str) -> Result<Vec<CorpusRecord>, CorpusError> {
        parse_records(text.as_bytes(), IngestOptions::default()).map(|i| i.records)
    }

    #[test]
    fn well_formed_file() {
        let records = read(SAMPLE).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[2].source, Source::Standard);
        assert_eq!(records[0].line, 2);
        assert_eq!(write_records(&records), SAMPLE);
    }

    #[test]
    fn duplicate_standard_word() {
        let text = format!("{SAMPLE}Dokkum\tstraat\tstandard\tstraːt\tstraat\t-\n");
        assert!(matches!(read(&text), Err(CorpusError::DuplicateRecord { line: 5, .. })));
    }

    #[test]
    fn repeated_token_kept_first_when_asked() {
        let text = format!("{SAMPLE}Kampen\tstraat\tnewer\tstrɔːt\tstraat\t-\n");
        assert!(matches!(read(&text), Err(CorpusError::DuplicateRecord { .. })));
        let ing = parse_records(text.as_bytes(), IngestOptions { keep_first_duplicate: true }).unwrap();
        assert_eq!(ing.records.len(), 3);
        assert_eq!(ing.records[1].raw, "strɔət");
        assert_eq!(ing.duplicates.len(), 1);
    }

    #[test]
    fn unknown_exclusion_tag() {
        let text = SAMPLE.replace("strat\tstraat\t-", "strat\tstraat\tdialect");
        assert!(matches!(read(&text), Err(CorpusError::Parse { line: 4, .. })));
    }

    #[test]
    fn bad_header_and_field_counts() {
        assert!(matches!(read("loc\tword\n"), Err(CorpusError::Parse { line: 1, .. })));
        let text = format!("{SAMPLE}Kampen\tsteen\tolder\n");
        assert!(matches!(read(&text), Err(CorpusError::Parse { line: 5, .. })));
        let text = format!("{SAMPLE}Kampen\tsteen\tancient\tsten\tsteen\t-\n");
        assert!(matches!(read(&text), Err(CorpusError::Parse { line: 5, .. })));
    }

    #[test]
    fn clean_triple_pairs() {
        let p = pair(&read(SAMPLE).unwrap(), &SegmentTable::builtin()).unwrap();
        assert_eq!(p.triples.len(), 1);
        assert!(p.excluded.is_empty());
        assert_eq!(p.triples[0].older.source, Source::Older);
        assert_eq!(p.triples[0].standard.len(), 5);
    }

    #[test]
    fn cognate_mismatch_is_lexical() {
        let records = vec![
            CorpusRecord::new("Kampen", "steen", Source::Older, "steːn"),
            CorpusRecord::new("Kampen", "steen", Source::Newer, "kɛi").with_cognate("kei"),
            CorpusRecord::new("*", "steen", Source::Standard, "sten"),
        ];
        let p = pair(&records, &SegmentTable::builtin()).unwrap();
        assert!(p.triples.is_empty());
        assert_eq!(p.excluded[0].reason, Exclusion::LexicalMismatch);
    }

    #[test]
    fn exclusion_priority() {
        let records = vec![
            CorpusRecord::new("A", "w", Source::Older, "a").excluded(Exclusion::PhoneticReduction),
            CorpusRecord::new("A", "w", Source::Newer, "o").excluded(Exclusion::MorphologicalVariant),
            CorpusRecord::new("*", "w", Source::Standard, "a"),
            CorpusRecord::new("B", "w", Source::Older, "a").with_cognate("x"),
            CorpusRecord::new("B", "w", Source::Newer, "a").excluded(Exclusion::PhoneticReduction),
            CorpusRecord::new("C", "w", Source::Older, "a").with_cognate("x"),
            CorpusRecord::new("D", "v", Source::Older, "a"),
            CorpusRecord::new("D", "v", Source::Newer, "a"),
        ];
        let p = pair(&records, &SegmentTable::builtin()).unwrap();
        let reasons: Vec<_> = p.excluded.iter().map(|e| (e.location.as_str(), e.reason)).collect();
        assert_eq!(
            reasons,
            [
                ("A", Exclusion::MorphologicalVariant),
                ("B", Exclusion::LexicalMismatch),
                ("C", Exclusion::MissingData),
                ("D", Exclusion::MissingData),
            ]
        );
    }

    #[test]
    fn location_with_four_flagged_of_36() {
        let mut records = Vec::new();
        for w in 0..36 {
            let word = format!("w{w}");
            records.push(CorpusRecord::new("*", &word, Source::Standard, "stra"));
            records.push(CorpusRecord::new("Kampen", &word, Source::Older, "stro"));
            let newer = CorpusRecord::new("Kampen", &word, Source::Newer, "strɔ");
            records.push(if w < 4 { newer.excluded(Exclusion::MorphologicalVariant) } else { newer });
        }
        let p = pair(&records, &SegmentTable::builtin()).unwrap();
        let report = retention_report(&p);
        assert_eq!(report.retained_at("Kampen"), Some(32));
        assert_eq!(report.total, 36);
    }

    #[test]
    fn retention_edges() {
        let report = retention_report(&Pairing::default());
        assert_eq!(report.fraction(), 0.0);
        let p = pair(&read(SAMPLE).unwrap(), &SegmentTable::builtin()).unwrap();
        assert_eq!(retention_report(&p).fraction(), 1.0);
        let csv = retention_report(&p).to_csv();
        assert!(csv.starts_with("location,retained,missing,lex,morph,reduction,total\nKampen,1,0,0,0,0,1\n"));
    }

    #[test]
    fn tokenization_failure_names_the_record() {
        let text = SAMPLE.replace("strɔət", "str7t");
        let err = pair(&read(&text).unwrap(), &SegmentTable::builtin()).unwrap_err();
        assert!(matches!(err, CorpusError::Tokenize { role: Source::Newer, .. }));
    }

    #[test]
    fn group_map_file() {
        let map = GroupMap::parse("location\tgroup\nKampen\tLS\nDokkum\tDU-FR\n".as_bytes()).unwrap();
        assert_eq!(map.is_ls("Kampen"), Some(true));
        assert_eq!(map.get("Dokkum"), Some(DialectGroup::DUFR));
        assert!(GroupMap::parse("Kampen\tXX\n".as_bytes()).is_err());
        assert!(GroupMap::parse("Kampen\tLS\nKampen\tGR\n".as_bytes()).is_err());
        let builtin = GroupMap::northern_netherlands();
        assert_eq!(builtin.len(), 24);
        assert_eq!(builtin.locations().filter(|(_, g)| *g == DialectGroup::LS).count(), 9);
        assert_eq!(GroupMap::parse(builtin.to_tsv().as_bytes()).unwrap(), builtin);
    }
}
