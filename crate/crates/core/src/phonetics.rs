//! Phonetic segments and IPA tokenization.
//!
//! A [`Segment`] is one base symbol plus every modifier that immediately
//! follows it (length marks, combining diacritics, spacing modifier letters).
//! Classification comes from a [`SegmentTable`] keyed by base symbol; symbols
//! the table does not know are rejected rather than guessed.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::BufRead;
use std::path::Path;

use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// The consonants that may align with schwa.
pub const SONORANTS: [char; 7] = ['m', 'l', 'n', 'r', 'ŋ', 'j', 'w'];

/// Reserved for the gap symbol in cost tables; never a segment.
pub const GAP: &str = "-";

const TIE_BARS: [char; 2] = ['\u{0361}', '\u{035C}'];

#[derive(Debug, Error, PartialEq)]
pub enum PhoneticsError {
    #[error("unknown symbol {ch:?} at character {position}")]
    UnknownSymbol { position: usize, ch: char },
    #[error("modifier {ch:?} at character {position} has no base symbol")]
    OrphanModifier { position: usize, ch: char },
    #[error("empty transcription")]
    EmptyInput,
    #[error("segment table line {line}: {reason}")]
    TableSyntax { line: usize, reason: String },
    #[error("cannot read segment table: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegmentClass {
    Vowel,
    Consonant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymbolInfo {
    pub class: SegmentClass,
    pub sonorant: bool,
    pub schwa: bool,
}

impl SymbolInfo {
    pub const fn vowel() -> Self {
        Self { class: SegmentClass::Vowel, sonorant: false, schwa: false }
    }

    pub const fn consonant() -> Self {
        Self { class: SegmentClass::Consonant, sonorant: false, schwa: false }
    }
}

/// One phonetic token. Identity (for cost lookup and equality) is the full
/// symbol string, so `oː` and `o` are different segments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    symbol: String,
    base: char,
    info: SymbolInfo,
}

impl Segment {
    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn base(&self) -> char {
        self.base
    }

    /// Everything after the base character, in canonical decomposition.
    pub fn modifiers(&self) -> Vec<char> {
        self.symbol.nfd().skip(1).collect()
    }

    pub fn class(&self) -> SegmentClass {
        self.info.class
    }

    pub fn is_vowel(&self) -> bool {
        self.info.class == SegmentClass::Vowel
    }

    pub fn is_sonorant_consonant(&self) -> bool {
        self.info.sonorant
    }

    pub fn is_schwa(&self) -> bool {
        self.info.schwa
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)
    }
}

/// Opaque fingerprint of a [`SegmentTable`]; transcriptions carry it so that
/// alignments can refuse to mix tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TableId(u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Older,
    Newer,
    Standard,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Older => "older",
            Source::Newer => "newer",
            Source::Standard => "standard",
        }
    }
}

impl std::str::FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "older" => Ok(Source::Older),
            "newer" => Ok(Source::Newer),
            "standard" => Ok(Source::Standard),
            other => Err(format!("unknown source {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transcription {
    pub segments: Vec<Segment>,
    pub location: String,
    pub word: String,
    pub source: Source,
    pub table: TableId,
}

impl Transcription {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// The transcription as written, segments concatenated.
    pub fn text(&self) -> String {
        self.segments.iter().map(Segment::symbol).collect()
    }
}

/// Maps base symbols to their phonetic class.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentTable {
    entries: BTreeMap<char, SymbolInfo>,
}

const BUILTIN_VOWELS: &str = "aɑɒæɐeɛɜəɘɞiɪɨɯɤoɔɵøœɶuʊʉyʏʌ";
const BUILTIN_CONSONANTS: &str = "pbtdʈɖcɟkgɡqɢʔmɱnɳɲŋɴrʀɾɽɹɻlɫɭʎʟɸβfvθðszʃʒʂʐɕʑçʝxɣχʁħʕhɦʋwjɥɰɬɮ";

impl SegmentTable {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    /// Covers the IPA base symbols needed for Dutch and Frisian/Low Saxon
    /// transcriptions. Sonorant flags are set on exactly [`SONORANTS`].
    pub fn builtin() -> Self {
        let mut table = Self::empty();
        for ch in BUILTIN_VOWELS.chars() {
            let schwa = ch == 'ə';
            table.entries.insert(ch, SymbolInfo { schwa, ..SymbolInfo::vowel() });
        }
        for ch in BUILTIN_CONSONANTS.chars() {
            let sonorant = SONORANTS.contains(&ch);
            table.entries.insert(ch, SymbolInfo { sonorant, ..SymbolInfo::consonant() });
        }
        table
    }

    /// Adds or replaces an entry. Rejects flag combinations the alignment
    /// policy cannot honour.
    pub fn insert(&mut self, symbol: char, info: SymbolInfo) -> Result<(), String> {
        if info.schwa && info.class != SegmentClass::Vowel {
            return Err(format!("{symbol}: schwa flag requires class V"));
        }
        if info.sonorant {
            if info.class != SegmentClass::Consonant {
                return Err(format!("{symbol}: sonorant flag requires class C"));
            }
            if !SONORANTS.contains(&symbol) {
                return Err(format!("{symbol}: sonorant set is fixed to m l n r ŋ j w"));
            }
        }
        if GAP.starts_with(symbol) || symbol.is_whitespace() || is_modifier(symbol) {
            return Err(format!("{symbol:?} cannot be a base symbol"));
        }
        self.entries.insert(symbol, info);
        Ok(())
    }

    /// Parses `symbol<TAB>V|C<TAB>flags` lines; `#` starts a comment line.
    /// Flags are comma-separated from `sonorant`, `schwa`, or `-` for none.
    pub fn parse(text: &str) -> Result<Self, PhoneticsError> {
        let mut table = Self::empty();
        table.merge_lines(text.as_bytes())?;
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, PhoneticsError> {
        let file = std::fs::File::open(path)
            .map_err(|e| PhoneticsError::Io(format!("{}: {e}", path.display())))?;
        let mut table = Self::empty();
        table.merge_lines(std::io::BufReader::new(file))?;
        Ok(table)
    }

    /// Builtin table extended (or overridden) by the entries of a table file.
    pub fn builtin_with(path: &Path) -> Result<Self, PhoneticsError> {
        let file = std::fs::File::open(path)
            .map_err(|e| PhoneticsError::Io(format!("{}: {e}", path.display())))?;
        let mut table = Self::builtin();
        table.merge_lines(std::io::BufReader::new(file))?;
        Ok(table)
    }

    fn merge_lines<R: BufRead>(&mut self, reader: R) -> Result<(), PhoneticsError> {
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| PhoneticsError::Io(e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |reason: String| PhoneticsError::TableSyntax { line: line_no, reason };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(syntax(format!("expected 2 or 3 tab-separated fields, got {}", fields.len())));
            }
            let symbol: String = fields[0].nfc().collect();
            let mut chars = symbol.chars();
            let base = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(syntax(format!("symbol {symbol:?} must be a single base character"))),
            };
            let class = match fields[1] {
                "V" => SegmentClass::Vowel,
                "C" => SegmentClass::Consonant,
                other => return Err(syntax(format!("class must be V or C, got {other:?}"))),
            };
            let mut info = SymbolInfo { class, sonorant: false, schwa: false };
            if let Some(flags) = fields.get(2) {
                for flag in flags.split(',').map(str::trim).filter(|f| !f.is_empty() && *f != "-") {
                    match flag {
                        "sonorant" => info.sonorant = true,
                        "schwa" => info.schwa = true,
                        other => return Err(syntax(format!("unknown flag {other:?}"))),
                    }
                }
            }
            self.insert(base, info).map_err(syntax)?;
        }
        Ok(())
    }

    /// Writes the table in its file format, one symbol per line in code point order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# symbol\tclass\tflags\n");
        for (ch, info) in &self.entries {
            let class = match info.class {
                SegmentClass::Vowel => "V",
                SegmentClass::Consonant => "C",
            };
            let mut flags = Vec::new();
            if info.sonorant {
                flags.push("sonorant");
            }
            if info.schwa {
                flags.push("schwa");
            }
            let flags = if flags.is_empty() { "-".to_string() } else { flags.join(",") };
            out.push_str(&format!("{ch}\t{class}\t{flags}\n"));
        }
        out
    }

    pub fn contains(&self, symbol: char) -> bool {
        self.entries.contains_key(&symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = char> + '_ {
        self.entries.keys().copied()
    }

    pub fn id(&self) -> TableId {
        let mut hasher = DefaultHasher::new();
        for (ch, info) in &self.entries {
            ch.hash(&mut hasher);
            info.hash(&mut hasher);
        }
        TableId(hasher.finish())
    }

    /// Classification of a segment string; only the base (first) character counts.
    pub fn classify(&self, symbol: &str) -> Result<SymbolInfo, PhoneticsError> {
        let first = symbol.chars().next().ok_or(PhoneticsError::EmptyInput)?;
        self.lookup(first)
            .map(|(_, info)| info)
            .ok_or(PhoneticsError::UnknownSymbol { position: 0, ch: first })
    }

    // NFC composes some vowel+diacritic pairs (o + tilde -> õ); those are
    // classified by the base of their canonical decomposition.
    fn lookup(&self, ch: char) -> Option<(char, SymbolInfo)> {
        if let Some(info) = self.entries.get(&ch) {
            return Some((ch, *info));
        }
        let base = std::iter::once(ch).nfd().next()?;
        if base == ch {
            return None;
        }
        self.entries.get(&base).map(|info| (base, *info))
    }

    /// Splits a transcription into segments by maximal munch.
    ///
    /// The input is NFC-normalized first. A segment is a base symbol followed
    /// by all modifier characters; a tie bar also pulls in the next base
    /// symbol, so `t͡s` is one segment.
    pub fn tokenize(&self, raw: &str) -> Result<Vec<Segment>, PhoneticsError> {
        let text: String = raw.nfc().collect();
        if text.is_empty() {
            return Err(PhoneticsError::EmptyInput);
        }
        let mut segments: Vec<Segment> = Vec::new();
        let mut tied = false;
        for (position, ch) in text.chars().enumerate() {
            if is_modifier(ch) {
                let Some(last) = segments.last_mut() else {
                    return Err(PhoneticsError::OrphanModifier { position, ch });
                };
                last.symbol.push(ch);
                tied = TIE_BARS.contains(&ch);
                continue;
            }
            let (base, info) = self
                .lookup(ch)
                .ok_or(PhoneticsError::UnknownSymbol { position, ch })?;
            if tied {
                segments.last_mut().expect("tie bar follows a segment").symbol.push(ch);
                tied = false;
            } else {
                segments.push(Segment { symbol: ch.to_string(), base, info });
            }
        }
        Ok(segments)
    }

    pub fn transcribe(
        &self,
        raw: &str,
        location: &str,
        word: &str,
        source: Source,
    ) -> Result<Transcription, PhoneticsError> {
        Ok(Transcription {
            segments: self.tokenize(raw)?,
            location: location.to_string(),
            word: word.to_string(),
            source,
            table: self.id(),
        })
    }
}

impl Default for SegmentTable {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Length marks, combining diacritics and spacing modifier letters (except
/// the stress marks, which precede rather than follow a segment).
pub fn is_modifier(ch: char) -> bool {
    if is_combining_mark(ch) {
        return true;
    }
    match ch {
        'ˈ' | 'ˌ' => false,
        '\u{02B0}'..='\u{02FF}' => true,
        '\u{1D2C}'..='\u{1D6A}' | '\u{1D9B}'..='\u{1DBF}' => true,
        'ⁿ' => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symbols(segments: &[Segment]) -> Vec<&str> {
        segments.iter().map(Segment::symbol).collect()
    }

    #[test]
    fn munches_length_marks() {
        let table = SegmentTable::builtin();
        let segs = table.tokenize("stroːdə").unwrap();
        assert_eq!(symbols(&segs), ["s", "t", "r", "oː", "d", "ə"]);
        assert!(segs[5].is_schwa());
        assert!(segs[5].is_vowel());
        assert_eq!(segs[3].modifiers(), ['ː']);
    }

    #[test]
    fn newer_straat_has_six_segments() {
        let table = SegmentTable::builtin();
        let segs = table.tokenize("strɔət").unwrap();
        assert_eq!(symbols(&segs), ["s", "t", "r", "ɔ", "ə", "t"]);
    }

    #[test]
    fn empty_input() {
        assert_eq!(SegmentTable::builtin().tokenize(""), Err(PhoneticsError::EmptyInput));
    }

    #[test]
    fn unknown_symbol_reports_position() {
        let err = SegmentTable::builtin().tokenize("st7").unwrap_err();
        assert_eq!(err, PhoneticsError::UnknownSymbol { position: 2, ch: '7' });
        let err = SegmentTable::builtin().tokenize("ˈstra").unwrap_err();
        assert_eq!(err, PhoneticsError::UnknownSymbol { position: 0, ch: 'ˈ' });
    }

    #[test]
    fn leading_modifier_is_rejected() {
        let err = SegmentTable::builtin().tokenize("ːa").unwrap_err();
        assert_eq!(err, PhoneticsError::OrphanModifier { position: 0, ch: 'ː' });
    }

    #[test]
    fn decomposed_input_is_normalized() {
        let table = SegmentTable::builtin();
        let segs = table.tokenize("n\u{0325}a").unwrap();
        assert_eq!(symbols(&segs), ["n\u{0325}", "a"]);
        assert!(segs[0].is_sonorant_consonant());
        // o + combining tilde composes to a single scalar
        let segs = table.tokenize("ko\u{0303}ː").unwrap();
        assert_eq!(symbols(&segs), ["k", "\u{00F5}ː"]);
        assert_eq!(segs[1].base(), 'o');
        assert!(segs[1].is_vowel());
        assert_eq!(segs[1].modifiers(), ['\u{0303}', 'ː']);
    }

    #[test]
    fn tie_bar_joins_affricates() {
        let segs = SegmentTable::builtin().tokenize("t\u{0361}sɑ").unwrap();
        assert_eq!(symbols(&segs), ["t\u{0361}s", "ɑ"]);
        assert_eq!(segs[0].base(), 't');
    }

    #[test]
    fn classify_examples() {
        let table = SegmentTable::builtin();
        let n = table.classify("n").unwrap();
        assert_eq!((n.class, n.sonorant, n.schwa), (SegmentClass::Consonant, true, false));
        let schwa = table.classify("ə").unwrap();
        assert_eq!((schwa.class, schwa.sonorant, schwa.schwa), (SegmentClass::Vowel, false, true));
        let s = table.classify("s").unwrap();
        assert_eq!((s.class, s.sonorant, s.schwa), (SegmentClass::Consonant, false, false));
        assert!(matches!(table.classify("7"), Err(PhoneticsError::UnknownSymbol { .. })));
    }

    #[test]
    fn builtin_sonorants_are_exactly_the_seven() {
        let table = SegmentTable::builtin();
        let sonorants: Vec<char> = table
            .symbols()
            .filter(|&c| table.classify(&c.to_string()).unwrap().sonorant)
            .collect();
        let mut expected = SONORANTS.to_vec();
        expected.sort();
        assert_eq!(sonorants, expected);
    }

    #[test]
    fn table_file_round_trip() {
        let table = SegmentTable::builtin();
        let parsed = SegmentTable::parse(&table.to_tsv()).unwrap();
        assert_eq!(parsed, table);
        assert_eq!(parsed.id(), table.id());
    }

    #[test]
    fn table_file_errors() {
        assert!(matches!(
            SegmentTable::parse("a\tX\n"),
            Err(PhoneticsError::TableSyntax { line: 1, .. })
        ));
        assert!(matches!(
            SegmentTable::parse("# c\ns\tC\tsonorant\n"),
            Err(PhoneticsError::TableSyntax { line: 2, .. })
        ));
        assert!(SegmentTable::parse("s\tC\tschwa\n").is_err());
        assert!(SegmentTable::parse("-\tC\n").is_err());
        assert!(SegmentTable::parse("ab\tV\n").is_err());
        let t = SegmentTable::parse("# comment\nə\tV\tschwa\nn\tC\tsonorant\n\n").unwrap();
        assert!(t.classify("ə").unwrap().schwa);
    }

    #[test]
    fn segment_identity_includes_modifiers() {
        let table = SegmentTable::builtin();
        let long = &table.tokenize("oː").unwrap()[0];
        let short = &table.tokenize("o").unwrap()[0];
        assert_ne!(long, short);
        assert_eq!(long.base(), short.base());
    }
}
