//! Seeded synthetic data: a corpus in the ingestion format with known
//! injected change rates, mixed-edit triples, and simulated change records.
//!
//! None of this is real dialect data. The word list and locations follow
//! the northern Netherlands setting; the standard forms are broad
//! transcriptions and the dialect variants are arbitrary class-preserving
//! substitutions.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::align3::ChangeRecord;
use crate::analysis::Coordinates;
use crate::corpus::{CorpusRecord, DialectGroup, Exclusion, GroupMap};
use crate::phonetics::{Segment, SegmentTable, Source, Transcription};

/// The 36 overlap words with a broad standard Dutch transcription.
pub const WORDS: [(&str, &str); 36] = [
    ("als", "ɑls"),
    ("bij", "bɛi"),
    ("buiten", "bœytən"),
    ("door", "doːr"),
    ("glas", "ɣlɑs"),
    ("goed", "ɣut"),
    ("hem", "ɦɛm"),
    ("hij", "ɦɛi"),
    ("hoek", "ɦuk"),
    ("houden", "ɦʌudən"),
    ("huizen", "ɦœyzən"),
    ("in", "ɪn"),
    ("is", "ɪs"),
    ("juist", "jœyst"),
    ("klein", "klɛin"),
    ("korte", "kɔrtə"),
    ("krijgen", "krɛiɣən"),
    ("later", "laːtər"),
    ("loopt", "loːpt"),
    ("lopen", "loːpən"),
    ("met", "mɛt"),
    ("naar", "naːr"),
    ("niet", "nit"),
    ("nu", "ny"),
    ("om", "ɔm"),
    ("ook", "oːk"),
    ("op", "ɔp"),
    ("ruit", "rœyt"),
    ("steen", "steːn"),
    ("stil", "stɪl"),
    ("straat", "straːt"),
    ("straten", "straːtən"),
    ("tijd", "tɛit"),
    ("vraagt", "vraːxt"),
    ("wil", "ʋɪl"),
    ("ziet", "zit"),
];

/// Approximate (longitude, latitude) of the 24 locations.
const COORDINATES: [(&str, f64, f64); 24] = [
    ("Dokkum", 6.00, 53.33),
    ("Eelde", 6.56, 53.13),
    ("Finsterwolde", 7.09, 53.20),
    ("Grijpskerk", 6.30, 53.26),
    ("Groenlo", 6.61, 52.04),
    ("Grolloo", 6.67, 52.93),
    ("Grouw", 5.84, 53.09),
    ("IJsselmuiden", 5.92, 52.57),
    ("Jubbega", 6.12, 52.99),
    ("Kampen", 5.91, 52.56),
    ("Koekange", 6.31, 52.70),
    ("Laren", 6.37, 52.19),
    ("Lemmer", 5.71, 52.84),
    ("Noordwolde", 6.14, 52.89),
    ("Ommen", 6.42, 52.52),
    ("Roswinkel", 7.04, 52.84),
    ("Sexbierum", 5.48, 53.22),
    ("Sint-Annaparochie", 5.66, 53.28),
    ("Slochteren", 6.80, 53.22),
    ("Sneek", 5.66, 53.03),
    ("Tilligte", 6.97, 52.37),
    ("Veenwouden", 5.99, 53.24),
    ("Workum", 5.45, 52.98),
    ("Zwinderen", 6.72, 52.75),
];

pub fn northern_coordinates() -> Coordinates {
    COORDINATES.iter().map(|&(l, lon, lat)| (l.to_string(), (lon, lat))).collect()
}

/// Class-preserving replacement for each base symbol used in [`WORDS`].
/// None of the replacements occurs in a standard form.
const VARIANTS: [(char, char); 30] = [
    ('a', 'ɐ'),
    ('ɑ', 'ɒ'),
    ('ɛ', 'æ'),
    ('e', 'ø'),
    ('i', 'ɨ'),
    ('ɪ', 'ʏ'),
    ('o', 'ɵ'),
    ('ɔ', 'ɞ'),
    ('u', 'ʉ'),
    ('y', 'ɯ'),
    ('œ', 'ɶ'),
    ('ʌ', 'ɤ'),
    ('ə', 'ɘ'),
    ('t', 'ʈ'),
    ('d', 'ɖ'),
    ('s', 'ʃ'),
    ('z', 'ʒ'),
    ('k', 'c'),
    ('ɣ', 'ʝ'),
    ('x', 'χ'),
    ('p', 'ɸ'),
    ('b', 'β'),
    ('l', 'ɫ'),
    ('r', 'ʀ'),
    ('n', 'ɲ'),
    ('m', 'ɱ'),
    ('ɦ', 'h'),
    ('j', 'ʎ'),
    ('v', 'f'),
    ('ʋ', 'w'),
];

fn variant_of(base: char) -> char {
    VARIANTS.iter().find(|(b, _)| *b == base).map(|(_, v)| *v).expect("every standard symbol has a variant")
}

/// The segment's symbol with its base replaced by the variant.
fn vary(seg: &Segment) -> String {
    let mut out = String::new();
    out.push(variant_of(seg.base()));
    out.extend(seg.symbol().chars().skip(1));
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    /// Share of (location, word) pairs carrying an exclusion.
    pub exclusion_rate: f64,
    /// Target mean convergence over retained triples.
    pub conv_rate: f64,
    pub div_rate: f64,
    /// LS minus non-LS difference in injected rates; the overall targets
    /// are kept.
    pub ls_conv_shift: f64,
    pub ls_div_shift: f64,
    /// Per-segment chance of a dialect variant shared by older and newer.
    pub stable_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 20_100,
            exclusion_rate: 0.33,
            conv_rate: 0.020,
            div_rate: 0.014,
            ls_conv_shift: 0.012,
            ls_div_shift: -0.008,
            stable_rate: 0.15,
        }
    }
}

/// Per-triple proportions the generator wrote in by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct InjectedChange {
    pub location: String,
    pub word: String,
    pub conv: f64,
    pub div: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub records: Vec<CorpusRecord>,
    pub injected: Vec<InjectedChange>,
}

impl SynthCorpus {
    pub fn injected_conv(&self) -> f64 {
        self.injected.iter().map(|c| c.conv).sum::<f64>() / self.injected.len() as f64
    }

    pub fn injected_div(&self) -> f64 {
        self.injected.iter().map(|c| c.div).sum::<f64>() / self.injected.len() as f64
    }
}

struct Plan {
    location: String,
    word: &'static str,
    standard: Vec<Segment>,
    is_ls: bool,
    stable: BTreeSet<usize>,
    conv: BTreeSet<usize>,
    div: BTreeSet<usize>,
}

impl Plan {
    fn free(&self) -> Vec<usize> {
        (0..self.standard.len())
            .filter(|p| !self.stable.contains(p) && !self.conv.contains(p) && !self.div.contains(p))
            .collect()
    }

    fn render(&self, source: Source) -> String {
        let changed = |p: &usize| match source {
            Source::Older => self.stable.contains(p) || self.conv.contains(p),
            Source::Newer => self.stable.contains(p) || self.div.contains(p),
            Source::Standard => false,
        };
        self.standard
            .iter()
            .enumerate()
            .map(|(p, s)| if changed(&p) { vary(s) } else { s.symbol().to_string() })
            .collect()
    }
}

/// Adds single-column changes until the mean proportion over `plans`
/// reaches `target`, visiting plans in a seeded order.
fn allocate(plans: &mut [&mut Plan], target: f64, pick: fn(&mut Plan) -> &mut BTreeSet<usize>, rng: &mut ChaCha8Rng) {
    if plans.is_empty() {
        return;
    }
    let goal = target * plans.len() as f64;
    let mut sum = 0.0;
    let mut order: Vec<usize> = (0..plans.len()).collect();
    order.shuffle(rng);
    loop {
        let mut added = false;
        for &i in &order {
            let plan = &mut *plans[i];
            let step = 1.0 / plan.standard.len() as f64;
            let free = plan.free();
            if free.is_empty() || (goal - (sum + step)).abs() >= (goal - sum).abs() {
                continue;
            }
            let p = *free.choose(rng).expect("non-empty");
            pick(plan).insert(p);
            sum += step;
            added = true;
        }
        if !added {
            break;
        }
    }
}

/// A corpus of 24 locations by 36 words in the ingestion format.
///
/// Retained triples are substitution-only, so a binary 3D alignment lines
/// every column up and recovers the injected proportions.
pub fn synthetic_corpus(cfg: &SynthConfig, table: &SegmentTable) -> SynthCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let groups = GroupMap::northern_netherlands();
    let standard: Vec<Vec<Segment>> = WORDS.iter().map(|(_, ipa)| table.tokenize(ipa).expect("standard forms tokenize")).collect();

    let mut cells: Vec<(String, usize)> = Vec::new();
    for (loc, _) in groups.locations() {
        for w in 0..WORDS.len() {
            cells.push((loc.to_string(), w));
        }
    }
    let n_excluded = (cfg.exclusion_rate * cells.len() as f64).round() as usize;
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.shuffle(&mut rng);
    let excluded: BTreeSet<usize> = order[..n_excluded].iter().copied().collect();

    let mut records: Vec<CorpusRecord> = WORDS
        .iter()
        .map(|(word, ipa)| CorpusRecord::new("*", word, Source::Standard, ipa))
        .collect();
    let mut plans: Vec<Plan> = Vec::new();
    for (i, (loc, w)) in cells.iter().enumerate() {
        let (word, ipa) = WORDS[*w];
        if excluded.contains(&i) {
            let reason = match rng.random_range(0..20) {
                0..=5 => Exclusion::LexicalMismatch,
                6..=11 => Exclusion::MorphologicalVariant,
                12..=16 => Exclusion::PhoneticReduction,
                _ => Exclusion::MissingData,
            };
            records.extend(excluded_pair(loc, word, ipa, &standard[*w], reason));
            continue;
        }
        let segs = &standard[*w];
        let stable = (0..segs.len()).filter(|_| rng.random_bool(cfg.stable_rate)).collect();
        plans.push(Plan {
            location: loc.clone(),
            word,
            standard: segs.clone(),
            is_ls: groups.is_ls(loc) == Some(true),
            stable,
            conv: BTreeSet::new(),
            div: BTreeSet::new(),
        });
    }

    let n = plans.len() as f64;
    let n_ls = plans.iter().filter(|p| p.is_ls).count() as f64;
    let (ls_share, other_share) = (n_ls / n, (n - n_ls) / n);
    let conv_targets = (cfg.conv_rate + cfg.ls_conv_shift * other_share, cfg.conv_rate - cfg.ls_conv_shift * ls_share);
    let div_targets = (cfg.div_rate + cfg.ls_div_shift * other_share, cfg.div_rate - cfg.ls_div_shift * ls_share);
    for (ls, conv_target, div_target) in [(true, conv_targets.0, div_targets.0), (false, conv_targets.1, div_targets.1)] {
        let mut side: Vec<&mut Plan> = plans.iter_mut().filter(|p| p.is_ls == ls).collect();
        allocate(&mut side, conv_target, |p| &mut p.conv, &mut rng);
        allocate(&mut side, div_target, |p| &mut p.div, &mut rng);
    }

    let mut injected = Vec::new();
    for plan in &plans {
        let len = plan.standard.len() as f64;
        records.push(CorpusRecord::new(&plan.location, plan.word, Source::Older, &plan.render(Source::Older)));
        records.push(CorpusRecord::new(&plan.location, plan.word, Source::Newer, &plan.render(Source::Newer)));
        injected.push(InjectedChange {
            location: plan.location.clone(),
            word: plan.word.to_string(),
            conv: plan.conv.len() as f64 / len,
            div: plan.div.len() as f64 / len,
        });
    }
    let key = |r: &CorpusRecord| (r.source != Source::Standard, r.location.clone(), r.word.clone(), r.source != Source::Older);
    records.sort_by_key(key);
    SynthCorpus { records, injected }
}

fn excluded_pair(loc: &str, word: &str, ipa: &str, segs: &[Segment], reason: Exclusion) -> Vec<CorpusRecord> {
    let older = CorpusRecord::new(loc, word, Source::Older, ipa);
    let newer = match reason {
        Exclusion::LexicalMismatch => {
            let other = if word == "steen" { "kei" } else { "other" };
            let raw = if word == "steen" { "kɛi" } else { "dik" };
            CorpusRecord::new(loc, word, Source::Newer, raw).with_cognate(other)
        }
        Exclusion::MorphologicalVariant => {
            CorpusRecord::new(loc, word, Source::Newer, &format!("{ipa}jə")).excluded(reason)
        }
        Exclusion::PhoneticReduction => {
            let reduced: String = segs.iter().skip(1).map(Segment::symbol).collect();
            let raw = if reduced.is_empty() { ipa.to_string() } else { reduced };
            CorpusRecord::new(loc, word, Source::Newer, &raw).excluded(reason)
        }
        Exclusion::MissingData => {
            return vec![CorpusRecord::new(loc, word, Source::Older, "-").excluded(reason)];
        }
    };
    vec![older, newer]
}

/// Older, newer and standard transcriptions of one synthetic item.
pub type Triple = (Transcription, Transcription, Transcription);

fn edit(rng: &mut ChaCha8Rng, segs: &[Segment], sub: f64, del: f64) -> Vec<String> {
    let mut out = Vec::new();
    for s in segs {
        if rng.random_bool(del) {
            continue;
        }
        out.push(if rng.random_bool(sub) { vary(s) } else { s.symbol().to_string() });
    }
    out
}

/// Triples mixing substitutions, deletions and schwa epenthesis, with the
/// newer form partly reverting to the standard and partly drifting away.
pub fn mixed_triples(n: usize, seed: u64, table: &SegmentTable) -> Vec<Triple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (word, ipa) = WORDS[rng.random_range(0..WORDS.len())];
        let location = format!("S{:03}", i / WORDS.len());
        let standard = table.tokenize(ipa).expect("standard forms tokenize");
        let mut older = edit(&mut rng, &standard, 0.25, 0.05);
        if rng.random_bool(0.2) {
            older.push("ə".into());
        }
        let older_segs = table.tokenize(&older.concat()).expect("variants tokenize");
        let mut newer: Vec<String> = Vec::new();
        for s in &older_segs {
            let back_to_standard = standard.iter().find(|t| vary(t) == s.symbol());
            match back_to_standard {
                Some(t) if rng.random_bool(0.35) => newer.push(t.symbol().to_string()),
                _ if rng.random_bool(0.04) => {}
                _ if rng.random_bool(0.08) && !VARIANTS.iter().any(|(_, v)| *v == s.base()) => newer.push(vary(s)),
                _ => newer.push(s.symbol().to_string()),
            }
        }
        if newer.last().is_some_and(|s| s == "ə") && !ipa.ends_with('ə') && rng.random_bool(0.4) {
            newer.pop();
        }
        if newer.is_empty() {
            newer = older.clone();
        }
        let make = |raw: &str, src| table.transcribe(raw, &location, word, src).expect("synthetic forms tokenize");
        out.push((make(&older.concat(), Source::Older), make(&newer.concat(), Source::Newer), make(ipa, Source::Standard)));
    }
    out
}

/// Word pairs where [i] meets [ɪ] `shift` times as often as [u], with
/// [u] and [ɪ] also common in identity columns.
pub fn vowel_shift_pairs(shift: usize, table: &SegmentTable) -> Vec<(Transcription, Transcription)> {
    let t = |raw: &str, word: &str, src| table.transcribe(raw, "V", word, src).expect("fixed forms tokenize");
    let mut out = Vec::new();
    let mut push = |a: &str, b: &str, n: usize| {
        for _ in 0..n {
            out.push((t(a, a, Source::Older), t(b, a, Source::Newer)));
        }
    };
    push("bit", "bɪt", shift);
    push("lip", "lup", 1);
    push("but", "but", shift);
    push("mus", "mus", shift);
    push("pɪk", "pɪk", shift);
    push("kin", "kin", shift);
    push("tas", "tɑs", shift / 2);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordSim {
    pub n_locations: usize,
    pub n_ls: usize,
    pub words: usize,
    pub conv: f64,
    pub div: f64,
    pub ls_conv_shift: f64,
    pub ls_div_shift: f64,
    /// Standard deviation of the per-location offset.
    pub location_sd: f64,
    /// Standard deviation of the per-record noise.
    pub noise_sd: f64,
}

impl RecordSim {
    /// No group difference.
    pub fn null(n_locations: usize, words: usize) -> Self {
        Self {
            n_locations,
            n_ls: n_locations / 2,
            words,
            conv: 0.02,
            div: 0.014,
            ls_conv_shift: 0.0,
            ls_div_shift: 0.0,
            location_sd: 0.004,
            noise_sd: 0.03,
        }
    }

    pub fn ls_shifted(n_locations: usize, words: usize, conv_shift: f64) -> Self {
        Self { ls_conv_shift: conv_shift, ..Self::null(n_locations, words) }
    }
}

/// Change records for `L01..` with a matching group map; the first
/// `n_ls` locations are LS. Values are clamped to [0, 1].
pub fn simulate_records(sim: &RecordSim, seed: u64) -> (Vec<ChangeRecord>, GroupMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let loc_effect = Normal::new(0.0, sim.location_sd).expect("finite sd");
    let noise = Normal::new(0.0, sim.noise_sd).expect("finite sd");
    let others = [DialectGroup::FR, DialectGroup::DUFR, DialectGroup::GR];
    let mut records = Vec::new();
    let mut groups = Vec::new();
    for l in 0..sim.n_locations {
        let location = format!("L{:02}", l + 1);
        let ls = l < sim.n_ls;
        groups.push((location.clone(), if ls { DialectGroup::LS } else { others[l % 3] }));
        let shift = |s: f64| if ls { s } else { 0.0 };
        let conv_mean = sim.conv + shift(sim.ls_conv_shift) + loc_effect.sample(&mut rng);
        let div_mean = sim.div + shift(sim.ls_div_shift) + loc_effect.sample(&mut rng);
        for w in 0..sim.words {
            records.push(ChangeRecord {
                location: location.clone(),
                word: format!("w{w:02}"),
                conv: (conv_mean + noise.sample(&mut rng)).clamp(0.0, 1.0),
                div: (div_mean + noise.sample(&mut rng)).clamp(0.0, 1.0),
                alignment_length: 5,
            });
        }
    }
    (records, GroupMap::new(groups))
}
