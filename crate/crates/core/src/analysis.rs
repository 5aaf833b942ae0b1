//! Group summaries, the LS vs non-LS permutation contrast and per-location
//! export.
//!
//! The contrast shuffles group labels across locations, never across
//! individual records, so words stay nested in their location.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::align3::ChangeRecord;
use crate::corpus::{csv_field, DialectGroup, GroupMap};

pub const MIN_PERMUTATIONS: usize = 999;
pub const CHANGES_HEADER: &str = "location,word,conv,div,alignment_length";
const EXTREME_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("location {0:?} has no dialect group")]
    UnmappedLocation(String),
    #[error("contrast needs at least 2 locations per side, got {ls} LS and {other} other")]
    DegenerateContrast { ls: usize, other: usize },
    #[error("at least {MIN_PERMUTATIONS} permutations required, got {0}")]
    TooFewPermutations(usize),
    #[error("no coordinates for location {0:?}")]
    MissingCoordinates(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> AnalysisError {
    AnalysisError::Io { path: path.display().to_string(), message: e.to_string() }
}

/// Means over the records of one group, or over all records when `group`
/// is `None`. Means are absent for an empty group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub group: Option<DialectGroup>,
    pub mean_conv: Option<f64>,
    pub mean_div: Option<f64>,
    pub n_records: usize,
    pub locations: Vec<String>,
}

impl GroupSummary {
    pub fn label(&self) -> &'static str {
        self.group.map_or("ALL", DialectGroup::as_str)
    }

    pub fn mean_change(&self) -> Option<f64> {
        Some(self.mean_conv? + self.mean_div?)
    }

    fn build(group: Option<DialectGroup>, records: &[&ChangeRecord]) -> Self {
        let n = records.len();
        let mean = |f: fn(&ChangeRecord) -> f64| {
            (n > 0).then(|| records.iter().map(|r| f(r)).sum::<f64>() / n as f64)
        };
        let mut locations: Vec<String> = records.iter().map(|r| r.location.clone()).collect();
        locations.sort();
        locations.dedup();
        Self { group, mean_conv: mean(|r| r.conv), mean_div: mean(|r| r.div), n_records: n, locations }
    }
}

fn check_mapped(records: &[ChangeRecord], groups: &GroupMap) -> Result<(), AnalysisError> {
    match records.iter().find(|r| groups.get(&r.location).is_none()) {
        Some(r) => Err(AnalysisError::UnmappedLocation(r.location.clone())),
        None => Ok(()),
    }
}

/// One summary per dialect group (FR, DUFR, GR, LS), then the overall one.
pub fn summarize(records: &[ChangeRecord], groups: &GroupMap) -> Result<Vec<GroupSummary>, AnalysisError> {
    check_mapped(records, groups)?;
    let mut out: Vec<GroupSummary> = DialectGroup::ALL
        .iter()
        .map(|&g| {
            let members: Vec<&ChangeRecord> = records.iter().filter(|r| groups.get(&r.location) == Some(g)).collect();
            GroupSummary::build(Some(g), &members)
        })
        .collect();
    out.push(GroupSummary::build(None, &records.iter().collect::<Vec<_>>()));
    Ok(out)
}

fn opt6(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

pub fn summaries_csv(summaries: &[GroupSummary]) -> String {
    let mut out = String::from("group,n_locations,n_records,mean_conv,mean_div,mean_change\n");
    for s in summaries {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            s.label(),
            s.locations.len(),
            s.n_records,
            opt6(s.mean_conv),
            opt6(s.mean_div),
            opt6(s.mean_change())
        )
        .expect("write to string");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Conv,
    Div,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Conv => "conv",
            Measure::Div => "div",
        }
    }

    fn of(self, r: &ChangeRecord) -> f64 {
        match self {
            Measure::Conv => r.conv,
            Measure::Div => r.div,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContrastDirection {
    ConvHigherInLs,
    ConvLowerInLs,
    DivHigherInLs,
    DivLowerInLs,
    NoDifference,
}

impl ContrastDirection {
    fn of(measure: Measure, statistic: f64) -> Self {
        match (measure, statistic.partial_cmp(&0.0)) {
            (Measure::Conv, Some(std::cmp::Ordering::Greater)) => Self::ConvHigherInLs,
            (Measure::Conv, Some(std::cmp::Ordering::Less)) => Self::ConvLowerInLs,
            (Measure::Div, Some(std::cmp::Ordering::Greater)) => Self::DivHigherInLs,
            (Measure::Div, Some(std::cmp::Ordering::Less)) => Self::DivLowerInLs,
            _ => Self::NoDifference,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ConvHigherInLs => "ConvHigherInLS",
            Self::ConvLowerInLs => "ConvLowerInLS",
            Self::DivHigherInLs => "DivHigherInLS",
            Self::DivLowerInLs => "DivLowerInLS",
            Self::NoDifference => "NoDifference",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContrastResult {
    pub measure: Measure,
    /// Mean over LS records minus mean over all other records.
    pub statistic: f64,
    pub p_value: f64,
    pub n_permutations: usize,
    pub direction: ContrastDirection,
    pub n_ls_locations: usize,
    pub n_other_locations: usize,
}

/// Per-location sums, the unit that gets relabelled.
struct LocationTotals {
    sums: Vec<f64>,
    counts: Vec<usize>,
}

impl LocationTotals {
    fn statistic(&self, is_ls: &[bool]) -> f64 {
        let (mut s1, mut n1, mut s0, mut n0) = (0.0, 0usize, 0.0, 0usize);
        for ((s, n), &ls) in self.sums.iter().zip(&self.counts).zip(is_ls) {
            if ls {
                s1 += s;
                n1 += n;
            } else {
                s0 += s;
                n0 += n;
            }
        }
        s1 / n1 as f64 - s0 / n0 as f64
    }
}

fn location_totals(records: &[ChangeRecord], groups: &GroupMap, measure: Measure) -> (LocationTotals, Vec<bool>) {
    let mut by_loc: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for r in records {
        let e = by_loc.entry(&r.location).or_insert((0.0, 0));
        e.0 += measure.of(r);
        e.1 += 1;
    }
    let labels = by_loc.keys().map(|l| groups.is_ls(l).unwrap_or(false)).collect();
    let (sums, counts) = by_loc.into_values().unzip();
    (LocationTotals { sums, counts }, labels)
}

/// Observed LS minus non-LS difference in record means.
pub fn contrast_statistic(records: &[ChangeRecord], groups: &GroupMap, measure: Measure) -> Result<f64, AnalysisError> {
    check_mapped(records, groups)?;
    let (totals, labels) = location_totals(records, groups, measure);
    check_sides(&labels)?;
    Ok(totals.statistic(&labels))
}

fn check_sides(labels: &[bool]) -> Result<(), AnalysisError> {
    let ls = labels.iter().filter(|&&l| l).count();
    let other = labels.len() - ls;
    if ls < 2 || other < 2 {
        return Err(AnalysisError::DegenerateContrast { ls, other });
    }
    Ok(())
}

/// Two-sided location-level permutation test of the LS contrast.
///
/// The p-value counts permuted statistics at least as extreme as the
/// observed one, with the observed labelling added to both numerator and
/// denominator. The same seed always gives the same result.
pub fn permutation_contrast(
    records: &[ChangeRecord],
    groups: &GroupMap,
    measure: Measure,
    n_perm: usize,
    seed: u64,
) -> Result<ContrastResult, AnalysisError> {
    if n_perm < MIN_PERMUTATIONS {
        return Err(AnalysisError::TooFewPermutations(n_perm));
    }
    check_mapped(records, groups)?;
    let (totals, labels) = location_totals(records, groups, measure);
    check_sides(&labels)?;
    let observed = totals.statistic(&labels);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = labels.clone();
    let mut extreme = 0usize;
    for _ in 0..n_perm {
        shuffled.shuffle(&mut rng);
        if totals.statistic(&shuffled).abs() >= observed.abs() - EXTREME_EPS {
            extreme += 1;
        }
    }
    let n_ls = labels.iter().filter(|&&l| l).count();
    Ok(ContrastResult {
        measure,
        statistic: observed,
        p_value: (extreme + 1) as f64 / (n_perm + 1) as f64,
        n_permutations: n_perm,
        direction: ContrastDirection::of(measure, observed),
        n_ls_locations: n_ls,
        n_other_locations: labels.len() - n_ls,
    })
}

pub fn contrasts_csv(results: &[ContrastResult]) -> String {
    let mut out = String::from("measure,statistic,p_value,n_permutations,direction,n_ls_locations,n_other_locations\n");
    for c in results {
        writeln!(
            out,
            "{},{:.6},{:.6},{},{},{},{}",
            c.measure.as_str(),
            c.statistic,
            c.p_value,
            c.n_permutations,
            c.direction.as_str(),
            c.n_ls_locations,
            c.n_other_locations
        )
        .expect("write to string");
    }
    out
}

/// Plain-text report of summaries and contrasts.
pub fn render_report(summaries: &[GroupSummary], contrasts: &[ContrastResult]) -> String {
    let pct = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{:.2}%", 100.0 * x));
    let mut out = String::from("Convergence and divergence by dialect group\n\n");
    writeln!(out, "{:<6} {:>9} {:>8} {:>9} {:>9} {:>9}", "group", "locations", "records", "conv", "div", "change").unwrap();
    for s in summaries {
        writeln!(
            out,
            "{:<6} {:>9} {:>8} {:>9} {:>9} {:>9}",
            s.label(),
            s.locations.len(),
            s.n_records,
            pct(s.mean_conv),
            pct(s.mean_div),
            pct(s.mean_change())
        )
        .unwrap();
    }
    if !contrasts.is_empty() {
        out.push_str("\nLS vs other groups (location-level permutation test)\n\n");
        for c in contrasts {
            writeln!(
                out,
                "{:<4} difference {:+.4}  p = {:.4}  ({} permutations, {} LS / {} other locations)  {}",
                c.measure.as_str(),
                c.statistic,
                c.p_value,
                c.n_permutations,
                c.n_ls_locations,
                c.n_other_locations,
                c.direction.as_str()
            )
            .unwrap();
        }
        out.push_str("\nDifferences are in record means and are directional only; they are not model coefficients.\n");
    }
    out
}

/// Location to (longitude, latitude).
pub type Coordinates = BTreeMap<String, (f64, f64)>;

/// `location<TAB>lon<TAB>lat` lines; `#` comments and a header starting
/// with `location` are skipped.
pub fn parse_coordinates<R: BufRead>(reader: R) -> Result<Coordinates, AnalysisError> {
    let mut out = Coordinates::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let parse = |reason: String| AnalysisError::Parse { line: line_no, reason };
        let line = line.map_err(|e| parse(e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') || line.starts_with("location\t") {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [loc, lon, lat] = fields[..] else {
            return Err(parse("expected location<TAB>lon<TAB>lat".into()));
        };
        let num = |s: &str| s.parse::<f64>().map_err(|e| parse(format!("{s:?}: {e}")));
        out.insert(loc.to_string(), (num(lon)?, num(lat)?));
    }
    Ok(out)
}

pub fn load_coordinates(path: &Path) -> Result<Coordinates, AnalysisError> {
    let file = std::fs::File::open(path).map_err(|e| io_error(path, e))?;
    parse_coordinates(std::io::BufReader::new(file))
}

/// Per-location means with coordinates, for external smoothing or maps.
pub fn export_geo(records: &[ChangeRecord], coords: &Coordinates) -> Result<String, AnalysisError> {
    let mut by_loc: BTreeMap<&str, (f64, f64, usize)> = BTreeMap::new();
    for r in records {
        let e = by_loc.entry(&r.location).or_insert((0.0, 0.0, 0));
        e.0 += r.conv;
        e.1 += r.div;
        e.2 += 1;
    }
    let mut out = String::from("location,lon,lat,mean_conv,mean_div\n");
    for (loc, (conv, div, n)) in by_loc {
        let (lon, lat) = coords.get(loc).ok_or_else(|| AnalysisError::MissingCoordinates(loc.to_string()))?;
        let n = n as f64;
        writeln!(out, "{},{lon},{lat},{:.6},{:.6}", csv_field(loc), conv / n, div / n).unwrap();
    }
    Ok(out)
}

pub fn changes_csv(records: &[ChangeRecord]) -> String {
    let mut out = format!("{CHANGES_HEADER}\n");
    for r in records {
        writeln!(
            out,
            "{},{},{:.6},{:.6},{}",
            csv_field(&r.location),
            csv_field(&r.word),
            r.conv,
            r.div,
            r.alignment_length
        )
        .unwrap();
    }
    out
}

pub fn read_changes(path: &Path) -> Result<Vec<ChangeRecord>, AnalysisError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| io_error(path, e))?;
    let headers = reader.headers().map_err(|e| io_error(path, e))?.clone();
    if headers.iter().collect::<Vec<_>>().join(",") != CHANGES_HEADER {
        return Err(AnalysisError::Parse { line: 1, reason: format!("expected header {CHANGES_HEADER:?}") });
    }
    let mut out = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let line = idx + 2;
        let parse = |reason: String| AnalysisError::Parse { line, reason };
        let row = row.map_err(|e| parse(e.to_string()))?;
        let num = |i: usize| row[i].parse::<f64>().map_err(|e| parse(format!("{:?}: {e}", &row[i])));
        out.push(ChangeRecord {
            location: row[0].to_string(),
            word: row[1].to_string(),
            conv: num(2)?,
            div: num(3)?,
            alignment_length: row[4].parse().map_err(|e| parse(format!("{:?}: {e}", &row[4])))?,
        });
    }
    Ok(out)
}
