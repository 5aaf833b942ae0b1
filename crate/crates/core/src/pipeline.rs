//! The `pmi`, `align` and `report` commands: configuration, file I/O and
//! run manifests.
//!
//! Settings come from an optional TOML file overlaid with explicit
//! overrides (the CLI flags). Nothing is read from the environment.
//! Outputs are written in a fixed order with no timestamps, so identical
//! configuration and inputs give byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::align2::AlignError;
use crate::align3::{align3, Alignment3, ChangeRecord};
use crate::analysis::{self, AnalysisError, ContrastResult, Measure};
use crate::corpus::{self, CorpusError, GroupMap, IngestOptions, PairedTriple, Pairing};
use crate::cost::{ConstraintPolicy, CostModel};
use crate::phonetics::{PhoneticsError, SegmentTable};
use crate::pmi::{induce, AlignmentCorpus, PmiError, PmiOptions, PmiTable};

pub const DEFAULT_PERMUTATIONS: usize = 9999;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("empty corpus: {0} has no records")]
    EmptyCorpus(String),
    #[error("{path}: {source}")]
    Corpus { path: String, source: CorpusError },
    #[error("segment table: {0}")]
    Phonetics(#[from] PhoneticsError),
    #[error("PMI: {0}")]
    Pmi(#[from] PmiError),
    #[error("alignment of ({location}, {word}): {source}")]
    Align { location: String, word: String, source: AlignError },
    #[error("{path}: {source}")]
    Analysis { path: String, source: AnalysisError },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl PipelineError {
    /// 2 for configuration problems, 1 for everything about the data.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Io { path: path.display().to_string(), message: e.to_string() }
}

/// How operation costs are obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CostMode {
    Binary,
    /// Induce a PMI table from the corpus.
    Pmi,
    /// Read a previously induced table.
    Load(PathBuf),
}

impl std::str::FromStr for CostMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "binary" => Ok(CostMode::Binary),
            "pmi" => Ok(CostMode::Pmi),
            other => match other.strip_prefix("load:") {
                Some(path) if !path.is_empty() => Ok(CostMode::Load(PathBuf::from(path))),
                _ => Err(format!("cost mode must be binary, pmi or load:<path>, got {other:?}")),
            },
        }
    }
}

impl std::fmt::Display for CostMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CostMode::Binary => f.write_str("binary"),
            CostMode::Pmi => f.write_str("pmi"),
            CostMode::Load(p) => write!(f, "load:{}", p.display()),
        }
    }
}

/// PMI settings given explicitly; unset fields take the defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmiSettings {
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub smoothing: Option<f64>,
}

impl PmiSettings {
    fn is_empty(&self) -> bool {
        self.max_iter.is_none() && self.tol.is_none() && self.smoothing.is_none()
    }

    fn overlay(self, top: PmiSettings) -> Self {
        Self {
            max_iter: top.max_iter.or(self.max_iter),
            tol: top.tol.or(self.tol),
            smoothing: top.smoothing.or(self.smoothing),
        }
    }

    pub fn options(&self) -> PmiOptions {
        let d = PmiOptions::default();
        PmiOptions {
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            tol: self.tol.unwrap_or(d.tol),
            smoothing: self.smoothing.unwrap_or(d.smoothing),
            ..d
        }
    }
}

/// Every setting, optional. Used both for the TOML file and for flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub corpus: Option<PathBuf>,
    pub segment_table: Option<PathBuf>,
    pub groups: Option<PathBuf>,
    pub coords: Option<PathBuf>,
    /// Change records read by `report`; defaults to `<output>/changes.csv`.
    pub changes: Option<PathBuf>,
    pub cost: Option<String>,
    #[serde(default)]
    pub pmi: PmiSettings,
    pub seed: Option<u64>,
    pub permutations: Option<usize>,
    pub output: Option<PathBuf>,
    pub keep_first_duplicate: Option<bool>,
    /// Allow vowel-consonant substitutions.
    pub no_constraint: Option<bool>,
}

impl ConfigOverrides {
    /// `self` with every field set in `top` replaced.
    pub fn overlay(self, top: ConfigOverrides) -> Self {
        Self {
            corpus: top.corpus.or(self.corpus),
            segment_table: top.segment_table.or(self.segment_table),
            groups: top.groups.or(self.groups),
            coords: top.coords.or(self.coords),
            changes: top.changes.or(self.changes),
            cost: top.cost.or(self.cost),
            pmi: self.pmi.overlay(top.pmi),
            seed: top.seed.or(self.seed),
            permutations: top.permutations.or(self.permutations),
            output: top.output.or(self.output),
            keep_first_duplicate: top.keep_first_duplicate.or(self.keep_first_duplicate),
            no_constraint: top.no_constraint.or(self.no_constraint),
        }
    }

    /// Reads a TOML config file. Relative paths in it are taken relative to
    /// the file's directory.
    pub fn from_file(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: ConfigOverrides =
            toml::from_str(&text).map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(q) = p.as_mut() {
                if q.is_relative() {
                    *q = base.join(&*q);
                }
            }
        };
        rebase(&mut cfg.corpus);
        rebase(&mut cfg.segment_table);
        rebase(&mut cfg.groups);
        rebase(&mut cfg.coords);
        rebase(&mut cfg.changes);
        rebase(&mut cfg.output);
        if let Some(cost) = cfg.cost.as_mut() {
            if let Some(p) = cost.strip_prefix("load:").filter(|p| Path::new(p).is_relative()) {
                *cost = format!("load:{}", base.join(p).display());
            }
        }
        Ok(cfg)
    }
}

/// Effective settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus_path: Option<PathBuf>,
    pub segment_table_path: Option<PathBuf>,
    pub group_map_path: Option<PathBuf>,
    pub coords_path: Option<PathBuf>,
    pub changes_path: Option<PathBuf>,
    pub pmi: PmiSettings,
    pub cost_mode: CostMode,
    pub seed: u64,
    pub n_permutations: usize,
    pub output_dir: PathBuf,
    pub keep_first_duplicate: bool,
    pub policy: ConstraintPolicy,
}

impl RunConfig {
    /// Config file (if any) overlaid with explicit overrides, validated.
    pub fn resolve(file: Option<&Path>, overrides: ConfigOverrides) -> Result<Self, PipelineError> {
        let base = match file {
            Some(p) => ConfigOverrides::from_file(p)?,
            None => ConfigOverrides::default(),
        };
        Self::from_overrides(base.overlay(overrides))
    }

    pub fn from_overrides(o: ConfigOverrides) -> Result<Self, PipelineError> {
        let cost_mode: CostMode = o.cost.as_deref().unwrap_or("pmi").parse().map_err(PipelineError::Config)?;
        if cost_mode != CostMode::Pmi && !o.pmi.is_empty() {
            return Err(PipelineError::Config(format!("PMI options are only valid with cost mode pmi, not {cost_mode}")));
        }
        if let CostMode::Load(path) = &cost_mode {
            if std::fs::File::open(path).is_err() {
                return Err(PipelineError::Config(format!("cannot read PMI table {}", path.display())));
            }
        }
        o.pmi.options().validate().map_err(|e| PipelineError::Config(e.to_string()))?;
        let n_permutations = o.permutations.unwrap_or(DEFAULT_PERMUTATIONS);
        if n_permutations < analysis::MIN_PERMUTATIONS {
            return Err(PipelineError::Config(format!(
                "--permutations must be at least {}, got {n_permutations}",
                analysis::MIN_PERMUTATIONS
            )));
        }
        Ok(Self {
            corpus_path: o.corpus,
            segment_table_path: o.segment_table,
            group_map_path: o.groups,
            coords_path: o.coords,
            changes_path: o.changes,
            pmi: o.pmi,
            cost_mode,
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            n_permutations,
            output_dir: o.output.unwrap_or_else(|| PathBuf::from("out")),
            keep_first_duplicate: o.keep_first_duplicate.unwrap_or(false),
            policy: if o.no_constraint.unwrap_or(false) { ConstraintPolicy::NONE } else { ConstraintPolicy::PHONETIC },
        })
    }

    /// Stable text rendering; its digest goes into the manifest.
    pub fn canonical(&self) -> String {
        let path = |p: &Option<PathBuf>| p.as_ref().map_or("-".to_string(), |p| p.display().to_string());
        let opts = self.pmi.options();
        let mut out = String::new();
        writeln!(out, "corpus = {}", path(&self.corpus_path)).unwrap();
        writeln!(out, "segment_table = {}", path(&self.segment_table_path)).unwrap();
        writeln!(out, "groups = {}", path(&self.group_map_path)).unwrap();
        writeln!(out, "coords = {}", path(&self.coords_path)).unwrap();
        writeln!(out, "changes = {}", self.changes_file().display()).unwrap();
        writeln!(out, "cost = {}", self.cost_mode).unwrap();
        if self.cost_mode == CostMode::Pmi {
            writeln!(out, "pmi.max_iter = {}", opts.max_iter).unwrap();
            writeln!(out, "pmi.tol = {:e}", opts.tol).unwrap();
            writeln!(out, "pmi.smoothing = {}", opts.smoothing).unwrap();
        }
        writeln!(out, "seed = {}", self.seed).unwrap();
        writeln!(out, "permutations = {}", self.n_permutations).unwrap();
        writeln!(out, "output = {}", self.output_dir.display()).unwrap();
        writeln!(out, "keep_first_duplicate = {}", self.keep_first_duplicate).unwrap();
        writeln!(out, "forbid_vowel_consonant = {}", self.policy.forbid_vowel_consonant).unwrap();
        out
    }

    fn changes_file(&self) -> PathBuf {
        self.changes_path.clone().unwrap_or_else(|| self.output_dir.join("changes.csv"))
    }

    fn require_corpus(&self) -> Result<&Path, PipelineError> {
        self.corpus_path
            .as_deref()
            .ok_or_else(|| PipelineError::Config("no corpus given; pass --corpus <file.tsv>".into()))
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Accumulates output files, then writes them with a manifest.
struct Outputs<'a> {
    config: &'a RunConfig,
    command: &'static str,
    inputs: Vec<(&'static str, PathBuf, String)>,
    files: Vec<(&'static str, String)>,
}

impl<'a> Outputs<'a> {
    fn new(config: &'a RunConfig, command: &'static str) -> Self {
        Self { config, command, inputs: Vec::new(), files: Vec::new() }
    }

    fn input(&mut self, role: &'static str, path: &Path) -> Result<Vec<u8>, PipelineError> {
        let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
        self.inputs.push((role, path.to_path_buf(), sha256_hex(&bytes)));
        Ok(bytes)
    }

    fn add(&mut self, name: &'static str, contents: String) {
        self.files.push((name, contents));
    }

    fn write(self) -> Result<Vec<PathBuf>, PipelineError> {
        let dir = &self.config.output_dir;
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let mut manifest = format!("command\t{}\n", self.command);
        writeln!(manifest, "config_sha256\t{}", sha256_hex(self.config.canonical().as_bytes())).unwrap();
        for (role, path, digest) in &self.inputs {
            writeln!(manifest, "input\t{role}\t{}\t{digest}", path.display()).unwrap();
        }
        let mut written = Vec::new();
        for (name, contents) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
            writeln!(manifest, "output\t{name}\t{}", sha256_hex(contents.as_bytes())).unwrap();
            written.push(path);
        }
        manifest.push_str("--- config\n");
        manifest.push_str(&self.config.canonical());
        let path = dir.join(format!("manifest_{}.txt", self.command));
        std::fs::write(&path, manifest).map_err(|e| io_err(&path, e))?;
        written.push(path);
        Ok(written)
    }
}

fn load_table(config: &RunConfig, out: &mut Outputs) -> Result<SegmentTable, PipelineError> {
    match &config.segment_table_path {
        None => Ok(SegmentTable::builtin()),
        Some(path) => {
            out.input("segment_table", path)?;
            Ok(SegmentTable::builtin_with(path)?)
        }
    }
}

fn load_pairing(config: &RunConfig, out: &mut Outputs) -> Result<(SegmentTable, Pairing), PipelineError> {
    let table = load_table(config, out)?;
    let path = config.require_corpus()?;
    let bytes = out.input("corpus", path)?;
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(PipelineError::EmptyCorpus(path.display().to_string()));
    }
    let corpus_err = |source| PipelineError::Corpus { path: path.display().to_string(), source };
    let ingested = corpus::parse_records(
        bytes.as_slice(),
        IngestOptions { keep_first_duplicate: config.keep_first_duplicate },
    )
    .map_err(corpus_err)?;
    if ingested.records.is_empty() {
        return Err(PipelineError::EmptyCorpus(path.display().to_string()));
    }
    let pairing = corpus::pair(&ingested.records, &table).map_err(corpus_err)?;
    log::info!("{} triples retained, {} pairs excluded", pairing.triples.len(), pairing.excluded.len());
    Ok((table, pairing))
}

/// Older-standard and newer-standard pairs, pooled.
pub fn induction_pairs(triples: &[PairedTriple]) -> Result<AlignmentCorpus, PmiError> {
    let mut pairs = Vec::with_capacity(2 * triples.len());
    for t in triples {
        pairs.push((t.older.clone(), t.standard.clone()));
        pairs.push((t.newer.clone(), t.standard.clone()));
    }
    AlignmentCorpus::new(pairs)
}

fn induce_table(config: &RunConfig, triples: &[PairedTriple]) -> Result<PmiTable, PipelineError> {
    let corpus = induction_pairs(triples)?;
    Ok(induce(&corpus, &CostModel::binary(config.policy), &config.pmi.options())?)
}

/// `pmi`: induces a distance table; writes `pmi.tsv` and `pmi_log.txt`.
pub fn cmd_pmi(config: &RunConfig) -> Result<PmiTable, PipelineError> {
    if config.cost_mode != CostMode::Pmi {
        return Err(PipelineError::Config(format!("the pmi command needs cost mode pmi, not {}", config.cost_mode)));
    }
    let mut out = Outputs::new(config, "pmi");
    let (_, pairing) = load_pairing(config, &mut out)?;
    let table = induce_table(config, &pairing.triples)?;
    out.add("pmi.tsv", table.to_tsv());
    out.add("pmi_log.txt", table.convergence_log());
    out.write()?;
    Ok(table)
}

/// Result of `align`, also written to disk.
#[derive(Debug, Clone)]
pub struct AlignRun {
    pub records: Vec<ChangeRecord>,
    pub alignments: Vec<Alignment3>,
    pub pairing: Pairing,
    pub table: Option<PmiTable>,
}

fn alignment_dump(triples: &[PairedTriple], alignments: &[Alignment3]) -> String {
    let mut out = String::new();
    for (t, al) in triples.iter().zip(alignments) {
        writeln!(
            out,
            "# {} {}\tcost={}\tconv={:.6}\tdiv={:.6}",
            t.location,
            t.word,
            crate::align2::format_cost(al.total_cost),
            al.conv,
            al.div
        )
        .unwrap();
        write!(out, "{al}").unwrap();
        out.push('\n');
    }
    out
}

/// `align`: 3D alignment of every retained triple. Writes `changes.csv`,
/// `alignments.txt`, `retention.csv` and, in pmi mode, the induced table.
pub fn cmd_align(config: &RunConfig) -> Result<AlignRun, PipelineError> {
    let mut out = Outputs::new(config, "align");
    let (_, pairing) = load_pairing(config, &mut out)?;
    let (cm, table) = match &config.cost_mode {
        CostMode::Binary => (CostModel::binary(config.policy), None),
        CostMode::Pmi => {
            let table = induce_table(config, &pairing.triples)?;
            out.add("pmi.tsv", table.to_tsv());
            out.add("pmi_log.txt", table.convergence_log());
            (CostModel::learned(Arc::new(table.clone()), config.policy), Some(table))
        }
        CostMode::Load(path) => {
            out.input("pmi_table", path)?;
            let table = PmiTable::load(path)?;
            (CostModel::learned(Arc::new(table.clone()), config.policy), Some(table))
        }
    };
    let alignments: Vec<Alignment3> = pairing
        .triples
        .par_iter()
        .map(|t| {
            align3(&t.older, &t.newer, &t.standard, &cm).map_err(|source| PipelineError::Align {
                location: t.location.clone(),
                word: t.word.clone(),
                source,
            })
        })
        .collect::<Result<_, _>>()?;
    let records: Vec<ChangeRecord> = pairing
        .triples
        .iter()
        .zip(&alignments)
        .map(|(t, al)| ChangeRecord::from_alignment(&t.location, &t.word, al))
        .collect();
    out.add("changes.csv", analysis::changes_csv(&records));
    out.add("alignments.txt", alignment_dump(&pairing.triples, &alignments));
    out.add("retention.csv", corpus::retention_report(&pairing).to_csv());
    out.write()?;
    Ok(AlignRun { records, alignments, pairing, table })
}

#[derive(Debug, Clone)]
pub struct ReportRun {
    pub summaries: Vec<analysis::GroupSummary>,
    pub contrasts: Vec<ContrastResult>,
    pub report: String,
}

/// `report`: group summaries and LS contrasts from `changes.csv`; writes
/// `group_summary.csv`, `contrasts.csv`, `report.txt` and, with
/// coordinates, `geo.csv`.
pub fn cmd_report(config: &RunConfig) -> Result<ReportRun, PipelineError> {
    let group_path = config.group_map_path.as_deref().ok_or_else(|| {
        PipelineError::Config("no dialect group map; pass --groups <file.tsv> (location<TAB>FR|DUFR|GR|LS)".into())
    })?;
    let mut out = Outputs::new(config, "report");
    let group_bytes = out.input("groups", group_path)?;
    let groups = GroupMap::parse(group_bytes.as_slice())
        .map_err(|source| PipelineError::Corpus { path: group_path.display().to_string(), source })?;
    let changes = config.changes_file();
    out.input("changes", &changes)?;
    let analysis_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| PipelineError::Analysis { path, source }
    };
    let records = analysis::read_changes(&changes).map_err(analysis_err(&changes))?;

    let summaries = analysis::summarize(&records, &groups).map_err(analysis_err(&changes))?;
    let contrasts = [Measure::Conv, Measure::Div]
        .into_iter()
        .map(|m| analysis::permutation_contrast(&records, &groups, m, config.n_permutations, config.seed))
        .collect::<Result<Vec<_>, _>>()
        .map_err(analysis_err(&changes))?;
    let report = analysis::render_report(&summaries, &contrasts);
    out.add("group_summary.csv", analysis::summaries_csv(&summaries));
    out.add("contrasts.csv", analysis::contrasts_csv(&contrasts));
    out.add("report.txt", report.clone());
    if let Some(coords_path) = &config.coords_path {
        let bytes = out.input("coords", coords_path)?;
        let coords = analysis::parse_coordinates(bytes.as_slice()).map_err(analysis_err(coords_path))?;
        out.add("geo.csv", analysis::export_geo(&records, &coords).map_err(analysis_err(coords_path))?);
    }
    out.write()?;
    Ok(ReportRun { summaries, contrasts, report })
}
