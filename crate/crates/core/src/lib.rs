//! Measuring real-time dialect change against a standard variety.
//!
//! The building blocks, bottom up:
//!
//! - [`phonetics`]: IPA tokenization into classified segments.
//! - [`cost`]: binary or learned operation costs with the vowel–consonant
//!   constraint (schwa may still pair with sonorants).
//! - [`align2`]: pairwise weighted Levenshtein, normalized by the longest
//!   optimal alignment.
//! - [`pmi`]: iterative PMI induction of segment distances from a corpus.
//! - [`align3`]: older/newer/standard alignment with per-column direction
//!   of change, split into convergence and divergence proportions.
//! - [`corpus`]: TSV ingestion, triple pairing and exclusion accounting.
//! - [`analysis`]: group summaries, location-level permutation contrasts
//!   and per-location export.
//! - [`pipeline`]: the `pmi` / `align` / `report` commands behind the CLI.
//! - [`synth`]: seeded synthetic corpora and change records.

pub mod align2;
pub mod align3;
pub mod analysis;
pub mod corpus;
pub mod cost;
pub mod phonetics;
pub mod pipeline;
pub mod pmi;
pub mod synth;

pub use align2::{align2, align_segments, enumerate_optimal, normalize, AlignError, Alignment2, Column2, EditOp};
pub use align3::{
    align3, align3_segments, decompose, direction, double_2d_delta, Alignment3, ChangeKind, ChangeRecord, Column3, Op3,
};
pub use cost::{ConstraintPolicy, CostModel, PairDistance, FORBIDDEN};
pub use phonetics::{Segment, SegmentClass, SegmentTable, Source, Transcription, GAP, SONORANTS};
pub use pmi::{induce, AlignmentCorpus, CoocCounts, PmiOptions, PmiTable};
