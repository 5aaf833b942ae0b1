//! Pairwise weighted Levenshtein alignment.
//!
//! The DP minimizes total cost and, among minimal-cost alignments, maximizes
//! the number of columns, so that [`normalize`] divides by the length of the
//! longest optimal alignment. Traceback runs right to left and, when several
//! predecessors are optimal, prefers deletion, then insertion, then
//! substitution.

use std::fmt;

use thiserror::Error;

use crate::cost::CostModel;
use crate::phonetics::{Segment, Transcription};

/// Costs closer than this are treated as equal.
pub const TIE_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum AlignError {
    #[error("transcriptions were tokenized with different segment tables")]
    IncompatibleTables,
    #[error("cannot normalize an alignment of length zero")]
    ZeroLength,
    #[error("more than {cap} optimal alignments")]
    CapExceeded { cap: usize },
    #[error("expected roles (older, newer, standard), got ({0:?}, {1:?}, {2:?})")]
    RoleMismatch(crate::phonetics::Source, crate::phonetics::Source, crate::phonetics::Source),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditOp {
    Match,
    Sub,
    Ins,
    Del,
}

impl EditOp {
    pub fn label(self) -> &'static str {
        match self {
            EditOp::Match => "-",
            EditOp::Sub => "sub.",
            EditOp::Ins => "ins.",
            EditOp::Del => "del.",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column2 {
    pub left: Option<Segment>,
    pub right: Option<Segment>,
    pub op: EditOp,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alignment2 {
    pub columns: Vec<Column2>,
    pub total_cost: f64,
}

impl Alignment2 {
    /// Scores a given column layout under `cm`. Panics on an all-gap column.
    pub fn from_pairs(pairs: Vec<(Option<Segment>, Option<Segment>)>, cm: &CostModel) -> Self {
        let columns: Vec<Column2> = pairs
            .into_iter()
            .map(|(left, right)| {
                let (op, cost) = match (&left, &right) {
                    (Some(a), Some(b)) if a == b => (EditOp::Match, 0.0),
                    (Some(a), Some(b)) => (EditOp::Sub, cm.subst(a, b)),
                    (Some(a), None) => (EditOp::Del, cm.indel(a)),
                    (None, Some(b)) => (EditOp::Ins, cm.indel(b)),
                    (None, None) => panic!("alignment column with two gaps"),
                };
                Column2 { left, right, op, cost }
            })
            .collect();
        let total_cost = columns.iter().map(|c| c.cost).sum();
        Self { columns, total_cost }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn normalized(&self) -> Result<f64, AlignError> {
        normalize(self)
    }

    /// Gap-aware symbol pairs, for comparing alignments structurally.
    pub fn symbol_pairs(&self) -> Vec<(Option<&str>, Option<&str>)> {
        self.columns
            .iter()
            .map(|c| (c.left.as_ref().map(Segment::symbol), c.right.as_ref().map(Segment::symbol)))
            .collect()
    }
}

impl fmt::Display for Alignment2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cell = |s: &Option<Segment>| s.as_ref().map_or("", Segment::symbol).to_string();
        let rows: [Vec<String>; 4] = [
            self.columns.iter().map(|c| cell(&c.left)).collect(),
            self.columns.iter().map(|c| cell(&c.right)).collect(),
            self.columns.iter().map(|c| c.op.label().to_string()).collect(),
            self.columns.iter().map(|c| format_cost(c.cost)).collect(),
        ];
        for (name, row) in ["string 1", "string 2", "operation", "cost"].iter().zip(rows) {
            writeln!(f, "{name:<10}| {}", row.iter().map(|s| format!("{s:<5}")).collect::<String>().trim_end())?;
        }
        Ok(())
    }
}

pub(crate) fn format_cost(c: f64) -> String {
    if c.fract() == 0.0 {
        format!("{c:.0}")
    } else {
        format!("{c:.3}")
    }
}

pub(crate) fn cost_eq(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= TIE_EPSILON
}

/// (cost, length) ordering: lower cost wins, then more columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Score {
    pub cost: f64,
    pub len: u32,
}

impl Score {
    pub const START: Score = Score { cost: 0.0, len: 0 };
    pub const UNREACHED: Score = Score { cost: f64::INFINITY, len: 0 };

    pub fn step(self, cost: f64) -> Score {
        Score { cost: self.cost + cost, len: self.len + 1 }
    }

    pub fn better_than(self, other: Score) -> bool {
        if cost_eq(self.cost, other.cost) {
            self.len > other.len
        } else {
            self.cost < other.cost
        }
    }

    pub fn same_as(self, other: Score) -> bool {
        cost_eq(self.cost, other.cost) && self.len == other.len
    }
}

/// Aligns two transcriptions tokenized with the same table.
pub fn align2(a: &Transcription, b: &Transcription, cm: &CostModel) -> Result<Alignment2, AlignError> {
    if a.table != b.table {
        return Err(AlignError::IncompatibleTables);
    }
    Ok(align_segments(&a.segments, &b.segments, cm))
}

pub fn align_segments(a: &[Segment], b: &[Segment], cm: &CostModel) -> Alignment2 {
    let (n, m) = (a.len(), b.len());
    let width = m + 1;
    let del: Vec<f64> = a.iter().map(|s| cm.indel(s)).collect();
    let ins: Vec<f64> = b.iter().map(|s| cm.indel(s)).collect();
    let sub: Vec<f64> = a.iter().flat_map(|s| b.iter().map(move |t| (s, t))).map(|(s, t)| cm.subst(s, t)).collect();

    let mut dp = vec![Score::UNREACHED; (n + 1) * width];
    dp[0] = Score::START;
    for i in 0..=n {
        for j in 0..=m {
            if i == 0 && j == 0 {
                continue;
            }
            let mut best = Score::UNREACHED;
            let mut consider = |cand: Score| {
                if cand.better_than(best) {
                    best = cand;
                }
            };
            if i > 0 {
                consider(dp[(i - 1) * width + j].step(del[i - 1]));
            }
            if j > 0 {
                consider(dp[i * width + j - 1].step(ins[j - 1]));
            }
            if i > 0 && j > 0 {
                consider(dp[(i - 1) * width + j - 1].step(sub[(i - 1) * m + j - 1]));
            }
            dp[i * width + j] = best;
        }
    }

    let mut pairs = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = dp[i * width + j];
        if i > 0 && dp[(i - 1) * width + j].step(del[i - 1]).same_as(here) {
            pairs.push((Some(a[i - 1].clone()), None));
            i -= 1;
        } else if j > 0 && dp[i * width + j - 1].step(ins[j - 1]).same_as(here) {
            pairs.push((None, Some(b[j - 1].clone())));
            j -= 1;
        } else {
            debug_assert!(i > 0 && j > 0, "traceback left the lattice");
            pairs.push((Some(a[i - 1].clone()), Some(b[j - 1].clone())));
            i -= 1;
            j -= 1;
        }
    }
    pairs.reverse();
    Alignment2::from_pairs(pairs, cm)
}

/// Total cost divided by alignment length.
pub fn normalize(al: &Alignment2) -> Result<f64, AlignError> {
    if al.columns.is_empty() {
        return Err(AlignError::ZeroLength);
    }
    Ok(al.total_cost / al.columns.len() as f64)
}

/// Every distinct minimal-cost alignment, found by exhaustive search over
/// all alignments (branch and bound on cost, no DP). Meant as an oracle for
/// small inputs.
pub fn enumerate_optimal(
    a: &[Segment],
    b: &[Segment],
    cm: &CostModel,
    cap: usize,
) -> Result<Vec<Alignment2>, AlignError> {
    // (i, j, move) steps of a partial alignment
    type Path = Vec<(usize, usize, u8)>;

    struct Search<'a> {
        a: &'a [Segment],
        b: &'a [Segment],
        cm: &'a CostModel,
        best: f64,
        found: Vec<(f64, Path)>,
        path: Path,
        cap: usize,
    }

    impl Search<'_> {
        fn walk(&mut self, i: usize, j: usize, cost: f64) {
            if !cost.is_finite() || (cost > self.best && !cost_eq(cost, self.best)) {
                return;
            }
            if i == self.a.len() && j == self.b.len() {
                if cost < self.best && !cost_eq(cost, self.best) {
                    self.best = cost;
                    let best = self.best;
                    self.found.retain(|(c, _)| cost_eq(*c, best));
                }
                self.found.push((cost, self.path.clone()));
                if self.found.len() > self.cap.saturating_mul(4).max(1024) {
                    let best = self.best;
                    self.found.retain(|(c, _)| cost_eq(*c, best));
                }
                return;
            }
            if i < self.a.len() {
                self.path.push((i, j, 0));
                self.walk(i + 1, j, cost + self.cm.indel(&self.a[i]));
                self.path.pop();
            }
            if j < self.b.len() {
                self.path.push((i, j, 1));
                self.walk(i, j + 1, cost + self.cm.indel(&self.b[j]));
                self.path.pop();
            }
            if i < self.a.len() && j < self.b.len() {
                self.path.push((i, j, 2));
                self.walk(i + 1, j + 1, cost + self.cm.subst(&self.a[i], &self.b[j]));
                self.path.pop();
            }
        }
    }

    let mut search = Search { a, b, cm, best: f64::INFINITY, found: Vec::new(), path: Vec::new(), cap };
    search.walk(0, 0, 0.0);
    let best = search.best;
    let optimal: Vec<_> = search.found.into_iter().filter(|(c, _)| cost_eq(*c, best)).collect();
    if optimal.len() > cap {
        return Err(AlignError::CapExceeded { cap });
    }
    Ok(optimal
        .into_iter()
        .map(|(_, path)| {
            let pairs = path
                .into_iter()
                .map(|(i, j, kind)| match kind {
                    0 => (Some(a[i].clone()), None),
                    1 => (None, Some(b[j].clone())),
                    _ => (Some(a[i].clone()), Some(b[j].clone())),
                })
                .collect();
            Alignment2::from_pairs(pairs, cm)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::ConstraintPolicy;
    use crate::phonetics::SegmentTable;

    fn segs(s: &str) -> Vec<Segment> {
        if s.is_empty() {
            return Vec::new();
        }
        SegmentTable::builtin().tokenize(s).unwrap()
    }

    fn binary() -> CostModel {
        CostModel::binary(ConstraintPolicy::PHONETIC)
    }

    #[test]
    fn identity_alignment() {
        let x = segs("stroːdə");
        let al = align_segments(&x, &x, &binary());
        assert_eq!(al.total_cost, 0.0);
        assert_eq!(al.len(), x.len());
        assert!(al.columns.iter().all(|c| c.op == EditOp::Match));
        assert_eq!(normalize(&al).unwrap(), 0.0);
    }

    #[test]
    fn all_deletions_against_empty() {
        let x = segs("strat");
        let al = align_segments(&x, &[], &binary());
        assert_eq!(al.total_cost, 5.0);
        assert_eq!(al.len(), 5);
        assert!(al.columns.iter().all(|c| c.op == EditOp::Del));
        assert_eq!(normalize(&al).unwrap(), 1.0);
    }

    #[test]
    fn empty_against_empty_cannot_normalize() {
        let al = align_segments(&[], &[], &binary());
        assert_eq!(normalize(&al), Err(AlignError::ZeroLength));
    }

    #[test]
    fn straat_longest_optimum_is_seven_columns() {
        // Brute force finds optima of length 6 and 7 at cost 3, with or
        // without the vowel-consonant ban.
        let (x, y) = (segs("stroːdə"), segs("strɔət"));
        for policy in [ConstraintPolicy::NONE, ConstraintPolicy::PHONETIC] {
            let cm = CostModel::binary(policy);
            let al = align_segments(&x, &y, &cm);
            assert_eq!(al.total_cost, 3.0);
            assert_eq!(al.len(), 7);
            let optima = enumerate_optimal(&x, &y, &cm, 1000).unwrap();
            assert_eq!(optima.iter().map(Alignment2::len).max(), Some(7));
            assert!(optima.iter().all(|o| o.total_cost == 3.0));
        }
    }

    #[test]
    fn unconstrained_optima_include_three_substitution_alignment() {
        let (x, y) = (segs("stroːdə"), segs("strɔət"));
        let cm = CostModel::binary(ConstraintPolicy::NONE);
        let optima = enumerate_optimal(&x, &y, &cm, 1000).unwrap();
        let diagonal: Vec<_> = x.iter().cloned().map(Some).zip(y.iter().cloned().map(Some)).collect();
        let expected = Alignment2::from_pairs(diagonal, &cm);
        assert_eq!(expected.len(), 6);
        assert!(optima.contains(&expected));
    }

    #[test]
    fn constrained_layout_with_two_vowel_consonant_avoidances_costs_four() {
        let (x, y) = (segs("stroːdə"), segs("strɔət"));
        let cm = binary();
        let pairs = vec![
            (Some(x[0].clone()), Some(y[0].clone())),
            (Some(x[1].clone()), Some(y[1].clone())),
            (Some(x[2].clone()), Some(y[2].clone())),
            (Some(x[3].clone()), Some(y[3].clone())),
            (None, Some(y[4].clone())),
            (Some(x[4].clone()), Some(y[5].clone())),
            (Some(x[5].clone()), None),
        ];
        let al = Alignment2::from_pairs(pairs, &cm);
        assert_eq!(al.total_cost, 4.0);
        assert_eq!(al.len(), 7);
        assert!((normalize(&al).unwrap() - 4.0 / 7.0).abs() < 1e-12);
        let ops: Vec<_> = al.columns.iter().map(|c| c.op).collect();
        use EditOp::*;
        assert_eq!(ops, [Match, Match, Match, Sub, Ins, Sub, Del]);
    }

    #[test]
    fn constraint_keeps_vowels_off_obstruents() {
        let cm = binary();
        let al = align_segments(&segs("ata"), &segs("tat"), &cm);
        for c in &al.columns {
            if let (Some(l), Some(r)) = (&c.left, &c.right) {
                assert!(!cm.policy().forbids(l, r), "{al}");
            }
        }
        assert!(al.total_cost.is_finite());
    }

    #[test]
    fn schwa_may_pair_with_sonorant() {
        let cm = binary();
        let al = align_segments(&segs("fiːr"), &segs("fiːə"), &cm);
        assert_eq!(al.total_cost, 1.0);
        assert_eq!(al.len(), 3);
        assert_eq!(al.columns[2].op, EditOp::Sub);
    }

    #[test]
    fn tie_break_prefers_deletion_at_the_right_edge() {
        // [ao] vs [oa]: two 3-column optima at cost 2; traceback from the
        // right takes the deletion.
        let cm = CostModel::binary(ConstraintPolicy::NONE);
        let al = align_segments(&segs("ao"), &segs("oa"), &cm);
        assert_eq!(al.total_cost, 2.0);
        assert_eq!(al.len(), 3);
        assert_eq!(al.columns.last().unwrap().op, EditOp::Del);
    }

    #[test]
    fn incompatible_tables() {
        let t1 = SegmentTable::builtin();
        let mut t2 = SegmentTable::builtin();
        t2.insert('ɚ', crate::phonetics::SymbolInfo::vowel()).unwrap();
        let a = t1.transcribe("a", "L", "w", crate::phonetics::Source::Older).unwrap();
        let b = t2.transcribe("a", "L", "w", crate::phonetics::Source::Newer).unwrap();
        assert_eq!(align2(&a, &b, &binary()), Err(AlignError::IncompatibleTables));
    }

    #[test]
    fn enumeration_cap() {
        let cm = CostModel::binary(ConstraintPolicy::NONE);
        let err = enumerate_optimal(&segs("at"), &segs("ta"), &cm, 2).unwrap_err();
        assert_eq!(err, AlignError::CapExceeded { cap: 2 });
        let single = enumerate_optimal(&segs("stra"), &segs("stra"), &cm, 1).unwrap();
        assert_eq!(single.len(), 1);
    }
}
