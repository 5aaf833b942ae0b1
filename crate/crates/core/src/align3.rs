//! Three-way alignment of an older, a newer and a standard transcription.
//!
//! Every column consumes a segment from one, two or all three strings (seven
//! operations). A column costs the sum of its three pairwise distances, with
//! gap against gap free. As in the pairwise case the DP minimizes cost and
//! then maximizes column count.
//!
//! Each column also gets a direction of change,
//! `distance(newer, standard) - distance(older, standard)`: positive values
//! are divergence from the standard, negative values convergence.

use std::fmt;

use crate::align2::{align2, format_cost, normalize, AlignError, Score};
use crate::cost::{CostModel, PairDistance};
use crate::phonetics::{Segment, Source, Transcription};

/// Column presence pattern: which of (older, newer, standard) contribute a segment.
///
/// Declaration order is the traceback preference order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op3 {
    X,
    Y,
    Z,
    XY,
    XZ,
    YZ,
    XYZ,
}

impl Op3 {
    pub const ALL: [Op3; 7] = [Op3::X, Op3::Y, Op3::Z, Op3::XY, Op3::XZ, Op3::YZ, Op3::XYZ];

    /// (consumes x, consumes y, consumes z)
    pub fn mask(self) -> (bool, bool, bool) {
        match self {
            Op3::X => (true, false, false),
            Op3::Y => (false, true, false),
            Op3::Z => (false, false, true),
            Op3::XY => (true, true, false),
            Op3::XZ => (true, false, true),
            Op3::YZ => (false, true, true),
            Op3::XYZ => (true, true, true),
        }
    }

    pub fn from_mask(x: bool, y: bool, z: bool) -> Option<Op3> {
        Op3::ALL.into_iter().find(|op| op.mask() == (x, y, z))
    }

    /// Same pattern with the older and newer roles exchanged.
    pub fn swap_xy(self) -> Op3 {
        let (x, y, z) = self.mask();
        Op3::from_mask(y, x, z).expect("valid mask")
    }

    pub fn label(self) -> &'static str {
        match self {
            Op3::X => "x",
            Op3::Y => "y",
            Op3::Z => "z",
            Op3::XY => "xy",
            Op3::XZ => "xz",
            Op3::YZ => "yz",
            Op3::XYZ => "xyz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangeKind {
    /// All three segments identical.
    Stable,
    Neutral,
    Convergent,
    Divergent,
}

impl ChangeKind {
    pub fn of(direction: f64, stable: bool) -> Self {
        if stable {
            ChangeKind::Stable
        } else if direction < 0.0 {
            ChangeKind::Convergent
        } else if direction > 0.0 {
            ChangeKind::Divergent
        } else {
            ChangeKind::Neutral
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ChangeKind::Stable => "-",
            ChangeKind::Neutral => "neutr.",
            ChangeKind::Convergent => "conv.",
            ChangeKind::Divergent => "div.",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column3 {
    pub x: Option<Segment>,
    pub y: Option<Segment>,
    pub z: Option<Segment>,
    pub column_cost: f64,
    pub direction: f64,
}

impl Column3 {
    pub fn op(&self) -> Op3 {
        Op3::from_mask(self.x.is_some(), self.y.is_some(), self.z.is_some()).expect("column has a segment")
    }

    pub fn is_stable(&self) -> bool {
        matches!((&self.x, &self.y, &self.z), (Some(a), Some(b), Some(c)) if a == b && b == c)
    }

    pub fn kind(&self) -> ChangeKind {
        ChangeKind::of(self.direction, self.is_stable())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alignment3 {
    pub columns: Vec<Column3>,
    pub total_cost: f64,
    pub conv: f64,
    pub div: f64,
}

impl Alignment3 {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Builds an alignment from explicit columns, scoring costs and
    /// directions under `cm`. Panics on an all-gap column.
    pub fn from_columns(cells: Vec<(Option<Segment>, Option<Segment>, Option<Segment>)>, cm: &CostModel) -> Self {
        let columns: Vec<Column3> = cells
            .into_iter()
            .map(|(x, y, z)| {
                assert!(x.is_some() || y.is_some() || z.is_some(), "all-gap column");
                let column_cost = pair_cost(cm, x.as_ref(), y.as_ref())
                    + pair_cost(cm, x.as_ref(), z.as_ref())
                    + pair_cost(cm, y.as_ref(), z.as_ref());
                let mut col = Column3 { x, y, z, column_cost, direction: 0.0 };
                col.direction = direction(&col, cm);
                col
            })
            .collect();
        let total_cost = columns.iter().map(|c| c.column_cost).sum();
        let mut al = Alignment3 { columns, total_cost, conv: 0.0, div: 0.0 };
        let (conv, div) = decompose_columns(&al.columns);
        al.conv = conv;
        al.div = div;
        al
    }

    /// The same alignment with the older and newer rows exchanged.
    pub fn swap_xy(&self, dist: &impl PairDistance) -> Self {
        let columns: Vec<Column3> = self
            .columns
            .iter()
            .map(|c| {
                let mut col = Column3 { x: c.y.clone(), y: c.x.clone(), z: c.z.clone(), column_cost: c.column_cost, direction: 0.0 };
                col.direction = direction(&col, dist);
                col
            })
            .collect();
        let (conv, div) = decompose_columns(&columns);
        Alignment3 { columns, total_cost: self.total_cost, conv, div }
    }
}

impl fmt::Display for Alignment3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cell = |s: &Option<Segment>| s.as_ref().map_or("", Segment::symbol).to_string();
        let rows: Vec<(&str, Vec<String>)> = vec![
            ("older", self.columns.iter().map(|c| cell(&c.x)).collect()),
            ("newer", self.columns.iter().map(|c| cell(&c.y)).collect()),
            ("standard", self.columns.iter().map(|c| cell(&c.z)).collect()),
            ("operation", self.columns.iter().map(|c| c.op().label().to_string()).collect()),
            ("cost", self.columns.iter().map(|c| format_cost(c.column_cost)).collect()),
            ("direction", self.columns.iter().map(|c| format_cost(c.direction)).collect()),
            ("change", self.columns.iter().map(|c| c.kind().label().to_string()).collect()),
        ];
        for (name, row) in rows {
            writeln!(f, "{name}\t{}", row.join("\t"))?;
        }
        Ok(())
    }
}

fn pair_cost(cm: &CostModel, a: Option<&Segment>, b: Option<&Segment>) -> f64 {
    match (a, b) {
        (None, None) => 0.0,
        (Some(s), None) | (None, Some(s)) => cm.indel(s),
        (Some(s), Some(t)) => cm.subst(s, t),
    }
}

/// `distance(y, z) - distance(x, z)` for one column; gaps use gap distances
/// and gap against gap is 0.
pub fn direction(col: &Column3, dist: &impl PairDistance) -> f64 {
    dist.distance(col.y.as_ref(), col.z.as_ref()) - dist.distance(col.x.as_ref(), col.z.as_ref())
}

fn decompose_columns(columns: &[Column3]) -> (f64, f64) {
    if columns.is_empty() {
        return (0.0, 0.0);
    }
    let (conv, div) = columns.iter().fold((0.0, 0.0), |(conv, div), c| {
        if c.direction < 0.0 {
            (conv - c.direction, div)
        } else {
            (conv, div + c.direction)
        }
    });
    let n = columns.len() as f64;
    (conv / n, div / n)
}

/// Convergence and divergence proportions: summed negative and positive
/// directions, each divided by the alignment length.
pub fn decompose(al: &Alignment3, dist: &impl PairDistance) -> (f64, f64) {
    let columns: Vec<Column3> = al
        .columns
        .iter()
        .map(|c| Column3 { direction: direction(c, dist), ..c.clone() })
        .collect();
    decompose_columns(&columns)
}

/// Aligns older `x`, newer `y` and standard `z`.
pub fn align3(x: &Transcription, y: &Transcription, z: &Transcription, cm: &CostModel) -> Result<Alignment3, AlignError> {
    if (x.source, y.source, z.source) != (Source::Older, Source::Newer, Source::Standard) {
        return Err(AlignError::RoleMismatch(x.source, y.source, z.source));
    }
    if x.table != y.table || x.table != z.table {
        return Err(AlignError::IncompatibleTables);
    }
    Ok(align3_segments(&x.segments, &y.segments, &z.segments, cm))
}

/// Role-unchecked variant of [`align3`].
///
/// The DP runs with the lexicographically smaller of `x` and `y` in the
/// first slot, so exchanging the two inputs yields the mirror-image
/// alignment even when several optima tie.
pub fn align3_segments(x: &[Segment], y: &[Segment], z: &[Segment], cm: &CostModel) -> Alignment3 {
    let key = |s: &[Segment]| s.iter().map(|g| g.symbol().to_string()).collect::<Vec<_>>();
    let swapped = key(y) < key(x);
    let (first, second) = if swapped { (y, x) } else { (x, y) };
    let mut cells = trace(first, second, z, cm);
    if swapped {
        for cell in &mut cells {
            std::mem::swap(&mut cell.0, &mut cell.1);
        }
    }
    Alignment3::from_columns(cells, cm)
}

type Cells = Vec<(Option<Segment>, Option<Segment>, Option<Segment>)>;

fn trace(x: &[Segment], y: &[Segment], z: &[Segment], cm: &CostModel) -> Cells {
    let (nx, ny, nz) = (x.len(), y.len(), z.len());
    let gx: Vec<f64> = x.iter().map(|s| cm.indel(s)).collect();
    let gy: Vec<f64> = y.iter().map(|s| cm.indel(s)).collect();
    let gz: Vec<f64> = z.iter().map(|s| cm.indel(s)).collect();
    let matrix = |a: &[Segment], b: &[Segment]| -> Vec<f64> {
        a.iter().flat_map(|s| b.iter().map(move |t| cm.subst(s, t))).collect()
    };
    let dxy = matrix(x, y);
    let dxz = matrix(x, z);
    let dyz = matrix(y, z);

    let sy = nz + 1;
    let sx = (ny + 1) * sy;
    let idx = |i: usize, j: usize, k: usize| i * sx + j * sy + k;

    // cost of the column ending at (i, j, k) under `op`
    let step = |op: Op3, i: usize, j: usize, k: usize| -> f64 {
        match op {
            Op3::X => 2.0 * gx[i - 1],
            Op3::Y => 2.0 * gy[j - 1],
            Op3::Z => 2.0 * gz[k - 1],
            Op3::XY => dxy[(i - 1) * ny + j - 1] + gx[i - 1] + gy[j - 1],
            Op3::XZ => dxz[(i - 1) * nz + k - 1] + gx[i - 1] + gz[k - 1],
            Op3::YZ => dyz[(j - 1) * nz + k - 1] + gy[j - 1] + gz[k - 1],
            Op3::XYZ => dxy[(i - 1) * ny + j - 1] + dxz[(i - 1) * nz + k - 1] + dyz[(j - 1) * nz + k - 1],
        }
    };
    let pred = |op: Op3, i: usize, j: usize, k: usize| -> Option<(usize, usize, usize)> {
        let (a, b, c) = op.mask();
        let i = if a { i.checked_sub(1)? } else { i };
        let j = if b { j.checked_sub(1)? } else { j };
        let k = if c { k.checked_sub(1)? } else { k };
        Some((i, j, k))
    };

    let mut dp = vec![Score::UNREACHED; (nx + 1) * sx];
    dp[0] = Score::START;
    for i in 0..=nx {
        for j in 0..=ny {
            for k in 0..=nz {
                if i == 0 && j == 0 && k == 0 {
                    continue;
                }
                let mut best = Score::UNREACHED;
                for op in Op3::ALL {
                    if let Some((pi, pj, pk)) = pred(op, i, j, k) {
                        let cand = dp[idx(pi, pj, pk)].step(step(op, i, j, k));
                        if cand.better_than(best) {
                            best = cand;
                        }
                    }
                }
                dp[idx(i, j, k)] = best;
            }
        }
    }

    let mut cells = Vec::with_capacity(nx + ny + nz);
    let (mut i, mut j, mut k) = (nx, ny, nz);
    while i > 0 || j > 0 || k > 0 {
        let here = dp[idx(i, j, k)];
        let (op, (pi, pj, pk)) = Op3::ALL
            .into_iter()
            .find_map(|op| {
                let p = pred(op, i, j, k)?;
                dp[idx(p.0, p.1, p.2)].step(step(op, i, j, k)).same_as(here).then_some((op, p))
            })
            .expect("some predecessor reproduces the optimum");
        let (a, b, c) = op.mask();
        cells.push((
            a.then(|| x[i - 1].clone()),
            b.then(|| y[j - 1].clone()),
            c.then(|| z[k - 1].clone()),
        ));
        (i, j, k) = (pi, pj, pk);
    }
    cells.reverse();
    cells
}

/// Change toward the standard measured with two pairwise alignments:
/// `normalize(align2(y, z)) - normalize(align2(x, z))`.
pub fn double_2d_delta(x: &Transcription, y: &Transcription, z: &Transcription, cm: &CostModel) -> Result<f64, AlignError> {
    let newer = normalize(&align2(y, z, cm)?)?;
    let older = normalize(&align2(x, z, cm)?)?;
    Ok(newer - older)
}

/// Per-(location, word) convergence and divergence proportions.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeRecord {
    pub location: String,
    pub word: String,
    pub conv: f64,
    pub div: f64,
    pub alignment_length: usize,
}

impl ChangeRecord {
    pub fn from_alignment(location: &str, word: &str, al: &Alignment3) -> Self {
        Self {
            location: location.to_string(),
            word: word.to_string(),
            conv: al.conv,
            div: al.div,
            alignment_length: al.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::ConstraintPolicy;
    use crate::phonetics::SegmentTable;
    use crate::pmi::PmiTable;
    use std::sync::Arc;

    fn t(s: &str, source: Source) -> Transcription {
        SegmentTable::builtin().transcribe(s, "L", "straat", source).unwrap()
    }

    fn binary() -> CostModel {
        CostModel::binary(ConstraintPolicy::PHONETIC)
    }

    fn straat() -> Alignment3 {
        align3(
            &t("stroːdə", Source::Older),
            &t("strɔət", Source::Newer),
            &t("strat", Source::Standard),
            &binary(),
        )
        .unwrap()
    }

    #[test]
    fn straat_three_way() {
        let al = straat();
        let ops: Vec<Op3> = al.columns.iter().map(Column3::op).collect();
        use Op3::*;
        assert_eq!(ops, [XYZ, XYZ, XYZ, XYZ, Y, XYZ, X]);
        let dirs: Vec<f64> = al.columns.iter().map(|c| c.direction).collect();
        assert_eq!(dirs, [0.0, 0.0, 0.0, 0.0, 1.0, -1.0, -1.0]);
        let kinds: Vec<&str> = al.columns.iter().map(|c| c.kind().label()).collect();
        assert_eq!(kinds, ["-", "-", "-", "neutr.", "div.", "conv.", "conv."]);
        assert_eq!(al.total_cost, 9.0);
        assert!((al.conv - 2.0 / 7.0).abs() < 1e-15);
        assert!((al.div - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn identical_triple_is_stable() {
        let al = align3(&t("strat", Source::Older), &t("strat", Source::Newer), &t("strat", Source::Standard), &binary())
            .unwrap();
        assert_eq!(al.len(), 5);
        assert_eq!((al.conv, al.div), (0.0, 0.0));
        assert!(al.columns.iter().all(|c| c.kind() == ChangeKind::Stable));
    }

    #[test]
    fn roles_are_checked() {
        let err = align3(&t("a", Source::Newer), &t("a", Source::Older), &t("a", Source::Standard), &binary());
        assert!(matches!(err, Err(AlignError::RoleMismatch(..))));
    }

    #[test]
    fn single_column_direction() {
        let table = PmiTable::from_entries([("a", "o", 0.4)]).unwrap();
        let cm = CostModel::learned(Arc::new(table), ConstraintPolicy::PHONETIC);
        let al = align3(&t("a", Source::Older), &t("o", Source::Newer), &t("o", Source::Standard), &cm).unwrap();
        assert_eq!(al.len(), 1);
        assert!((al.conv - 0.4).abs() < 1e-15);
        assert_eq!(al.div, 0.0);
    }

    #[test]
    fn direction_examples() {
        let cm = binary();
        let s = |c: &str| SegmentTable::builtin().tokenize(c).unwrap().remove(0);
        let col = |x: Option<&str>, y: Option<&str>, z: Option<&str>| Column3 {
            x: x.map(s),
            y: y.map(s),
            z: z.map(s),
            column_cost: 0.0,
            direction: 0.0,
        };
        assert_eq!(direction(&col(Some("d"), Some("t"), Some("t")), &cm), -1.0);
        assert_eq!(direction(&col(None, Some("ə"), None), &cm), 1.0);
        assert_eq!(direction(&col(Some("o"), Some("ɔ"), Some("a")), &cm), 0.0);
    }

    #[test]
    fn decompose_matches_stored_proportions() {
        let al = straat();
        assert_eq!(decompose(&al, &binary()), (al.conv, al.div));
    }

    #[test]
    fn double_2d_sign_on_straat() {
        let d = double_2d_delta(&t("stroːdə", Source::Older), &t("strɔət", Source::Newer), &t("strat", Source::Standard), &binary())
            .unwrap();
        // newer vs standard: 2/6, older vs standard: 3/6
        assert!((d - (2.0 / 6.0 - 3.0 / 6.0)).abs() < 1e-12);
        let al = straat();
        assert_eq!(d.signum(), (al.div - al.conv).signum());
    }

    #[test]
    fn swap_is_mirror_image() {
        let x = SegmentTable::builtin().tokenize("a").unwrap();
        let y = SegmentTable::builtin().tokenize("o").unwrap();
        let z = SegmentTable::builtin().tokenize("ao").unwrap();
        let cm = binary();
        let fwd = align3_segments(&x, &y, &z, &cm);
        let back = align3_segments(&y, &x, &z, &cm);
        assert_eq!(back, fwd.swap_xy(&cm));
        assert_eq!((back.conv, back.div), (fwd.div, fwd.conv));
    }
}
