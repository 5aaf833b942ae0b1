//! Operation costs shared by the 2D and 3D aligners.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use crate::phonetics::{Segment, GAP};
use crate::pmi::PmiTable;

/// Cost of a substitution the constraint policy rules out.
pub const FORBIDDEN: f64 = f64::INFINITY;

/// Which substitutions are banned outright.
///
/// With `forbid_vowel_consonant` set, vowels never substitute for
/// consonants, except that schwa may align with the sonorant consonants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintPolicy {
    pub forbid_vowel_consonant: bool,
}

impl ConstraintPolicy {
    pub const PHONETIC: Self = Self { forbid_vowel_consonant: true };
    pub const NONE: Self = Self { forbid_vowel_consonant: false };

    pub fn forbids(&self, a: &Segment, b: &Segment) -> bool {
        if !self.forbid_vowel_consonant || a.class() == b.class() {
            return false;
        }
        let schwa_sonorant = (a.is_schwa() && b.is_sonorant_consonant())
            || (b.is_schwa() && a.is_sonorant_consonant());
        !schwa_sonorant
    }
}

impl Default for ConstraintPolicy {
    fn default() -> Self {
        Self::PHONETIC
    }
}

/// Distance between two column cells, where `None` is a gap.
///
/// Gap against gap is always 0. This is the quantity that enters the
/// direction-of-change formula, so it never applies the constraint policy.
pub trait PairDistance {
    fn distance(&self, a: Option<&Segment>, b: Option<&Segment>) -> f64;
}

#[derive(Debug, Clone)]
enum Weights {
    Binary,
    Learned(Arc<PmiTable>),
}

/// Substitution and indel costs plus the constraint policy on top.
#[derive(Debug, Clone)]
pub struct CostModel {
    weights: Weights,
    policy: ConstraintPolicy,
    missing: Arc<Mutex<BTreeSet<(String, String)>>>,
}

impl CostModel {
    /// Unit costs for every non-identical operation.
    pub fn binary(policy: ConstraintPolicy) -> Self {
        Self { weights: Weights::Binary, policy, missing: Default::default() }
    }

    /// Costs read from a learned distance table. Pairs the table lacks cost
    /// 1.0 and are logged once.
    pub fn learned(table: Arc<PmiTable>, policy: ConstraintPolicy) -> Self {
        Self { weights: Weights::Learned(table), policy, missing: Default::default() }
    }

    pub fn policy(&self) -> ConstraintPolicy {
        self.policy
    }

    pub fn is_binary(&self) -> bool {
        matches!(self.weights, Weights::Binary)
    }

    pub fn table(&self) -> Option<&PmiTable> {
        match &self.weights {
            Weights::Binary => None,
            Weights::Learned(t) => Some(t),
        }
    }

    /// Substitution cost; [`FORBIDDEN`] when the policy bans the pair.
    pub fn subst(&self, a: &Segment, b: &Segment) -> f64 {
        if self.policy.forbids(a, b) {
            FORBIDDEN
        } else {
            self.raw(a.symbol(), b.symbol())
        }
    }

    pub fn indel(&self, a: &Segment) -> f64 {
        self.raw(a.symbol(), GAP)
    }

    fn raw(&self, a: &str, b: &str) -> f64 {
        if a == b {
            return 0.0;
        }
        match &self.weights {
            Weights::Binary => 1.0,
            Weights::Learned(table) => match table.get(a, b) {
                Some(d) => d,
                None => {
                    let key = if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
                    let mut missing = self.missing.lock().expect("missing-pair set poisoned");
                    if missing.insert(key) {
                        log::warn!("no learned distance for [{a}]-[{b}], using 1.0");
                    }
                    1.0
                }
            },
        }
    }

    /// Pairs looked up but absent from the learned table so far.
    pub fn missing_pairs(&self) -> Vec<(String, String)> {
        self.missing.lock().expect("missing-pair set poisoned").iter().cloned().collect()
    }
}

impl PairDistance for CostModel {
    fn distance(&self, a: Option<&Segment>, b: Option<&Segment>) -> f64 {
        match (a, b) {
            (None, None) => 0.0,
            (Some(s), None) | (None, Some(s)) => self.indel(s),
            (Some(s), Some(t)) => self.raw(s.symbol(), t.symbol()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phonetics::SegmentTable;

    fn seg(s: &str) -> Segment {
        SegmentTable::builtin().tokenize(s).unwrap().remove(0)
    }

    #[test]
    fn vowel_consonant_ban_with_schwa_exception() {
        let p = ConstraintPolicy::PHONETIC;
        assert!(p.forbids(&seg("a"), &seg("t")));
        assert!(p.forbids(&seg("t"), &seg("a")));
        assert!(p.forbids(&seg("ə"), &seg("t")));
        assert!(!p.forbids(&seg("ə"), &seg("n")));
        assert!(!p.forbids(&seg("r"), &seg("ə")));
        assert!(p.forbids(&seg("a"), &seg("n")));
        assert!(!p.forbids(&seg("a"), &seg("o")));
        assert!(!ConstraintPolicy::NONE.forbids(&seg("a"), &seg("t")));
    }

    #[test]
    fn binary_costs() {
        let cm = CostModel::binary(ConstraintPolicy::PHONETIC);
        assert_eq!(cm.subst(&seg("a"), &seg("a")), 0.0);
        assert_eq!(cm.subst(&seg("a"), &seg("o")), 1.0);
        assert_eq!(cm.subst(&seg("a"), &seg("t")), FORBIDDEN);
        assert_eq!(cm.indel(&seg("a")), 1.0);
        // raw distance ignores the ban
        assert_eq!(cm.distance(Some(&seg("a")), Some(&seg("t"))), 1.0);
        assert_eq!(cm.distance(None, None), 0.0);
    }

    #[test]
    fn learned_costs_reimpose_policy_and_default_missing() {
        let table = PmiTable::from_entries([("i", "ɪ", 0.2), ("a", "t", 0.7), ("i", GAP, 0.6)]).unwrap();
        let cm = CostModel::learned(Arc::new(table), ConstraintPolicy::PHONETIC);
        assert_eq!(cm.subst(&seg("i"), &seg("ɪ")), 0.2);
        assert_eq!(cm.subst(&seg("ɪ"), &seg("i")), 0.2);
        assert_eq!(cm.subst(&seg("a"), &seg("t")), FORBIDDEN);
        assert_eq!(cm.indel(&seg("i")), 0.6);
        assert_eq!(cm.subst(&seg("o"), &seg("u")), 1.0);
        assert_eq!(cm.missing_pairs(), vec![("o".to_string(), "u".to_string())]);
        assert_eq!(cm.subst(&seg("o"), &seg("o")), 0.0);
    }
}
