//! Construction-independent certification of symmetric chain decompositions.
//!
//! A target poset only has to answer membership, rank, and comparability
//! questions; nothing a construction computed internally is trusted.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::chainpow::ChainProductPoset;
use crate::error::{Error, Result};
use crate::groups::{burnside_count, gcd, parse_group_spec, GroupKey, GroupSpec, Involution, QuotientPoset};
use crate::order::{Context, Decomposition, Pair};
use crate::subset::{Ranked, Subset};

/// Witnesses recorded per failure kind before the rest are only counted.
const WITNESS_CAP: usize = 50;

/// A finite ranked poset that a decomposition can be checked against.
pub trait RankedPoset {
    type Element: Clone + Eq + Hash + Ord + Ranked + fmt::Display;

    fn total_rank(&self) -> usize;

    /// Every element, each exactly once.
    fn elements(&self) -> Vec<Self::Element>;

    fn is_element(&self, e: &Self::Element) -> bool;

    fn leq(&self, a: &Self::Element, b: &Self::Element) -> bool;

    /// Element count from an independent counting argument.
    fn expected_count(&self) -> Result<u128>;

    fn signature(&self) -> Result<PosetSignature>;
}

/// Identifies a poset up to how it was spelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetSignature {
    Quotient(GroupKey),
    /// `(k, m, gcd(r, m))` per factor.
    ChainProduct(Vec<(usize, usize, usize)>),
    Product(Box<PosetSignature>, Box<PosetSignature>),
}

pub fn context_signature(ctx: &Context) -> Result<PosetSignature> {
    Ok(match ctx {
        Context::Boolean { n } => PosetSignature::Quotient(GroupSpec::trivial(*n).group_key()),
        Context::Quotient { n, group } => {
            let spec = if group.trim().is_empty() {
                GroupSpec::trivial(*n)
            } else {
                parse_group_spec(group, *n)?
            };
            PosetSignature::Quotient(spec.group_key())
        }
        Context::Reflection { n, involution } => {
            PosetSignature::Quotient(Involution::parse(involution, *n)?.as_group_spec().group_key())
        }
        Context::ChainPower { k, m, r } => PosetSignature::ChainProduct(vec![(*k, *m, gcd(*r, *m))]),
        Context::ChainProduct { factors } => {
            PosetSignature::ChainProduct(factors.iter().map(|f| (f.k, f.m, gcd(f.r, f.m))).collect())
        }
        Context::Product(p, q) => PosetSignature::Product(
            Box::new(context_signature(p)?),
            Box::new(context_signature(q)?),
        ),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    NotCovered,
    DoubleCovered,
    NotSaturated,
    NotSymmetric,
    NotComparable,
    NotAnElement,
    CountMismatch,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FailureKind::NotCovered => "not-covered",
            FailureKind::DoubleCovered => "double-covered",
            FailureKind::NotSaturated => "not-saturated",
            FailureKind::NotSymmetric => "not-symmetric",
            FailureKind::NotComparable => "not-comparable",
            FailureKind::NotAnElement => "not-an-element",
            FailureKind::CountMismatch => "count-mismatch",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    /// Distinct target elements covered by the chains.
    pub element_count: u128,
    /// Burnside-style count of the target.
    pub expected_count: u128,
    pub failures: Vec<Failure>,
    /// Failures beyond the per-kind witness cap.
    pub suppressed: usize,
}

impl VerifyReport {
    pub fn has(&self, kind: FailureKind) -> bool {
        self.failures.iter().any(|f| f.kind == kind)
    }

    /// First failure as a one-line message, if any.
    pub fn summary(&self) -> Option<String> {
        self.failures.first().map(|f| format!("{}: {}", f.kind, f.witness))
    }

    pub fn into_result(self) -> Result<VerifyReport> {
        if self.ok {
            Ok(self)
        } else {
            Err(Error::Verification(
                self.summary().unwrap_or_else(|| "element count mismatch".into()),
            ))
        }
    }
}

struct Collector {
    failures: Vec<Failure>,
    per_kind: HashMap<FailureKind, usize>,
    suppressed: usize,
}

impl Collector {
    fn push(&mut self, kind: FailureKind, witness: impl FnOnce() -> String) {
        let seen = self.per_kind.entry(kind).or_default();
        *seen += 1;
        if *seen <= WITNESS_CAP {
            self.failures.push(Failure { kind, witness: witness() });
        } else {
            self.suppressed += 1;
        }
    }
}

/// Checks that `d` partitions `target` into saturated symmetric chains.
pub fn verify_decomposition<P: RankedPoset>(
    target: &P,
    d: &Decomposition<P::Element>,
) -> Result<VerifyReport> {
    let claimed = context_signature(d.context())?;
    let actual = target.signature()?;
    if claimed != actual {
        return Err(Error::invalid(format!(
            "context mismatch: decomposition is over {:?}, target is {:?}",
            claimed, actual
        )));
    }
    let total = target.total_rank();
    let mut out = Collector {
        failures: Vec::new(),
        per_kind: HashMap::new(),
        suppressed: 0,
    };
    let mut covered: HashMap<&P::Element, usize> = HashMap::with_capacity(d.element_count());

    for (ci, chain) in d.chains().iter().enumerate() {
        let elems = chain.elements();
        for e in elems {
            if !target.is_element(e) {
                out.push(FailureKind::NotAnElement, || format!("chain {ci}: {e}"));
                continue;
            }
            let hits = covered.entry(e).or_default();
            *hits += 1;
            if *hits == 2 {
                out.push(FailureKind::DoubleCovered, || e.to_string());
            }
        }
        for w in elems.windows(2) {
            if w[1].rank() != w[0].rank() + 1 {
                out.push(FailureKind::NotSaturated, || format!("chain {ci}: {} then {}", w[0], w[1]));
            } else if !target.leq(&w[0], &w[1]) {
                out.push(FailureKind::NotComparable, || format!("chain {ci}: {} then {}", w[0], w[1]));
            }
        }
        match (chain.min(), chain.max()) {
            (Some(lo), Some(hi)) if lo.rank() + hi.rank() == total => {}
            (Some(lo), Some(hi)) => out.push(FailureKind::NotSymmetric, || {
                format!("chain {ci}: ranks {} + {} != {total}", lo.rank(), hi.rank())
            }),
            _ => out.push(FailureKind::NotSymmetric, || format!("chain {ci}: empty chain")),
        }
    }

    let all = target.elements();
    for e in &all {
        if !covered.contains_key(e) {
            out.push(FailureKind::NotCovered, || e.to_string());
        }
    }
    let expected = target.expected_count()?;
    let element_count = covered.len() as u128;
    if all.len() as u128 != expected {
        out.push(FailureKind::CountMismatch, || {
            format!("target enumerates {} elements, counting gives {expected}", all.len())
        });
    }
    Ok(VerifyReport {
        ok: out.failures.is_empty() && element_count == expected,
        element_count,
        expected_count: expected,
        failures: out.failures,
        suppressed: out.suppressed,
    })
}

/// Rank counts of a poset with symmetry and unimodality flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    pub counts: Vec<usize>,
    pub symmetric: bool,
    pub unimodal: bool,
}

impl RankProfile {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        let symmetric = counts.iter().eq(counts.iter().rev());
        let peak = counts
            .iter()
            .enumerate()
            .max_by_key(|&(i, c)| (*c, std::cmp::Reverse(i)))
            .map_or(0, |(i, _)| i);
        let unimodal = counts.is_empty()
            || (counts[..=peak].windows(2).all(|w| w[0] <= w[1])
                && counts[peak..].windows(2).all(|w| w[0] >= w[1]));
        RankProfile {
            counts,
            symmetric,
            unimodal,
        }
    }
}

pub fn rank_profile<P: RankedPoset>(target: &P) -> RankProfile {
    let mut counts = vec![0usize; target.total_rank() + 1];
    for e in target.elements() {
        counts[e.rank()] += 1;
    }
    RankProfile::from_counts(counts)
}

impl RankedPoset for QuotientPoset {
    type Element = Subset;

    fn total_rank(&self) -> usize {
        self.n()
    }

    fn elements(&self) -> Vec<Subset> {
        (0..self.orbit_count()).map(|i| self.rep(i)).collect()
    }

    fn is_element(&self, e: &Subset) -> bool {
        self.is_rep(*e)
    }

    fn leq(&self, a: &Subset, b: &Subset) -> bool {
        QuotientPoset::leq(self, *a, *b)
    }

    fn expected_count(&self) -> Result<u128> {
        burnside_count(self.n(), self.group())
    }

    fn signature(&self) -> Result<PosetSignature> {
        Ok(PosetSignature::Quotient(self.group().group_key()))
    }
}

impl RankedPoset for ChainProductPoset {
    type Element = crate::chainpow::Levels;

    fn total_rank(&self) -> usize {
        ChainProductPoset::total_rank(self)
    }

    fn elements(&self) -> Vec<Self::Element> {
        ChainProductPoset::elements(self)
    }

    fn is_element(&self, e: &Self::Element) -> bool {
        self.is_canonical(e)
    }

    fn leq(&self, a: &Self::Element, b: &Self::Element) -> bool {
        ChainProductPoset::leq(self, a, b)
    }

    fn expected_count(&self) -> Result<u128> {
        Ok(self.burnside_count())
    }

    fn signature(&self) -> Result<PosetSignature> {
        Ok(PosetSignature::ChainProduct(
            self.factors().iter().map(|f| (f.k, f.m, gcd(f.r, f.m))).collect(),
        ))
    }
}

/// `P x Q` ordered componentwise.
pub struct ProductPoset<'a, P, Q> {
    pub left: &'a P,
    pub right: &'a Q,
}

impl<'a, P, Q> ProductPoset<'a, P, Q> {
    pub fn new(left: &'a P, right: &'a Q) -> Self {
        ProductPoset { left, right }
    }
}

impl<P: RankedPoset, Q: RankedPoset> RankedPoset for ProductPoset<'_, P, Q> {
    type Element = Pair<P::Element, Q::Element>;

    fn total_rank(&self) -> usize {
        self.left.total_rank() + self.right.total_rank()
    }

    fn elements(&self) -> Vec<Self::Element> {
        let rights = self.right.elements();
        self.left
            .elements()
            .into_iter()
            .flat_map(|a| rights.iter().map(move |b| Pair(a.clone(), b.clone())))
            .collect()
    }

    fn is_element(&self, e: &Self::Element) -> bool {
        self.left.is_element(&e.0) && self.right.is_element(&e.1)
    }

    fn leq(&self, a: &Self::Element, b: &Self::Element) -> bool {
        self.left.leq(&a.0, &b.0) && self.right.leq(&a.1, &b.1)
    }

    fn expected_count(&self) -> Result<u128> {
        Ok(self.left.expected_count()? * self.right.expected_count()?)
    }

    fn signature(&self) -> Result<PosetSignature> {
        Ok(PosetSignature::Product(
            Box::new(self.left.signature()?),
            Box::new(self.right.signature()?),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::quotient_poset;
    use crate::order::Chain;

    fn s(xs: &[u32]) -> Subset {
        Subset::from_elements(xs.iter().copied(), 8).unwrap()
    }

    fn necklace_4() -> (QuotientPoset, Decomposition<Subset>) {
        let g = parse_group_spec("(1 2 3 4)", 4).unwrap();
        let q = quotient_poset(4, &g).unwrap();
        let d = Decomposition::new(
            Context::Quotient { n: 4, group: "(1 2 3 4)".into() },
            vec![
                Chain::new(vec![s(&[]), s(&[1]), s(&[1, 2]), s(&[1, 2, 3]), s(&[1, 2, 3, 4])]),
                Chain::singleton(s(&[1, 3])),
            ],
        )
        .unwrap();
        (q, d)
    }

    #[test]
    fn accepts_hand_built_necklace_scd() {
        let (q, d) = necklace_4();
        let r = verify_decomposition(&q, &d).unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!(r.element_count, 6);
    }

    #[test]
    fn missing_chain_is_not_covered() {
        let (q, d) = necklace_4();
        let d = Decomposition::new(d.context().clone(), vec![d.chains()[0].clone()]).unwrap();
        let r = verify_decomposition(&q, &d).unwrap();
        assert!(!r.ok);
        assert_eq!(r.failures, vec![Failure { kind: FailureKind::NotCovered, witness: "{1,3}".into() }]);
    }

    #[test]
    fn repeated_rank_is_not_saturated() {
        let (q, d) = necklace_4();
        let broken = Decomposition::new(
            d.context().clone(),
            vec![
                Chain::new(vec![s(&[]), s(&[1]), s(&[1, 2]), s(&[1, 3]), s(&[1, 2, 3]), s(&[1, 2, 3, 4])]),
            ],
        )
        .unwrap();
        let r = verify_decomposition(&q, &broken).unwrap();
        assert!(r.has(FailureKind::NotSaturated));
        assert!(!r.ok);
    }

    #[test]
    fn incomparable_and_foreign_elements() {
        let g = GroupSpec::trivial(3);
        let q = quotient_poset(3, &g).unwrap();
        let d = Decomposition::new(
            Context::Boolean { n: 3 },
            vec![Chain::new(vec![s(&[1]), s(&[2, 3])]), Chain::singleton(s(&[4]))],
        )
        .unwrap();
        let r = verify_decomposition(&q, &d).unwrap();
        assert!(r.has(FailureKind::NotComparable));
        assert!(r.has(FailureKind::NotAnElement));
        assert!(r.has(FailureKind::NotSymmetric));
        assert!(r.has(FailureKind::NotCovered));
    }

    #[test]
    fn double_cover_detected() {
        let (q, d) = necklace_4();
        let mut chains = d.chains().to_vec();
        chains.push(Chain::singleton(s(&[1, 3])));
        let d = Decomposition::new(d.context().clone(), chains).unwrap();
        let r = verify_decomposition(&q, &d).unwrap();
        assert!(r.has(FailureKind::DoubleCovered));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let (_, d) = necklace_4();
        let q = quotient_poset(4, &GroupSpec::trivial(4)).unwrap();
        assert!(matches!(verify_decomposition(&q, &d), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn profiles() {
        let g = parse_group_spec("(1 2 3 4)", 4).unwrap();
        let p = rank_profile(&quotient_poset(4, &g).unwrap());
        assert_eq!(p, RankProfile { counts: vec![1, 1, 2, 1, 1], symmetric: true, unimodal: true });
        let inv = Involution::parse("(1 4)(2 3)", 4).unwrap();
        let p = rank_profile(&quotient_poset(4, &inv.as_group_spec()).unwrap());
        assert_eq!(p.counts, vec![1, 2, 4, 2, 1]);
        assert!(p.symmetric && p.unimodal);
        let p = rank_profile(&quotient_poset(3, &GroupSpec::trivial(3)).unwrap());
        assert_eq!(p.counts, vec![1, 3, 3, 1]);

        assert!(!RankProfile::from_counts(vec![1, 3, 1, 3, 1]).unimodal);
        assert!(!RankProfile::from_counts(vec![1, 2, 3]).symmetric);
        assert!(RankProfile::from_counts(vec![2, 2]).unimodal);
    }
}
