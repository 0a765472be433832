//! Chains, decompositions, and the product construction for symmetric chain orders.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use crate::chainpow::ChainFactor;
use crate::error::{Error, Result};
use crate::subset::Ranked;

/// An ascending saturated chain of poset elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain<E> {
    elements: Vec<E>,
}

impl<E> Chain<E> {
    pub fn new(elements: Vec<E>) -> Self {
        Chain { elements }
    }

    pub fn singleton(e: E) -> Self {
        Chain { elements: vec![e] }
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<E> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<&E> {
        self.elements.first()
    }

    pub fn max(&self) -> Option<&E> {
        self.elements.last()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, E> {
        self.elements.iter()
    }

    pub fn map<F, T>(&self, f: F) -> Chain<T>
    where
        F: FnMut(&E) -> T,
    {
        Chain::new(self.elements.iter().map(f).collect())
    }
}

impl<'a, E> IntoIterator for &'a Chain<E> {
    type Item = &'a E;
    type IntoIter = std::slice::Iter<'a, E>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl<E: fmt::Display> fmt::Display for Chain<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(" < ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Saturated (ranks step by one) and `rank(min) + rank(max) == total_rank`.
pub fn is_symmetric_chain<E: Ranked>(c: &Chain<E>, total_rank: usize) -> Result<bool> {
    let (Some(lo), Some(hi)) = (c.min(), c.max()) else {
        return Err(Error::EmptyChain);
    };
    let saturated = c
        .elements
        .windows(2)
        .all(|w| w[1].rank() == w[0].rank() + 1);
    Ok(saturated && lo.rank() + hi.rank() == total_rank)
}

/// An element of a product poset `P x Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair<A, B>(pub A, pub B);

impl<A: Ranked, B: Ranked> Ranked for Pair<A, B> {
    fn rank(&self) -> usize {
        self.0.rank() + self.1.rank()
    }
}

impl<A: fmt::Display, B: fmt::Display> fmt::Display for Pair<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.0, self.1)
    }
}

/// Which poset a decomposition claims to partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Context {
    /// `B_n` itself.
    Boolean { n: usize },
    /// `B_n / G` for a group given in cycle notation.
    Quotient { n: usize, group: String },
    /// `B_n / {1, rho}`; `involution` lists the transpositions of `rho`.
    Reflection { n: usize, involution: String },
    /// `C^m / <phi^r>` for the `k`-element chain `C`.
    ChainPower { k: usize, m: usize, r: usize },
    /// Product of chain powers, each modulo its own cyclic coordinate group.
    ChainProduct { factors: Vec<ChainFactor> },
    /// `P x Q`.
    Product(Box<Context>, Box<Context>),
}

impl Context {
    pub fn total_rank(&self) -> usize {
        match self {
            Context::Boolean { n } | Context::Quotient { n, .. } | Context::Reflection { n, .. } => *n,
            Context::ChainPower { k, m, .. } => (k - 1) * m,
            Context::ChainProduct { factors } => factors.iter().map(|f| f.total_rank()).sum(),
            Context::Product(p, q) => p.total_rank() + q.total_rank(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Context::Boolean { .. } => "boolean",
            Context::Quotient { .. } => "quotient",
            Context::Reflection { .. } => "reflection",
            Context::ChainPower { .. } => "chainpower",
            Context::ChainProduct { .. } | Context::Product(..) => "product",
        }
    }
}

/// A family of chains claimed to partition a ranked poset into symmetric chains.
///
/// Chains are kept sorted by the rank of their minimum, then by the minimum
/// element itself, so two equal decompositions always serialize identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<E> {
    context: Context,
    chains: Vec<Chain<E>>,
}

impl<E: Ranked + Ord + Clone> Decomposition<E> {
    pub fn new(context: Context, mut chains: Vec<Chain<E>>) -> Result<Self> {
        if chains.iter().any(Chain::is_empty) {
            return Err(Error::EmptyChain);
        }
        chains.sort_by(|a, b| {
            let (a, b) = (&a.elements[0], &b.elements[0]);
            a.rank().cmp(&b.rank()).then_with(|| a.cmp(b))
        });
        Ok(Decomposition { context, chains })
    }

    /// Rewrites every element, re-sorting the chains for the new element order.
    pub fn map_elements<T, F>(&self, context: Context, mut f: F) -> Result<Decomposition<T>>
    where
        T: Ranked + Ord + Clone,
        F: FnMut(&E) -> T,
    {
        let chains = self.chains.iter().map(|c| c.map(&mut f)).collect();
        Decomposition::new(context, chains)
    }
}

impl<E> Decomposition<E> {
    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn total_rank(&self) -> usize {
        self.context.total_rank()
    }

    pub fn chains(&self) -> &[Chain<E>] {
        &self.chains
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }

    pub fn element_count(&self) -> usize {
        self.chains.iter().map(Chain::len).sum()
    }

    /// Chain sizes, largest first.
    pub fn chain_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.chains.iter().map(Chain::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    pub(crate) fn with_context(self, context: Context) -> Self {
        Decomposition {
            context,
            chains: self.chains,
        }
    }
}

impl<E: Ranked + Hash + Eq + fmt::Display> Decomposition<E> {
    /// Checks what can be checked without the ambient poset: every chain is
    /// saturated and symmetric, and no element appears twice.
    pub fn self_check(&self) -> Result<()> {
        let total = self.total_rank();
        let mut seen = HashSet::with_capacity(self.element_count());
        for c in &self.chains {
            if !is_symmetric_chain(c, total)? {
                return Err(Error::invalid(format!(
                    "chain {c} is not symmetric in a poset of rank {total}"
                )));
            }
            for e in c {
                if !seen.insert(e) {
                    return Err(Error::invalid(format!("element {e} lies on two chains")));
                }
            }
        }
        Ok(())
    }
}

/// A saturated chain of cells in the grid `{0..a} x {0..b}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridChain {
    pub cells: Vec<(usize, usize)>,
}

impl GridChain {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// The hook partition of the product of a chain of length `a` with one of length `b`.
///
/// Chain `i` climbs the second coordinate from `(i, 0)` up to `(i, b - i)` and then
/// the first coordinate up to `(a, b - i)`, so its ranks run from `i` to `a + b - i`.
pub fn hook_chains(a: usize, b: usize) -> Vec<GridChain> {
    (0..=a.min(b))
        .map(|i| {
            let top = b - i;
            let mut cells = Vec::with_capacity(a + b - 2 * i + 1);
            cells.extend((0..=top).map(|y| (i, y)));
            cells.extend((i + 1..=a).map(|x| (x, top)));
            GridChain { cells }
        })
        .collect()
}

/// Symmetric chain decomposition of `P x Q` from decompositions of the factors.
///
/// Each pair of chains `(c, d)` spans a grid, which [`hook_chains`] splits
/// into symmetric chains of the product.
pub fn product_scd<A, B>(p: &Decomposition<A>, q: &Decomposition<B>) -> Result<Decomposition<Pair<A, B>>>
where
    A: Ranked + Ord + Clone + Hash + fmt::Display,
    B: Ranked + Ord + Clone + Hash + fmt::Display,
{
    p.self_check()?;
    q.self_check()?;
    let mut chains = Vec::new();
    for c in p.chains() {
        for d in q.chains() {
            for hook in hook_chains(c.len() - 1, d.len() - 1) {
                chains.push(Chain::new(
                    hook.cells
                        .iter()
                        .map(|&(x, y)| Pair(c.elements[x].clone(), d.elements[y].clone()))
                        .collect(),
                ));
            }
        }
    }
    let context = Context::Product(Box::new(p.context.clone()), Box::new(q.context.clone()));
    Decomposition::new(context, chains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::Subset;
    use proptest::prelude::*;

    fn s(xs: &[u32]) -> Subset {
        Subset::from_elements(xs.iter().copied(), 8).unwrap()
    }

    fn boolean_1() -> Decomposition<Subset> {
        Decomposition::new(
            Context::Boolean { n: 1 },
            vec![Chain::new(vec![s(&[]), s(&[1])])],
        )
        .unwrap()
    }

    fn boolean_2() -> Decomposition<Subset> {
        Decomposition::new(
            Context::Boolean { n: 2 },
            vec![
                Chain::new(vec![s(&[]), s(&[1]), s(&[1, 2])]),
                Chain::singleton(s(&[2])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn symmetric_chain_predicate() {
        let full = Chain::new(vec![s(&[]), s(&[1]), s(&[1, 2])]);
        assert!(is_symmetric_chain(&full, 2).unwrap());
        assert!(is_symmetric_chain(&Chain::singleton(s(&[1, 3])), 4).unwrap());
        let short = Chain::new(vec![s(&[1]), s(&[1, 2])]);
        assert!(!is_symmetric_chain(&short, 4).unwrap());
        let gap = Chain::new(vec![s(&[]), s(&[1, 2])]);
        assert!(!is_symmetric_chain(&gap, 2).unwrap());
        let empty: Chain<Subset> = Chain::new(vec![]);
        assert_eq!(is_symmetric_chain(&empty, 2), Err(Error::EmptyChain));
    }

    #[test]
    fn hook_examples() {
        assert_eq!(hook_chains(0, 0), vec![GridChain { cells: vec![(0, 0)] }]);
        assert_eq!(
            hook_chains(1, 1),
            vec![
                GridChain { cells: vec![(0, 0), (0, 1), (1, 1)] },
                GridChain { cells: vec![(1, 0)] },
            ]
        );
        let h = hook_chains(2, 1);
        assert_eq!(h.len(), 2);
        assert_eq!(h.iter().map(GridChain::len).sum::<usize>(), 6);
        for c in &h {
            let lo = c.cells[0].0 + c.cells[0].1;
            let hi = c.cells.last().map(|&(x, y)| x + y).unwrap();
            assert_eq!(lo + hi, 3);
        }
    }

    #[test]
    fn product_of_two_b1_is_b2() {
        let d = product_scd(&boolean_1(), &boolean_1()).unwrap();
        assert_eq!(d.chain_sizes(), vec![3, 1]);
        assert_eq!(d.total_rank(), 2);
    }

    #[test]
    fn product_with_point_is_identity() {
        let point = Decomposition::new(Context::Boolean { n: 0 }, vec![Chain::singleton(Subset::EMPTY)]).unwrap();
        let q = boolean_2();
        let d = product_scd(&point, &q).unwrap();
        let back: Vec<Vec<Subset>> = d
            .chains()
            .iter()
            .map(|c| c.iter().map(|p| p.1).collect())
            .collect();
        let orig: Vec<Vec<Subset>> = q.chains().iter().map(|c| c.elements().to_vec()).collect();
        assert_eq!(back, orig);
    }

    #[test]
    fn product_of_two_b2() {
        let d = product_scd(&boolean_2(), &boolean_2()).unwrap();
        assert_eq!(d.chain_sizes(), vec![5, 3, 3, 3, 1, 1]);
        assert_eq!(d.element_count(), 16);
        d.self_check().unwrap();
        // brute-force: every pair of B_2 x B_2 exactly once
        let mut all: Vec<(u64, u64)> = d.chains().iter().flat_map(|c| c.iter().map(|p| (p.0.bits(), p.1.bits()))).collect();
        all.sort_unstable();
        let expected: Vec<(u64, u64)> = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).collect();
        assert_eq!(all, expected);
    }

    #[test]
    fn product_rejects_broken_input() {
        let bad = Decomposition::new(Context::Boolean { n: 2 }, vec![Chain::new(vec![s(&[1]), s(&[1, 2])])]).unwrap();
        assert!(matches!(product_scd(&bad, &boolean_1()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn decomposition_sorting_is_canonical() {
        let d = Decomposition::new(
            Context::Boolean { n: 2 },
            vec![Chain::singleton(s(&[2])), Chain::new(vec![s(&[]), s(&[1]), s(&[1, 2])])],
        )
        .unwrap();
        assert_eq!(d.chains()[0].min(), Some(&Subset::EMPTY));
    }

    proptest! {
        #[test]
        fn hook_chains_partition_grid(a in 0usize..=8, b in 0usize..=8) {
            let chains = hook_chains(a, b);
            prop_assert_eq!(chains.len(), a.min(b) + 1);
            let mut seen = HashSet::new();
            for c in &chains {
                for w in c.cells.windows(2) {
                    let (p, q) = (w[0], w[1]);
                    prop_assert!(p.0 <= q.0 && p.1 <= q.1);
                    prop_assert_eq!(q.0 + q.1, p.0 + p.1 + 1);
                }
                let lo = c.cells[0].0 + c.cells[0].1;
                let hi = c.cells.last().map(|&(x, y)| x + y).unwrap();
                prop_assert_eq!(lo + hi, a + b);
                for &cell in &c.cells {
                    prop_assert!(cell.0 <= a && cell.1 <= b);
                    prop_assert!(seen.insert(cell));
                }
            }
            prop_assert_eq!(seen.len(), (a + 1) * (b + 1));
        }

        #[test]
        fn product_chain_count_matches_middle_rank(sizes_p in proptest::collection::vec(0usize..6, 1..4),
                                                   sizes_q in proptest::collection::vec(0usize..6, 1..4)) {
            // abstract chains of integers: chain j of P has elements (j, level)
            let rank_p = 2 * sizes_p.iter().max().unwrap();
            let rank_q = 2 * sizes_q.iter().max().unwrap();
            let dp = abstract_scd(&sizes_p, rank_p, 0);
            let dq = abstract_scd(&sizes_q, rank_q, 1);
            let d = product_scd(&dp, &dq).unwrap();
            d.self_check().unwrap();
            let expected: usize = dp.chains().iter()
                .flat_map(|c| dq.chains().iter().map(move |e| c.len().min(e.len())))
                .sum();
            prop_assert_eq!(d.chain_count(), expected);
            prop_assert_eq!(d.element_count(), dp.element_count() * dq.element_count());
            let middle = (rank_p + rank_q) / 2;
            let at_middle = d.chains().iter().flat_map(|c| c.iter()).filter(|e| e.rank() == middle).count();
            prop_assert_eq!(at_middle, d.chain_count());
        }
    }

    #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
    struct Tagged(usize, usize, usize);

    impl Ranked for Tagged {
        fn rank(&self) -> usize {
            self.2
        }
    }

    impl fmt::Display for Tagged {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{}:{}:{}", self.0, self.1, self.2)
        }
    }

    /// Chain `j` has `2 * half_j + 1` elements centred on `total / 2`.
    fn abstract_scd(halves: &[usize], total: usize, tag: usize) -> Decomposition<Tagged> {
        let chains = halves
            .iter()
            .enumerate()
            .map(|(j, &h)| {
                let lo = total / 2 - h;
                Chain::new((lo..=total - lo).map(|r| Tagged(tag * 100 + j, r, r)).collect())
            })
            .collect();
        let ctx = Context::Boolean { n: total };
        Decomposition::new(ctx, chains).unwrap()
    }
}
