//! Greedy pruning of the Greene–Kleitman decomposition into a symmetric chain
//! decomposition of `B_n / <σ^s>`, and the assembly of `B_n / G` for `G`
//! generated by powers of disjoint cycles.
//!
//! Chains are scanned in order. A chain is selected when one of its elements
//! lies in an orbit that no earlier selected chain reaches; the selected chain
//! is then cut down to the elements whose orbits are still uncovered. Orbit
//! invariance of the `X ↦ X*` pairing keeps every cut chain symmetric.

use crate::error::{ensure_within, Error, Result};
use crate::gk::{gk_scd, predecessor, GkScd};
use crate::groups::{factorize, quotient_poset, GroupSpec, OrbitCanon, Rotation, QUOTIENT_LIMIT};
use crate::order::{product_scd, Chain, Context, Decomposition};
use crate::subset::{Ranked, Subset};
use crate::verify::verify_decomposition;

/// Which union the selection test compares a candidate chain against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SelectionRule {
    /// Orbits touched by the full chosen chains `C_{i_1}, ..., C_{i_k}`.
    #[default]
    FullChains,
    /// Orbits touched by the pruned chains `C'_{i_1}, ..., C'_{i_k}`.
    PrunedChains,
}

/// A selected chain after pruning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedChain {
    /// 0-based id of the source chain in the Greene–Kleitman order.
    pub source: usize,
    pub chain: Chain<Subset>,
}

#[derive(Clone, Debug)]
pub struct PrunedFamily {
    n: usize,
    step: usize,
    selected: Vec<PrunedChain>,
    quotient_chains: Vec<Chain<Subset>>,
}

impl PrunedFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The normalized `s` with `H = <σ^s>`.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn selected(&self) -> &[PrunedChain] {
        &self.selected
    }

    /// The chains of orbit representatives, in selection order.
    pub fn quotient_chains(&self) -> &[Chain<Subset>] {
        &self.quotient_chains
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn to_decomposition(&self) -> Decomposition<Subset> {
        let group = GroupSpec::rotation(self.n, self.step).to_string();
        Decomposition::new(Context::Quotient { n: self.n, group }, self.quotient_chains.clone())
            .expect("pruned chains are nonempty")
    }
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn new(bits: usize) -> Self {
        Bitset(vec![0; bits.div_ceil(64)])
    }

    #[inline]
    fn get(&self, i: u64) -> bool {
        self.0[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: u64) -> bool {
        let w = &mut self.0[(i >> 6) as usize];
        let was = *w >> (i & 63) & 1 == 1;
        *w |= 1 << (i & 63);
        !was
    }
}

/// Prunes `scd` against `H = <σ^s>` with the selection test over full chains.
pub fn prune_chains(scd: &GkScd, s: usize) -> Result<PrunedFamily> {
    prune_chains_with(scd, s, SelectionRule::FullChains)
}

pub fn prune_chains_with(scd: &GkScd, s: usize, rule: SelectionRule) -> Result<PrunedFamily> {
    let n = scd.n();
    let rot = Rotation::new(n, s);
    let mut touched_full = Bitset::new(1 << n);
    let mut touched_pruned = Bitset::new(1 << n);
    let mut selected = Vec::new();
    let mut quotient_chains = Vec::new();

    for (id, chain) in scd.chains().iter().enumerate() {
        let reps: Vec<u64> = chain.iter().map(|x| rot.canonical(x.bits())).collect();
        let guard = match rule {
            SelectionRule::FullChains => &touched_full,
            SelectionRule::PrunedChains => &touched_pruned,
        };
        if !reps.iter().any(|&r| !guard.get(r)) {
            continue;
        }
        let keep: Vec<usize> = (0..reps.len()).filter(|&i| !touched_pruned.get(reps[i])).collect();
        if keep.is_empty() {
            return Err(Error::Internal(format!("chain {id} was selected but pruned to nothing")));
        }
        for &r in &reps {
            touched_full.set(r);
        }
        for &i in &keep {
            touched_pruned.set(reps[i]);
        }
        let elems = chain.elements();
        selected.push(PrunedChain {
            source: id,
            chain: Chain::new(keep.iter().map(|&i| elems[i]).collect()),
        });
        quotient_chains.push(Chain::new(keep.iter().map(|&i| Subset(reps[i])).collect()));
    }

    let family = PrunedFamily {
        n,
        step: rot.step(),
        selected,
        quotient_chains,
    };
    check_claim(scd, &family, &rot)?;
    Ok(family)
}

/// Re-checks the three properties of a pruned family: each pruned chain is a
/// symmetric run of its source, no orbit is met twice, and every orbit is met.
fn check_claim(scd: &GkScd, family: &PrunedFamily, rot: &Rotation) -> Result<()> {
    let n = family.n;
    for pc in &family.selected {
        if !is_symmetric_run(scd.chain(pc.source), &pc.chain, n) {
            return Err(Error::Internal(format!(
                "pruned chain {} from source {} is not symmetric",
                pc.chain, pc.source
            )));
        }
    }
    let mut seen = Bitset::new(1 << n);
    let mut distinct = 0usize;
    for pc in &family.selected {
        for x in &pc.chain {
            if !seen.set(rot.canonical(x.bits())) {
                return Err(Error::Internal(format!("orbit of {x} is met twice")));
            }
            distinct += 1;
        }
    }
    let orbits = (0..1u64 << n).filter(|&m| rot.canonical(m) == m).count();
    if distinct != orbits {
        return Err(Error::Internal(format!(
            "pruned chains meet {distinct} of {orbits} orbits"
        )));
    }
    Ok(())
}

/// `sub` is a nonempty contiguous run of `source` and symmetric in `B_n`.
fn is_symmetric_run(source: &Chain<Subset>, sub: &Chain<Subset>, n: usize) -> bool {
    let (Some(lo), Some(hi)) = (sub.min(), sub.max()) else {
        return false;
    };
    let Some(start) = source.elements().iter().position(|x| x == lo) else {
        return false;
    };
    source.elements().get(start..start + sub.len()) == Some(sub.elements())
        && lo.rank() + hi.rank() == n
        && *hi == source.elements()[start + sub.len() - 1]
}

/// Membership form of the closure property: for `Y ∈ C'` with `|Y| <= n/2`,
/// `Y* ∈ C'`, and every `Z` of the source chain with `Y ⊆ Z ⊆ Y*` is in `C'`.
pub fn closure_holds(source: &Chain<Subset>, pruned: &Chain<Subset>, n: usize) -> bool {
    let inside = |z: &Subset| pruned.elements().contains(z);
    pruned.iter().filter(|y| y.rank() <= n / 2).all(|y| {
        let Some(star) = source.iter().find(|z| z.rank() == n - y.rank()) else {
            return false;
        };
        inside(star)
            && source
                .iter()
                .filter(|z| y.is_subset_of(**z) && z.is_subset_of(*star))
                .all(inside)
    })
}

/// Symmetric chain decomposition of `B_n / <σ^s>` with `σ = (1 2 ... n)`.
///
/// `s` is replaced by `gcd(s, n)`; `s = n` is the trivial group and returns the
/// Greene–Kleitman decomposition itself.
pub fn quotient_scd_cyclic(n: usize, s: usize) -> Result<Decomposition<Subset>> {
    ensure_within("n", n, QUOTIENT_LIMIT)?;
    let scd = gk_scd(n)?;
    Ok(prune_chains(&scd, s)?.to_decomposition())
}

/// Symmetric chain decomposition of `B_n / G`, verified against the quotient.
///
/// The fixed points of `G` contribute a plain Boolean factor and each
/// non-identity generator a pruned necklace factor on its own support; the
/// factors are combined with [`product_scd`] in that order.
pub fn quotient_scd(n: usize, group: &GroupSpec) -> Result<Decomposition<Subset>> {
    let d = assemble_quotient_scd(n, group)?;
    let target = quotient_poset(n, group)?;
    verify_decomposition(&target, &d)?.into_result()?;
    Ok(d)
}

pub(crate) fn assemble_quotient_scd(n: usize, group: &GroupSpec) -> Result<Decomposition<Subset>> {
    ensure_within("n", n, QUOTIENT_LIMIT)?;
    if group.n() != n {
        return Err(Error::invalid(format!("group acts on [{}], not on [{n}]", group.n())));
    }
    let fac = factorize(n, group);
    let context = Context::Quotient {
        n,
        group: group.to_string(),
    };

    let fixed: Vec<u32> = fac.fixed.elements().collect();
    let mut acc = boolean_on(&fixed)?;
    for (_, cycle) in &fac.factors {
        let local = quotient_scd_cyclic(cycle.len, cycle.step)?;
        let global = local.map_elements(local.context().clone(), |x| cycle.to_global(*x))?;
        let joined = product_scd(&acc, &global)?;
        acc = joined.map_elements(joined.context().clone(), |p| p.0.union(p.1))?;
    }

    let canon = OrbitCanon::new(group);
    acc.map_elements(context, |x| canon.canonical(*x))
}

/// Greene–Kleitman decomposition of `B(X)` for `X = {points}`, in global labels.
pub(crate) fn boolean_on(points: &[u32]) -> Result<Decomposition<Subset>> {
    let context = Context::Boolean { n: points.len() };
    if points.is_empty() {
        return Decomposition::new(context, vec![Chain::singleton(Subset::EMPTY)]);
    }
    gk_scd(points.len())?.to_decomposition().map_elements(context, |x| {
        x.elements()
            .fold(Subset::EMPTY, |acc, i| acc.with(points[i as usize - 1]))
    })
}

/// A failure of the predecessor-mate property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MateViolation {
    /// 0-based chain of `a`.
    pub chain: usize,
    pub a: Subset,
    /// Earliest chain meeting the orbit of `a`.
    pub mate_chain: usize,
    pub predecessor: Subset,
    /// Earliest chain meeting the orbit of the predecessor.
    pub predecessor_mate_chain: usize,
}

/// Searches for `A ∈ C_w`, `|A| <= ⌈n/2⌉`, with an orbit-mate on an earlier
/// chain while no orbit-mate of `f⁻¹(A)` lies on a chain before `C_w`.
pub fn find_mate_violation(scd: &GkScd, s: usize) -> Option<MateViolation> {
    let n = scd.n();
    let rot = Rotation::new(n, s);
    let mut first_chain = vec![u32::MAX; 1 << n];
    for (id, chain) in scd.chains().iter().enumerate() {
        for x in chain {
            let r = rot.canonical(x.bits()) as usize;
            first_chain[r] = first_chain[r].min(id as u32);
        }
    }
    let bound = n.div_ceil(2);
    for (w, chain) in scd.chains().iter().enumerate() {
        for &a in chain.iter().filter(|a| a.rank() <= bound) {
            let mate = first_chain[rot.canonical(a.bits()) as usize] as usize;
            if mate >= w {
                continue;
            }
            if let Some(b) = predecessor(a, n) {
                let pm = first_chain[rot.canonical(b.bits()) as usize] as usize;
                if pm >= w {
                    return Some(MateViolation {
                        chain: w,
                        a,
                        mate_chain: mate,
                        predecessor: b,
                        predecessor_mate_chain: pm,
                    });
                }
            }
        }
    }
    None
}

pub fn check_predecessor_mates(scd: &GkScd, s: usize) -> bool {
    find_mate_violation(scd, s).is_none()
}
