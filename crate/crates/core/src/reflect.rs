//! `B_n / {1, ρ}` for an involution `ρ` made of disjoint transpositions.
//!
//! After splitting off the fixed points and relabeling so that
//! `ρ = (1 2k)(2 2k−1)...(k k+1)`, a subset of `[2k]` is read as a pair of
//! `k`-bit strings `b1 b2^r`, and `ρ` swaps the two halves. Fix an SCD
//! `C_1, ..., C_t` of `B_k`. Ordering half strings by chain index and then by
//! containment picks one pair from each orbit; these pairs split into blocks
//! `P_ij = C_i × C_j` (`i < j`) and triangles `P_ii`, each of which has an
//! explicit symmetric chain decomposition.

use crate::error::{ensure_within, Error, Result};
use crate::gk::{gk_scd, GkScd};
use crate::groups::{quotient_poset, Involution, QUOTIENT_LIMIT};
use crate::order::{hook_chains, product_scd, Chain, Context, Decomposition, GridChain, Pair};
use crate::prune::{boolean_on, quotient_scd};
use crate::subset::{Ranked, Subset};
use crate::verify::verify_decomposition;

/// A `k`-bit string together with its place in the chosen SCD of `B_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfString {
    pub bits: Subset,
    pub chain: usize,
    pub position: usize,
}

impl HalfString {
    pub fn new(scd: &GkScd, bits: Subset) -> Self {
        let (chain, position) = scd.locate(bits);
        HalfString { bits, chain, position }
    }
}

/// The total order on half strings: earlier chain first, containment within a chain.
pub fn precedes(x: &HalfString, y: &HalfString) -> bool {
    x.chain < y.chain || (x.chain == y.chain && x.bits.is_subset_of(y.bits))
}

/// One block `P_ij` of representative pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PBlock {
    pub i: usize,
    pub j: usize,
    pub cells: Vec<Pair<Subset, Subset>>,
}

impl PBlock {
    pub fn is_diagonal(&self) -> bool {
        self.i == self.j
    }

    pub fn min_rank(&self) -> usize {
        self.cells.iter().map(Ranked::rank).min().unwrap_or(0)
    }

    pub fn max_rank(&self) -> usize {
        self.cells.iter().map(Ranked::rank).max().unwrap_or(0)
    }
}

/// All `t(t+1)/2` blocks for `i <= j`, in `(i, j)` order.
pub fn build_blocks(scd: &GkScd) -> Vec<PBlock> {
    let chains = scd.chains();
    let mut out = Vec::with_capacity(chains.len() * (chains.len() + 1) / 2);
    for (i, ci) in chains.iter().enumerate() {
        for (j, cj) in chains.iter().enumerate().skip(i) {
            let cells = ci
                .iter()
                .flat_map(|&a| cj.iter().map(move |&b| Pair(a, b)))
                .filter(|p| i != j || p.0.is_subset_of(p.1))
                .collect();
            out.push(PBlock { i, j, cells });
        }
    }
    out
}

/// Symmetric chains of the triangle `{(p, q) : 0 <= p <= q <= l}`.
///
/// Peels `(d,d) < (d,d+1) < ... < (d,l−d) < (d+1,l−d) < ... < (l−d,l−d)` for
/// `d = 0, 1, ...`; what remains after each peel is the same triangle two
/// ranks shorter.
pub fn peel_triangle(l: usize) -> Vec<GridChain> {
    let mut out = Vec::with_capacity(l / 2 + 1);
    let mut d = 0;
    while 2 * d <= l {
        let top = l - d;
        let mut cells: Vec<(usize, usize)> = (d..=top).map(|q| (d, q)).collect();
        cells.extend((d + 1..=top).map(|p| (p, top)));
        out.push(GridChain { cells });
        d += 1;
    }
    out
}

/// Decomposes a diagonal block `P_ii` by repeated peeling.
pub fn scd_of_diagonal_block(block: &PBlock, scd: &GkScd) -> Result<Vec<Chain<Pair<Subset, Subset>>>> {
    if !block.is_diagonal() {
        return Err(Error::invalid(format!("block P_{},{} is not diagonal", block.i, block.j)));
    }
    let c = scd.chain(block.i).elements();
    Ok(peel_triangle(c.len() - 1)
        .into_iter()
        .map(|g| Chain::new(g.cells.iter().map(|&(p, q)| Pair(c[p], c[q])).collect()))
        .collect())
}

fn off_diagonal_chains(scd: &GkScd, i: usize, j: usize) -> Vec<Chain<Pair<Subset, Subset>>> {
    let (ci, cj) = (scd.chain(i).elements(), scd.chain(j).elements());
    hook_chains(ci.len() - 1, cj.len() - 1)
        .into_iter()
        .map(|g| Chain::new(g.cells.iter().map(|&(x, y)| Pair(ci[x], cj[y])).collect()))
        .collect()
}

/// `b1 b2^r` as a subset of `[2k]`: `b1` fills `1..=k`, and element `j` of
/// `b2` lands on `2k + 1 − j`.
pub fn concat_reversed(k: usize, b1: Subset, b2: Subset) -> Subset {
    b2.elements()
        .fold(b1, |acc, j| acc.with(2 * k as u32 + 1 - j))
}

/// Symmetric chains of `B_{2k} / {1, ρ_k}` as representative pairs, where
/// `ρ_k = (1 2k)(2 2k−1)...(k k+1)`.
pub fn standard_reflection_chains(scd: &GkScd) -> Vec<Chain<Pair<Subset, Subset>>> {
    let t = scd.chain_count();
    let mut chains = Vec::new();
    for i in 0..t {
        let diag = PBlock { i, j: i, cells: Vec::new() };
        chains.extend(scd_of_diagonal_block(&diag, scd).expect("diagonal"));
        for j in i + 1..t {
            chains.extend(off_diagonal_chains(scd, i, j));
        }
    }
    chains
}

/// Symmetric chain decomposition of `B_n / {1, ρ}` built from blocks of pairs
/// of half strings, verified against the quotient.
pub fn reflection_scd(n: usize, rho: &Involution) -> Result<Decomposition<Subset>> {
    ensure_within("n", n, QUOTIENT_LIMIT)?;
    if rho.n() != n {
        return Err(Error::invalid(format!("involution acts on [{}], not on [{n}]", rho.n())));
    }
    let k = rho.pairs().len();
    // local label i <-> a_i, local label 2k + 1 - i <-> b_i
    let mut global_of = vec![0u32; 2 * k];
    for (i, &(a, b)) in rho.pairs().iter().enumerate() {
        global_of[i] = a;
        global_of[2 * k - 1 - i] = b;
    }
    let to_global = |local: Subset| {
        local
            .elements()
            .fold(Subset::EMPTY, |acc, x| acc.with(global_of[x as usize - 1]))
    };

    let scd = gk_scd(k)?;
    let moved_chains: Vec<Chain<Subset>> = standard_reflection_chains(&scd)
        .iter()
        .map(|c| c.map(|p| to_global(concat_reversed(k, p.0, p.1))))
        .collect();
    let moved = Decomposition::new(Context::Boolean { n: 2 * k }, moved_chains)?;

    let fixed: Vec<u32> = rho.support().complement(n).elements().collect();
    let joined = product_scd(&boolean_on(&fixed)?, &moved)?;
    let g = rho.to_perm();
    let context = Context::Reflection {
        n,
        involution: rho.to_string(),
    };
    let d = joined.map_elements(context, |p| {
        let x = p.0.union(p.1);
        x.min(g.apply(x))
    })?;

    let target = quotient_poset(n, &rho.as_group_spec())?;
    verify_decomposition(&target, &d)?.into_result()?;
    Ok(d)
}

/// The same quotient through the cyclic-pruning route: `{1, ρ}` is generated
/// by the `k`-th power of a `2k`-cycle.
pub fn reflection_scd_via_cycle(n: usize, rho: &Involution) -> Result<Decomposition<Subset>> {
    let d = quotient_scd(n, &rho.as_group_spec())?;
    Ok(d.with_context(Context::Reflection {
        n,
        involution: rho.to_string(),
    }))
}
