//! Greene–Kleitman bracketing and the symmetric chain decomposition of `B_n` it induces.
//!
//! Reading a subset left to right, a non-member opens a bracket and a member
//! closes the most recent open one. Closed pairs are frozen along a chain;
//! the successor map fills the leftmost free slot, the predecessor map
//! empties the rightmost filled free slot.

use crate::error::{ensure_within, Error, Result};
use crate::order::{Chain, Context, Decomposition};
use crate::subset::{low_mask, Ranked, Subset, ENUMERATION_LIMIT};

/// The bracketing of a subset `A` of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    n: usize,
    set: Subset,
    /// `partner[x - 1] = p_A(x)` for paired members `x`.
    partner: Vec<Option<u32>>,
    paired_members: Subset,
    paired_nonmembers: Subset,
}

impl Pairing {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&self) -> Subset {
        self.set
    }

    /// `p_A(x)`, when defined.
    pub fn partner_of(&self, x: u32) -> Option<u32> {
        self.partner.get(x as usize - 1).copied().flatten()
    }

    /// `R(A)`: members that are paired.
    pub fn r(&self) -> Subset {
        self.paired_members
    }

    /// `L(A)`: non-members that are paired.
    pub fn l(&self) -> Subset {
        self.paired_nonmembers
    }

    /// `P(A) = R(A) ∪ L(A)`.
    pub fn p(&self) -> Subset {
        self.paired_members.union(self.paired_nonmembers)
    }

    /// `(p_A(x), x)` for every `x ∈ R(A)`, ascending in `x`.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.paired_members
            .elements()
            .map(move |x| (self.partner[x as usize - 1].unwrap(), x))
    }

    fn from_partners(n: usize, set: Subset, partner: Vec<Option<u32>>) -> Pairing {
        let mut r = Subset::EMPTY;
        let mut l = Subset::EMPTY;
        for (i, p) in partner.iter().enumerate() {
            if let Some(j) = *p {
                r = r.with(i as u32 + 1);
                l = l.with(j);
            }
        }
        Pairing {
            n,
            set,
            partner,
            paired_members: r,
            paired_nonmembers: l,
        }
    }
}

/// Left-to-right scan: each member `k` is paired with the largest unpaired non-member `j < k`.
pub fn pairing(a: Subset, n: usize) -> Pairing {
    debug_assert!(a.fits(n));
    let mut open: Vec<u32> = Vec::with_capacity(n);
    let mut partner = vec![None; n];
    for k in 1..=n as u32 {
        if a.contains(k) {
            if let Some(j) = open.pop() {
                partner[k as usize - 1] = Some(j);
            }
        } else {
            open.push(k);
        }
    }
    Pairing::from_partners(n, a, partner)
}

/// The interval characterization: `p_A(x)` is the largest `y < x` such that
/// exactly half of `[y, x]` lies in `A`.
pub fn pairing_by_intervals(a: Subset, n: usize) -> Pairing {
    debug_assert!(a.fits(n));
    let mut partner = vec![None; n];
    for x in a.elements() {
        let mut inside = 1usize;
        for y in (1..x).rev() {
            if a.contains(y) {
                inside += 1;
            }
            let len = (x - y + 1) as usize;
            if 2 * inside == len {
                partner[x as usize - 1] = Some(y);
                break;
            }
        }
    }
    Pairing::from_partners(n, a, partner)
}

/// `(R(A), L(A))` as raw masks without building a [`Pairing`].
#[inline]
pub(crate) fn paired_masks(a: u64, n: usize) -> (u64, u64) {
    let mut open = [0u8; 64];
    let mut depth = 0usize;
    let mut r = 0u64;
    let mut l = 0u64;
    for bit in 0..n {
        if a >> bit & 1 == 1 {
            if depth > 0 {
                depth -= 1;
                r |= 1 << bit;
                l |= 1 << open[depth];
            }
        } else {
            open[depth] = bit as u8;
            depth += 1;
        }
    }
    (r, l)
}

#[inline]
fn successor_mask(a: u64, n: usize) -> Option<u64> {
    let (_, l) = paired_masks(a, n);
    let free = low_mask(n) & !(a | l);
    (free != 0).then(|| a | (free & free.wrapping_neg()))
}

#[inline]
fn predecessor_mask(b: u64, n: usize) -> Option<u64> {
    let (r, _) = paired_masks(b, n);
    let free = b & !r;
    (free != 0).then(|| b & !(1u64 << (63 - free.leading_zeros())))
}

/// `f(A) = A ∪ {min([n] − (A ∪ L(A)))}`, or `None` at the top of a chain.
pub fn successor(a: Subset, n: usize) -> Option<Subset> {
    successor_mask(a.bits(), n).map(Subset)
}

/// `f⁻¹(B) = B − {max(B − R(B))}`, or `None` at the bottom of a chain.
pub fn predecessor(b: Subset, n: usize) -> Option<Subset> {
    predecessor_mask(b.bits(), n).map(Subset)
}

/// The Greene–Kleitman chain through `a`, found by walking `f⁻¹` down and `f` up.
pub fn chain_of(a: Subset, n: usize) -> Chain<Subset> {
    let mut bottom = a.bits();
    while let Some(b) = predecessor_mask(bottom, n) {
        bottom = b;
    }
    Chain::new(walk_up(bottom, n))
}

fn walk_up(bottom: u64, n: usize) -> Vec<Subset> {
    let mut elements = Vec::with_capacity(n + 1 - 2 * bottom.count_ones() as usize);
    let mut cur = Some(bottom);
    while let Some(x) = cur {
        elements.push(Subset(x));
        cur = successor_mask(x, n);
    }
    elements
}

/// The Greene–Kleitman decomposition of `B_n`, chains ordered by decreasing
/// length and then by the mask of their minimum.
#[derive(Clone, Debug)]
pub struct GkScd {
    n: usize,
    chains: Vec<Chain<Subset>>,
    chain_index: Vec<u32>,
}

impl GkScd {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chains(&self) -> &[Chain<Subset>] {
        &self.chains
    }

    pub fn chain(&self, id: usize) -> &Chain<Subset> {
        &self.chains[id]
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }

    /// 0-based id of the chain containing `x`.
    #[inline]
    pub fn chain_id(&self, x: Subset) -> usize {
        self.chain_index[x.bits() as usize] as usize
    }

    /// `(chain id, position within chain)` of `x`.
    pub fn locate(&self, x: Subset) -> (usize, usize) {
        let id = self.chain_id(x);
        (id, x.rank() - self.chains[id].elements()[0].rank())
    }

    pub fn to_decomposition(&self) -> Decomposition<Subset> {
        Decomposition::new(Context::Boolean { n: self.n }, self.chains.clone())
            .expect("chains are nonempty")
    }
}

/// Builds the Greene–Kleitman SCD of `B_n` for `1 <= n <= 28`.
pub fn gk_scd(n: usize) -> Result<GkScd> {
    if n == 0 {
        return Err(Error::invalid("gk_scd needs n >= 1"));
    }
    ensure_within("n", n, ENUMERATION_LIMIT)?;
    let size = 1usize << n;
    // chain minima are exactly the fully bracketed subsets, R(A) = A
    let mut minima: Vec<u64> = (0..size as u64)
        .filter(|&a| paired_masks(a, n).0 == a)
        .collect();
    minima.sort_by_key(|&a| (a.count_ones(), a));

    let mut chain_index = vec![u32::MAX; size];
    let mut chains = Vec::with_capacity(minima.len());
    for (id, &bottom) in minima.iter().enumerate() {
        let elements = walk_up(bottom, n);
        for x in &elements {
            chain_index[x.bits() as usize] = id as u32;
        }
        chains.push(Chain::new(elements));
    }
    debug_assert!(chain_index.iter().all(|&i| i != u32::MAX));
    Ok(GkScd {
        n,
        chains,
        chain_index,
    })
}

/// `X*`: the element of the symmetric chain `c` at rank `n − |X|`.
pub fn partner(x: Subset, c: &Chain<Subset>, n: usize) -> Result<Subset> {
    if !c.elements().contains(&x) {
        return Err(Error::NotInChain(x.to_string()));
    }
    let want = n - x.rank();
    c.iter()
        .copied()
        .find(|e| e.rank() == want)
        .ok_or_else(|| Error::invalid(format!("chain {c} is not symmetric in B_{n}")))
}
