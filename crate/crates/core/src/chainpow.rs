//! Symmetric chain decompositions of `C^m / K`, where `C` is a `k`-element
//! chain and `K` rotates coordinates.
//!
//! A level tuple `(l_1, ..., l_m)` is embedded into `B_{(k−1)m}` by writing
//! each `l_i` as the block `1^{l_i} 0^{k−1−l_i}`. The image is a sublattice
//! that every Greene–Kleitman chain either lies in or misses entirely, and a
//! coordinate rotation by `r` becomes `σ^{(k−1)r}` on masks, so restricting
//! the pruned family of `B_{(k−1)m} / <σ^{(k−1)r}>` gives the decomposition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gk::gk_scd;
use crate::groups::{gcd, QUOTIENT_LIMIT};
use crate::order::{product_scd, Chain, Context, Decomposition};
use crate::prune::prune_chains;
use crate::subset::{Ranked, Subset};
use crate::verify::verify_decomposition;

/// Largest number of level tuples `chainproduct_scd` will enumerate.
pub const TUPLE_LIMIT: u128 = 1 << 22;

/// A tuple of levels, one per coordinate.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Levels(pub Vec<u8>);

impl Levels {
    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise `<=`.
    pub fn dominated_by(&self, other: &Levels) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn concat(&self, other: &Levels) -> Levels {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Levels(v)
    }
}

impl Ranked for Levels {
    fn rank(&self) -> usize {
        self.0.iter().map(|&l| l as usize).sum()
    }
}

impl fmt::Display for Levels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

/// `C^m` for a `k`-element chain, modulo rotation of coordinates by `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainFactor {
    pub k: usize,
    pub m: usize,
    pub r: usize,
}

impl ChainFactor {
    pub fn new(k: usize, m: usize, r: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("chain size must be at least 2, got {k}")));
        }
        if m == 0 {
            return Err(Error::invalid("multiplicity must be at least 1"));
        }
        if k > u8::MAX as usize + 1 {
            return Err(Error::guard("chain size", k as u128, u8::MAX as u128 + 1));
        }
        Ok(ChainFactor { k, m, r })
    }

    pub fn total_rank(&self) -> usize {
        (self.k - 1) * self.m
    }

    /// The normalized rotation step `gcd(r, m)`; `m` when the group is trivial.
    pub fn step(&self) -> usize {
        gcd(self.r, self.m)
    }

    /// `|K| = m / gcd(r, m)`.
    pub fn group_order(&self) -> usize {
        self.m / self.step()
    }

    /// `k^m`.
    pub fn tuple_count(&self) -> u128 {
        (self.k as u128).saturating_pow(self.m as u32)
    }

    /// Orbit count of level tuples under `K`, by averaging fixed points.
    pub fn burnside_count(&self) -> u128 {
        let d = self.step();
        let total: u128 = (0..self.group_order())
            .map(|j| (self.k as u128).pow(gcd(j * d, self.m) as u32))
            .sum();
        total / self.group_order() as u128
    }

    /// The lexicographically least rotation of `levels` by a multiple of the step.
    pub fn canonical(&self, levels: &[u8]) -> Levels {
        let d = self.step();
        (0..self.group_order())
            .map(|j| rotate(levels, j * d))
            .min()
            .map(Levels)
            .unwrap_or_default()
    }
}

impl fmt::Display for ChainFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.k, self.m, self.r)
    }
}

impl FromStr for ChainFactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parse {
            pos: 0,
            msg: format!("expected K:M or K:M:R, got {s:?}"),
        };
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad());
        }
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let r = if parts.len() == 3 { num(parts[2])? } else { 0 };
        ChainFactor::new(num(parts[0])?, num(parts[1])?, r)
    }
}

fn rotate(levels: &[u8], by: usize) -> Vec<u8> {
    let m = levels.len();
    (0..m).map(|i| levels[(i + by) % m]).collect()
}

fn check_width(b: Subset, n: usize) -> Result<()> {
    if b.fits(n) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{b} is not a subset of [{n}]")))
    }
}

/// Whether every `(k−1)`-bit block of `b` has the form `1^j 0^{k−1−j}`.
pub fn in_chain_power(b: Subset, n: usize, k: usize, m: usize) -> Result<bool> {
    if k < 2 || (k - 1) * m != n {
        return Err(Error::invalid(format!(
            "a {k}-chain to the power {m} does not live in B_{n}"
        )));
    }
    check_width(b, n)?;
    Ok(mask_to_levels(b, k, m).is_some())
}

/// The embedded mask of a level tuple.
pub fn levels_to_mask(levels: &[u8], k: usize) -> Subset {
    let w = k - 1;
    let bits = levels
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &l)| acc | (((1u64 << l) - 1) << (i * w)));
    Subset(bits)
}

/// The level tuple of an embedded mask, or `None` if some block is not monotone.
pub fn mask_to_levels(b: Subset, k: usize, m: usize) -> Option<Levels> {
    let w = k - 1;
    let block_mask = (1u64 << w) - 1;
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let block = (b.bits() >> (i * w)) & block_mask;
        if block & (block + 1) != 0 {
            return None;
        }
        out.push(block.count_ones() as u8);
    }
    Some(Levels(out))
}

/// Symmetric chain decomposition of `C^m / <φ^r>` for a `k`-element chain `C`.
pub fn chainpower_scd(k: usize, m: usize, r: usize) -> Result<Decomposition<Levels>> {
    let factor = ChainFactor::new(k, m, r)?;
    let d = restricted_scd(&factor)?;
    let target = ChainProductPoset::new(vec![factor])?;
    verify_decomposition(&target, &d)?.into_result()?;
    Ok(d)
}

fn restricted_scd(f: &ChainFactor) -> Result<Decomposition<Levels>> {
    let n = f.total_rank();
    if n > QUOTIENT_LIMIT {
        return Err(Error::guard("(k-1)m", n as u128, QUOTIENT_LIMIT as u128));
    }
    let family = prune_chains(&gk_scd(n)?, (f.k - 1) * f.step())?;
    let chains: Vec<Chain<Levels>> = family
        .selected()
        .iter()
        .map(|p| {
            let kept = p
                .chain
                .iter()
                .filter_map(|&x| mask_to_levels(x, f.k, f.m))
                .map(|l| f.canonical(&l.0))
                .collect();
            Chain::new(kept)
        })
        .filter(|c: &Chain<Levels>| !c.is_empty())
        .collect();
    Decomposition::new(Context::ChainPower { k: f.k, m: f.m, r: f.r }, chains)
}

/// A Greene–Kleitman chain that meets the embedded `C^m` without lying inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DichotomyViolation {
    pub chain: usize,
    pub inside: Subset,
    pub outside: Subset,
}

/// 0-based ids of the Greene–Kleitman chains of `B_{(k−1)m}` that lie in `C^m`,
/// or the first chain that straddles it.
pub fn chains_inside(k: usize, m: usize) -> Result<std::result::Result<Vec<usize>, DichotomyViolation>> {
    let f = ChainFactor::new(k, m, 0)?;
    let n = f.total_rank();
    if n > QUOTIENT_LIMIT {
        return Err(Error::guard("(k-1)m", n as u128, QUOTIENT_LIMIT as u128));
    }
    let scd = gk_scd(n)?;
    let mut inside_ids = Vec::new();
    for (id, c) in scd.chains().iter().enumerate() {
        let (mut inside, mut outside) = (None, None);
        for &x in c.iter() {
            let slot = if mask_to_levels(x, k, m).is_some() { &mut inside } else { &mut outside };
            slot.get_or_insert(x);
        }
        match (inside, outside) {
            (Some(i), Some(o)) => {
                return Ok(Err(DichotomyViolation {
                    chain: id,
                    inside: i,
                    outside: o,
                }))
            }
            (Some(_), None) => inside_ids.push(id),
            _ => {}
        }
    }
    Ok(Ok(inside_ids))
}

/// Whether every Greene–Kleitman chain of `B_{(k−1)m}` lies inside `C^m` or misses it.
pub fn check_dichotomy(k: usize, m: usize) -> Result<bool> {
    Ok(chains_inside(k, m)?.is_ok())
}

/// Symmetric chain decomposition of a product of chain powers, each modulo
/// its own coordinate rotation. Tuples are the concatenation of the factor tuples.
pub fn chainproduct_scd(factors: &[ChainFactor]) -> Result<Decomposition<Levels>> {
    let target = ChainProductPoset::new(factors.to_vec())?;
    let mut acc: Option<Decomposition<Levels>> = None;
    for f in factors {
        let next = restricted_scd(f)?;
        acc = Some(match acc {
            None => next,
            Some(prev) => {
                let joined = product_scd(&prev, &next)?;
                joined.map_elements(joined.context().clone(), |p| p.0.concat(&p.1))?
            }
        });
    }
    let d = acc
        .expect("at least one factor")
        .with_context(Context::ChainProduct {
            factors: factors.to_vec(),
        });
    verify_decomposition(&target, &d)?.into_result()?;
    Ok(d)
}

/// `C_1^{m_1} × ... / (K_1 × ...)` as an explicit poset on canonical tuples.
#[derive(Clone, Debug)]
pub struct ChainProductPoset {
    factors: Vec<ChainFactor>,
    offsets: Vec<usize>,
}

impl ChainProductPoset {
    pub fn new(factors: Vec<ChainFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::invalid("a chain product needs at least one factor"));
        }
        for f in &factors {
            ChainFactor::new(f.k, f.m, f.r)?;
        }
        let tuples = factors
            .iter()
            .fold(1u128, |acc, f| acc.saturating_mul(f.tuple_count()));
        if tuples > TUPLE_LIMIT {
            return Err(Error::guard("level tuples", tuples, TUPLE_LIMIT));
        }
        let mut offsets = vec![0];
        for f in &factors {
            offsets.push(offsets.last().unwrap() + f.m);
        }
        Ok(ChainProductPoset { factors, offsets })
    }

    pub fn factors(&self) -> &[ChainFactor] {
        &self.factors
    }

    pub fn width(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn total_rank(&self) -> usize {
        self.factors.iter().map(ChainFactor::total_rank).sum()
    }

    fn segments<'a>(&'a self, t: &'a Levels) -> impl Iterator<Item = (&'a ChainFactor, &'a [u8])> + 'a {
        self.factors
            .iter()
            .enumerate()
            .map(move |(i, f)| (f, &t.0[self.offsets[i]..self.offsets[i + 1]]))
    }

    fn well_formed(&self, t: &Levels) -> bool {
        t.len() == self.width() && self.segments(t).all(|(f, s)| s.iter().all(|&l| (l as usize) < f.k))
    }

    pub fn canonical(&self, t: &Levels) -> Levels {
        Levels(self.segments(t).flat_map(|(f, s)| f.canonical(s).0).collect())
    }

    pub fn is_canonical(&self, t: &Levels) -> bool {
        self.well_formed(t) && self.canonical(t) == *t
    }

    /// Every canonical tuple, in lexicographic order.
    pub fn elements(&self) -> Vec<Levels> {
        let radices: Vec<u8> = self
            .factors
            .iter()
            .flat_map(|f| std::iter::repeat_n(f.k as u8, f.m))
            .collect();
        let mut cur = vec![0u8; radices.len()];
        let mut out = Vec::new();
        loop {
            let t = Levels(cur.clone());
            if self.canonical(&t) == t {
                out.push(t);
            }
            let mut i = cur.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < radices[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// `[a] <= [b]` iff some rotation of each segment of `b` dominates `a`.
    pub fn leq(&self, a: &Levels, b: &Levels) -> bool {
        if !self.well_formed(a) || !self.well_formed(b) {
            return false;
        }
        self.segments(a).zip(self.segments(b)).all(|((f, sa), (_, sb))| {
            let d = f.step();
            (0..f.group_order()).any(|j| {
                let rb = rotate(sb, j * d);
                sa.iter().zip(&rb).all(|(x, y)| x <= y)
            })
        })
    }

    pub fn burnside_count(&self) -> u128 {
        self.factors.iter().map(ChainFactor::burnside_count).product()
    }
}
