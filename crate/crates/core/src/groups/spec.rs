//! Groups generated by powers of disjoint cycles, written in cycle notation.
//!
//! Grammar (integers are 1-based, whitespace separated):
//!
//! ```text
//! spec := term+
//! term := '(' int+ ')' ('^' uint)?
//! ```

use std::fmt;

use super::perm::{MaskPermuter, Perm};
use crate::error::{Error, Result};
use crate::subset::{low_mask, Subset, MAX_GROUND_SET};

/// Enumerating more group elements than this is refused.
pub const GROUP_ORDER_LIMIT: u128 = 1_000_000;

/// One generator `cycle^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleFactor {
    pub cycle: Vec<u32>,
    pub exponent: u32,
}

impl CycleFactor {
    pub fn new(cycle: Vec<u32>, exponent: u32) -> Self {
        CycleFactor { cycle, exponent }
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// `gcd(exponent, L)`; equal to `L` when the power is the identity.
    pub fn step(&self) -> usize {
        gcd(self.exponent as usize, self.len())
    }

    pub fn is_identity(&self) -> bool {
        self.step() == self.len()
    }

    /// Order of `cycle^exponent`.
    pub fn order(&self) -> usize {
        self.len() / self.step()
    }

    /// `cycle^step`, which generates the same cyclic group as `cycle^exponent`.
    pub fn generator(&self, n: usize) -> Perm {
        Perm::from_cycles(n, &[self.cycle.as_slice()]).pow(self.step() as u64)
    }

    pub fn support(&self) -> Subset {
        self.cycle.iter().fold(Subset::EMPTY, |s, &x| s.with(x))
    }
}

/// The subgroup of `S_n` generated by powers of pairwise disjoint cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    n: usize,
    factors: Vec<CycleFactor>,
}

impl GroupSpec {
    pub fn new(n: usize, factors: Vec<CycleFactor>) -> Result<Self> {
        if n > MAX_GROUND_SET {
            return Err(Error::guard("n", n as u128, MAX_GROUND_SET as u128));
        }
        let mut seen = Subset::EMPTY;
        for f in &factors {
            if f.cycle.is_empty() {
                return Err(Error::invalid("empty cycle"));
            }
            for &x in &f.cycle {
                if x == 0 || x as usize > n {
                    return Err(Error::ElementOutOfRange { element: x, n });
                }
                if seen.contains(x) {
                    return Err(Error::CyclesNotDisjoint(x));
                }
                seen = seen.with(x);
            }
        }
        Ok(GroupSpec { n, factors })
    }

    pub fn trivial(n: usize) -> Self {
        GroupSpec { n, factors: Vec::new() }
    }

    /// `<σ^s>` for `σ = (1 2 ... n)`.
    pub fn rotation(n: usize, s: usize) -> Self {
        GroupSpec {
            n,
            factors: vec![CycleFactor::new((1..=n as u32).collect(), s as u32)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[CycleFactor] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(CycleFactor::is_identity)
    }

    /// The non-identity generators `ρ_j`.
    pub fn generators(&self) -> Vec<Perm> {
        self.factors
            .iter()
            .filter(|f| !f.is_identity())
            .map(|f| f.generator(self.n))
            .collect()
    }

    /// `|G|`, the product of the generator orders.
    pub fn order(&self) -> u128 {
        self.factors
            .iter()
            .map(|f| f.order() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    /// Every element of `G`, as products `ρ_1^{i_1} ... ρ_t^{i_t}`.
    pub fn elements(&self) -> Result<Vec<Perm>> {
        let order = self.order();
        if order > GROUP_ORDER_LIMIT {
            return Err(Error::guard("group order", order, GROUP_ORDER_LIMIT));
        }
        let mut out = vec![Perm::identity(self.n)];
        for g in self.generators() {
            let powers: Vec<Perm> = std::iter::successors(Some(g.clone()), |p| {
                let next = g.compose(p);
                (!next.is_identity()).then_some(next)
            })
            .collect();
            let mut next = Vec::with_capacity(out.len() * (powers.len() + 1));
            for h in &out {
                next.push(h.clone());
                for p in &powers {
                    next.push(p.compose(h));
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// A comparison key identifying the generated group.
    pub fn group_key(&self) -> GroupKey {
        let mut parts: Vec<Vec<Perm>> = self
            .generators()
            .into_iter()
            .map(|g| {
                let mut cyc: Vec<Perm> = std::iter::successors(Some(g.clone()), |p| {
                    let next = g.compose(p);
                    (!next.is_identity()).then_some(next)
                })
                .collect();
                cyc.sort();
                cyc
            })
            .collect();
        parts.sort();
        GroupKey { n: self.n, parts }
    }
}

/// Compares generated groups rather than their spellings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupKey {
    n: usize,
    parts: Vec<Vec<Perm>>,
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("(")?;
            for (j, x) in factor.cycle.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
            if factor.exponent != 1 {
                write!(f, "^{}", factor.exponent)?;
            }
        }
        Ok(())
    }
}

/// Parses cycle notation such as `"(1 2 3 4)^2 (5 6)"` over `[n]`.
pub fn parse_group_spec(text: &str, n: usize) -> Result<GroupSpec> {
    let mut p = Parser { text, pos: 0 };
    let mut factors = Vec::new();
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("expected '('"));
    }
    while !p.at_end() {
        p.expect('(')?;
        let mut cycle = Vec::new();
        loop {
            p.skip_ws();
            match p.peek() {
                Some(')') => break,
                Some(c) if c.is_ascii_digit() => {
                    if !cycle.is_empty() && !p.preceded_by_ws() {
                        return Err(p.error("expected whitespace between elements"));
                    }
                    cycle.push(p.uint()?);
                }
                Some(c) => return Err(p.error(&format!("unexpected character {c:?}"))),
                None => return Err(p.error("unterminated cycle")),
            }
        }
        if cycle.is_empty() {
            return Err(p.error("empty cycle"));
        }
        p.expect(')')?;
        p.skip_ws();
        let exponent = if p.peek() == Some('^') {
            p.pos += 1;
            p.skip_ws();
            p.uint()?
        } else {
            1
        };
        factors.push(CycleFactor::new(cycle, exponent));
        p.skip_ws();
    }
    GroupSpec::new(n, factors)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn preceded_by_ws(&self) -> bool {
        self.text[..self.pos]
            .chars()
            .next_back()
            .is_some_and(char::is_whitespace)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(&format!("expected {want:?}, found {c:?}"))),
            None => Err(self.error(&format!("expected {want:?}, found end of input"))),
        }
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        let digits = self.text[start..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        self.pos += digits;
        self.text[start..self.pos].parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "integer too large".into(),
        })
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }
}

/// A cycle power relabeled onto `[L]` so that the cycle reads `(1 2 ... L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedCycle {
    /// `support[i]` is the original point relabeled to `i + 1`.
    pub support: Vec<u32>,
    /// A divisor `s` of `L` with `<σ^s>` equal to the original cyclic group.
    pub step: usize,
    pub len: usize,
}

impl NormalizedCycle {
    /// Sends a subset of the original points to `[L]`.
    pub fn to_local(&self, global: Subset) -> Subset {
        self.support
            .iter()
            .enumerate()
            .filter(|(_, &x)| global.contains(x))
            .fold(Subset::EMPTY, |s, (i, _)| s.with(i as u32 + 1))
    }

    /// Sends a subset of `[L]` back to the original points.
    pub fn to_global(&self, local: Subset) -> Subset {
        local
            .elements()
            .fold(Subset::EMPTY, |s, i| s.with(self.support[i as usize - 1]))
    }
}

pub fn normalize_cycle_power(factor: &CycleFactor) -> NormalizedCycle {
    NormalizedCycle {
        support: factor.cycle.clone(),
        step: factor.step(),
        len: factor.len(),
    }
}

/// `[n]` split into the common fixed points `X_0` and the supports `X_j` of the
/// non-identity generators, each with its normalized local cycle power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub fixed: Subset,
    pub factors: Vec<(Subset, NormalizedCycle)>,
}

pub fn factorize(n: usize, group: &GroupSpec) -> Factorization {
    let mut moved = Subset::EMPTY;
    let mut factors = Vec::new();
    for f in group.factors().iter().filter(|f| !f.is_identity()) {
        moved = moved.union(f.support());
        factors.push((f.support(), normalize_cycle_power(f)));
    }
    Factorization {
        fixed: Subset::full(n).difference(moved),
        factors,
    }
}

/// An orbit `[A]`, identified by its numerically smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub rep: Subset,
    pub size: usize,
    pub members: Option<Vec<Subset>>,
}

/// Closure of `{s}` under the generators of `group`.
pub fn orbit(s: Subset, group: &GroupSpec) -> Orbit {
    let gens: Vec<MaskPermuter> = group.generators().iter().map(MaskPermuter::new).collect();
    let mut members = vec![s.bits()];
    let mut i = 0;
    while i < members.len() {
        let x = members[i];
        for g in &gens {
            let y = g.apply(x);
            if !members.contains(&y) {
                members.push(y);
            }
        }
        i += 1;
    }
    members.sort_unstable();
    Orbit {
        rep: Subset(members[0]),
        size: members.len(),
        members: Some(members.into_iter().map(Subset).collect()),
    }
}

/// Number of orbits of `G` on `B_n`: `(1/|G|) Σ_g 2^{#cycles(g)}`.
pub fn burnside_count(n: usize, group: &GroupSpec) -> Result<u128> {
    if group.n() != n {
        return Err(Error::invalid(format!(
            "group acts on [{}], not on [{n}]",
            group.n()
        )));
    }
    let elements = group.elements()?;
    let total: u128 = elements.iter().map(|g| 1u128 << g.cycle_count()).sum();
    Ok(total / elements.len() as u128)
}

/// Minimal-mask canonicalization using the direct-product structure of `G`.
#[derive(Clone, Debug)]
pub struct OrbitCanon {
    factors: Vec<(u64, MaskPermuter, usize)>,
}

impl OrbitCanon {
    pub fn new(group: &GroupSpec) -> Self {
        let factors = group
            .factors()
            .iter()
            .filter(|f| !f.is_identity())
            .map(|f| (f.support().bits(), MaskPermuter::new(&f.generator(group.n())), f.order()))
            .collect();
        OrbitCanon { factors }
    }

    /// The least mask in the orbit of `s`. The orbit is a product of per-factor
    /// orbits on disjoint bit ranges, so the minimum is taken factor by factor.
    pub fn canonical(&self, s: Subset) -> Subset {
        let mut out = s.bits();
        for (support, g, order) in &self.factors {
            let part = s.bits() & support;
            let mut best = part;
            let mut cur = part;
            for _ in 1..*order {
                cur = g.apply(cur);
                best = best.min(cur);
            }
            out = (out & !support) | best;
        }
        Subset(out)
    }
}

/// `<σ^s>` on `B_n` for `σ = (1 2 ... n)`, acting by bit rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rotation {
    n: usize,
    step: usize,
}

impl Rotation {
    /// `s` is replaced by `gcd(s, n)`.
    pub fn new(n: usize, s: usize) -> Self {
        Rotation {
            n,
            step: gcd(s, n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn order(&self) -> usize {
        if self.n == 0 {
            1
        } else {
            self.n / self.step
        }
    }

    /// `σ^step(mask)`.
    #[inline]
    pub fn rotate(&self, mask: u64) -> u64 {
        let (n, s) = (self.n, self.step);
        if s == 0 || s >= n {
            return mask;
        }
        ((mask << s) | (mask >> (n - s))) & low_mask(n)
    }

    #[inline]
    pub fn canonical(&self, mask: u64) -> u64 {
        let mut best = mask;
        let mut cur = mask;
        for _ in 1..self.order() {
            cur = self.rotate(cur);
            best = best.min(cur);
        }
        best
    }
}

/// An involution given as a product of disjoint transpositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    n: usize,
    pairs: Vec<(u32, u32)>,
}

impl Involution {
    /// Every factor must be a transposition with odd exponent.
    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        let mut pairs = Vec::new();
        for f in spec.factors() {
            if f.len() != 2 || f.exponent % 2 == 0 {
                return Err(Error::invalid(format!(
                    "{spec} is not a product of disjoint transpositions"
                )));
            }
            pairs.push((f.cycle[0], f.cycle[1]));
        }
        if pairs.is_empty() {
            return Err(Error::invalid("an involution needs at least one transposition"));
        }
        Ok(Involution { n: spec.n(), pairs })
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        Involution::from_spec(&parse_group_spec(text, n)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn support(&self) -> Subset {
        self.pairs
            .iter()
            .fold(Subset::EMPTY, |s, &(a, b)| s.with(a).with(b))
    }

    pub fn to_perm(&self) -> Perm {
        let cycles: Vec<[u32; 2]> = self.pairs.iter().map(|&(a, b)| [a, b]).collect();
        Perm::from_cycles(self.n, &cycles)
    }

    /// `{1, ρ}` written as `(a_1 ... a_k b_1 ... b_k)^k`, whose `k`-th power is `ρ`.
    pub fn as_group_spec(&self) -> GroupSpec {
        let k = self.pairs.len();
        let cycle = self
            .pairs
            .iter()
            .map(|p| p.0)
            .chain(self.pairs.iter().map(|p| p.1))
            .collect();
        GroupSpec {
            n: self.n,
            factors: vec![CycleFactor::new(cycle, k as u32)],
        }
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.pairs {
            write!(f, "({a} {b})")?;
        }
        Ok(())
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
