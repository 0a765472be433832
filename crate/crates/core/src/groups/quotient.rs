use std::fmt::Write as _;

use super::perm::MaskPermuter;
use super::spec::{GroupSpec, Orbit};
use crate::error::{ensure_within, Error, Result};
use crate::subset::{Ranked, Subset};

/// Largest `n` for which the whole quotient `B_n / G` is materialized.
pub const QUOTIENT_LIMIT: usize = 22;

/// `B_n / G` with every orbit enumerated.
///
/// Orbits are discovered by closing each not-yet-seen mask (in ascending
/// order) under the generators, so orbit `i` is the one with the `i`-th
/// smallest representative and the representative is the minimal member.
#[derive(Clone, Debug)]
pub struct QuotientPoset {
    n: usize,
    group: GroupSpec,
    orbit_of: Vec<u32>,
    reps: Vec<u64>,
    member_offsets: Vec<usize>,
    members: Vec<u64>,
    by_rank: Vec<Vec<u32>>,
}

pub fn quotient_poset(n: usize, group: &GroupSpec) -> Result<QuotientPoset> {
    ensure_within("n", n, QUOTIENT_LIMIT)?;
    if group.n() != n {
        return Err(Error::invalid(format!(
            "group acts on [{}], not on [{n}]",
            group.n()
        )));
    }
    let gens: Vec<MaskPermuter> = group.generators().iter().map(MaskPermuter::new).collect();
    let size = 1usize << n;
    let mut orbit_of = vec![u32::MAX; size];
    let mut reps = Vec::new();
    let mut member_offsets = vec![0];
    let mut members = Vec::with_capacity(size);
    let mut by_rank = vec![Vec::new(); n + 1];
    for start in 0..size as u64 {
        if orbit_of[start as usize] != u32::MAX {
            continue;
        }
        let idx = reps.len() as u32;
        let first = members.len();
        orbit_of[start as usize] = idx;
        members.push(start);
        let mut i = first;
        while i < members.len() {
            let x = members[i];
            for g in &gens {
                let y = g.apply(x);
                if orbit_of[y as usize] == u32::MAX {
                    orbit_of[y as usize] = idx;
                    members.push(y);
                }
            }
            i += 1;
        }
        members[first..].sort_unstable();
        member_offsets.push(members.len());
        reps.push(start);
        by_rank[start.count_ones() as usize].push(idx);
    }
    Ok(QuotientPoset {
        n,
        group: group.clone(),
        orbit_of,
        reps,
        member_offsets,
        members,
        by_rank,
    })
}

impl QuotientPoset {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn orbit_count(&self) -> usize {
        self.reps.len()
    }

    /// Index of the orbit containing `s`.
    #[inline]
    pub fn index_of(&self, s: Subset) -> usize {
        self.orbit_of[s.bits() as usize] as usize
    }

    #[inline]
    pub fn rep_of(&self, s: Subset) -> Subset {
        Subset(self.reps[self.index_of(s)])
    }

    pub fn rep(&self, idx: usize) -> Subset {
        Subset(self.reps[idx])
    }

    /// Whether `s` is the canonical representative of its orbit.
    pub fn is_rep(&self, s: Subset) -> bool {
        s.fits(self.n) && self.rep_of(s) == s
    }

    pub fn members(&self, idx: usize) -> impl ExactSizeIterator<Item = Subset> + '_ {
        self.members[self.member_offsets[idx]..self.member_offsets[idx + 1]]
            .iter()
            .map(|&m| Subset(m))
    }

    pub fn orbit(&self, idx: usize) -> Orbit {
        Orbit {
            rep: self.rep(idx),
            size: self.member_offsets[idx + 1] - self.member_offsets[idx],
            members: Some(self.members(idx).collect()),
        }
    }

    /// Orbit indices of each rank.
    pub fn by_rank(&self) -> &[Vec<u32>] {
        &self.by_rank
    }

    pub fn rank_counts(&self) -> Vec<usize> {
        self.by_rank.iter().map(Vec::len).collect()
    }

    /// `[a] ≤ [b]` iff some `g ∈ G` has `g(a) ⊆ b`. The smaller orbit is
    /// scanned and compared against a fixed member of the other.
    pub fn leq(&self, a: Subset, b: Subset) -> bool {
        if a.rank() > b.rank() {
            return false;
        }
        let (ia, ib) = (self.index_of(a), self.index_of(b));
        if self.members(ia).len() <= self.members(ib).len() {
            self.members(ia).any(|x| x.is_subset_of(b))
        } else {
            self.members(ib).any(|y| a.is_subset_of(y))
        }
    }

    /// Cover pairs `(lower, upper)` of orbit indices.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.n {
            for &lo in &self.by_rank[r] {
                for &hi in &self.by_rank[r + 1] {
                    if self.leq(self.rep(lo as usize), self.rep(hi as usize)) {
                        out.push((lo as usize, hi as usize));
                    }
                }
            }
        }
        out
    }

    /// Hasse diagram in DOT, bottom to top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quotient {\n  rankdir=BT;\n  node [shape=box];\n");
        for (r, row) in self.by_rank.iter().enumerate() {
            let _ = write!(out, "  {{ rank=same;");
            for &i in row {
                let _ = write!(out, " o{i};");
            }
            let _ = writeln!(out, " }} // rank {r}");
        }
        for i in 0..self.orbit_count() {
            let _ = writeln!(
                out,
                "  o{i} [label=\"{} ({})\"];",
                self.rep(i).binary_string(self.n),
                self.members(i).len()
            );
        }
        for (lo, hi) in self.covers() {
            let _ = writeln!(out, "  o{lo} -> o{hi};");
        }
        out.push_str("}\n");
        out
    }
}
