use std::fmt;

use crate::subset::Subset;

/// A permutation of `[n]`, stored as 0-based images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    /// Product of 1-based cycles. Cycles are assumed disjoint and inside `[n]`.
    pub fn from_cycles<C: AsRef<[u32]>>(n: usize, cycles: &[C]) -> Perm {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for c in cycles {
            let c = c.as_ref();
            for (i, &x) in c.iter().enumerate() {
                images[x as usize - 1] = c[(i + 1) % c.len()] - 1;
            }
        }
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    #[inline]
    pub fn image(&self, x: u32) -> u32 {
        self.images[x as usize - 1] + 1
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn pow(&self, e: u64) -> Perm {
        let mut result = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = base.compose(&result);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Cycles including fixed points, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32 + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// `{g(x) : x ∈ s}`.
    pub fn apply(&self, s: Subset) -> Subset {
        let mut out = 0u64;
        for x in s.elements() {
            out |= 1u64 << self.images[x as usize - 1];
        }
        Subset(out)
    }
}

/// `{g(x) : x ∈ s}`.
pub fn apply_perm(g: &Perm, s: Subset) -> Subset {
    g.apply(s)
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let moved: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if moved.is_empty() {
            return f.write_str("()");
        }
        for c in moved {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Byte-sliced lookup tables applying a fixed permutation to masks.
#[derive(Clone, Debug)]
pub struct MaskPermuter {
    tables: Vec<[u64; 256]>,
}

impl MaskPermuter {
    pub fn new(g: &Perm) -> Self {
        let chunks = g.degree().div_ceil(8);
        let mut tables = vec![[0u64; 256]; chunks];
        for (chunk, table) in tables.iter_mut().enumerate() {
            for (byte, slot) in table.iter_mut().enumerate() {
                let mut out = 0u64;
                for bit in 0..8 {
                    let x = chunk * 8 + bit;
                    if byte >> bit & 1 == 1 && x < g.degree() {
                        out |= 1u64 << g.images[x];
                    }
                }
                *slot = out;
            }
        }
        MaskPermuter { tables }
    }

    #[inline]
    pub fn apply(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        for (i, t) in self.tables.iter().enumerate() {
            out |= t[(mask >> (8 * i)) as usize & 0xff];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(xs: &[u32]) -> Subset {
        Subset::from_elements(xs.iter().copied(), 8).unwrap()
    }

    #[test]
    fn apply_examples() {
        let sigma = Perm::from_cycles(4, &[[1, 2, 3, 4]]);
        assert_eq!(apply_perm(&sigma, s(&[1, 2])), s(&[2, 3]));
        assert_eq!(apply_perm(&sigma, s(&[4])), s(&[1]));
        let id = Perm::identity(4);
        assert_eq!(apply_perm(&id, s(&[1, 4])), s(&[1, 4]));
    }

    #[test]
    fn powers_and_cycles() {
        let sigma = Perm::from_cycles(6, &[[1, 2, 3, 4, 5, 6]]);
        assert_eq!(sigma.pow(2).cycle_count(), 2);
        assert_eq!(sigma.pow(3).to_string(), "(1 4)(2 5)(3 6)");
        assert!(sigma.pow(6).is_identity());
        assert_eq!(sigma.compose(&sigma.inverse()), Perm::identity(6));
    }

    #[test]
    fn mask_permuter_matches_apply() {
        let g = Perm::from_cycles(11, &[vec![1, 5, 9], vec![2, 11], vec![3, 4, 6, 7]]);
        let t = MaskPermuter::new(&g);
        for m in 0..1u64 << 11 {
            assert_eq!(t.apply(m), g.apply(Subset(m)).bits());
        }
    }
}
