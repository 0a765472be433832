//! Permutation groups acting on `B_n`: generators, orbits, and quotient posets.

mod perm;
mod quotient;
mod spec;

pub use perm::{apply_perm, MaskPermuter, Perm};
pub use quotient::{quotient_poset, QuotientPoset, QUOTIENT_LIMIT};
pub use spec::{
    burnside_count, factorize, gcd, normalize_cycle_power, orbit, parse_group_spec, CycleFactor,
    Factorization, GroupKey, GroupSpec, Involution, NormalizedCycle, Orbit, OrbitCanon, Rotation,
    GROUP_ORDER_LIMIT,
};
