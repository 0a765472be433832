//! Symmetric chain decompositions of Boolean lattices, their quotients by
//! groups generated by powers of disjoint cycles, and quotients of chain
//! powers by coordinate rotations, with a brute-force verifier.

pub mod chainpow;
pub mod cli;
pub mod doc;
pub mod error;
pub mod gk;
pub mod groups;
pub mod order;
pub mod prune;
pub mod reflect;
pub mod strategy;
pub mod subset;
pub mod verify;

pub use error::{Error, Result};
pub use subset::{Ranked, Subset};
