//! Arithmetic in the truncated local ring `O/p^j` of the `p`-th cyclotomic integers,
//! its Galois automorphisms, and equivariant alternating maps on it.
//!
//! Elements are kept in canonical `kappa`-adic form where `kappa = theta - 1` is the
//! uniformizer. The digit string of an element doubles as the exponent string of the
//! corresponding element of `P_1` in a group of maximal class.

mod alpha;
pub mod reference;
mod ring;
mod solve;

pub use alpha::{check_parameters, choose_a, pair_count, pair_index, AlphaKind, AlphaMap};
pub use ring::{is_prime, CycElement, CycRing};
pub use solve::{alpha_solve, AlphaSolution, AlphaSolutions};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    #[error("precision mismatch: ring is (p={}, j={}), element is (p={}, j={})", expected.0, expected.1, found.0, found.1)]
    PrecisionMismatch {
        expected: (u32, usize),
        found: (u32, usize),
    },
    #[error("element is not divisible by kappa")]
    NotDivisible,
    #[error("residue {residue} is divisible by p = {p}")]
    BadResidue { residue: i64, p: u32 },
    #[error("the canonical commutator map needs p >= 5, got p = {0}")]
    UnsupportedPrime(u32),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("invalid commutator table: {0}")]
    InvalidAlpha(String),
}
