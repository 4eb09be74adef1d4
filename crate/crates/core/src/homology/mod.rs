//! Second homology and the Bogomolov multiplier of small finite groups from their
//! multiplication tables, via the normalized bar complex over the integers.

mod oracle;
mod table;

pub use oracle::{
    b0_oracle, b0_oracle_with, boundary2, boundary3, commuting_pair_cycles, literal_invariants,
    schur_multiplier, CycleVector, OracleOptions, OracleReport, FULL_PASS_LIMIT, LITERAL_CHECK_LIMIT,
};
pub use table::{prime_power, ElementSet, FiniteGroupTable};

/// Default largest group order accepted by the oracle.
pub const DEFAULT_ORACLE_CAP: usize = 243;
/// Orders above this need an explicit opt-in.
pub const LARGE_ORDER: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("group order {order} exceeds the cap {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("group order {order} is above {LARGE_ORDER}; large runs must be enabled explicitly")]
    LargeRunNotEnabled { order: usize },
    #[error("internal consistency check failed: {0}")]
    Invariant(String),
}
