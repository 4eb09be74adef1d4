pub mod cli;
pub mod cyclotomic;
pub mod group;
pub mod homology;
pub mod multiplier;
pub mod verify;
pub mod zlinalg;
