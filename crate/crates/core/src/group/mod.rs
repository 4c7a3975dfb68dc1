//! Finite matrix groups over cyclotomic fields presented by generators.

mod bsgs;
mod closure;
mod file;
mod fp;
mod generated;
mod matrix;

pub use bsgs::{BsgsOptions, ChainElement, StabChain, Tracked};
pub use closure::{enumerate, enumerate_exact, Closure, ClosureLimits};
pub use file::GroupFile;
pub use fp::{ElemKey, FpMat, KeyCodec};
pub use generated::{
    permutation_group_order, GeneratedGroup, GroupOptions, GroupSummary, Reduced, Strategy, Tier, TIER1_MAX, TIER2_MAX,
};
pub use matrix::CycloMatrix;

use thiserror::Error;

use crate::arith::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("no generators given")]
    NoGenerators,
    #[error("generators have mismatched dimensions")]
    DimensionMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("generator {index} does not have finite order")]
    NonFiniteOrder { index: usize },
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("faithfulness suspect: primes {p1} and {p2} give orders {o1} and {o2}")]
    FaithfulnessSuspect { p1: u64, p2: u64, o1: u128, o2: u128 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}
