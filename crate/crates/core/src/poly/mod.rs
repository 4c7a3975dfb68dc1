//! Homogeneous polynomials with cyclotomic coefficients, the linear action
//! `g·f = f∘g⁻¹`, and the monomial and lattice conditions attached to smooth
//! forms.

mod file;
mod lattice;
mod polynomial;

pub use file::{PolyFile, PolyTerm};
pub use lattice::{
    block_scalar_stabilizer, collapse_blocks, collapse_with_seed, diagonal_stabilizer,
    exponent_minor_bound, integer_det, smith_normal_form, CollapseReport, DiagonalStabilizer,
    MinorReport,
};
pub use polynomial::{
    act, avoids_variables, is_invariant, semi_invariant_character, smoothness_necessary,
    HomogPoly, Monomial, SmoothReport,
};

use thiserror::Error;

use crate::group::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("malformed polynomial: {0}")]
    Malformed(String),
    #[error("polynomial has no terms")]
    Empty,
    #[error("monomial of degree {found} in a form of degree {expected}")]
    NotHomogeneous { expected: u32, found: u32 },
    #[error("dimension mismatch: matrix is {matrix}x{matrix}, polynomial has {nvars} variables")]
    DimensionMismatch { matrix: usize, nvars: usize },
    #[error("exponent matrix has rank {rank} < {n}; the stabilizer is infinite")]
    RankDeficient { rank: usize, n: usize },
    #[error("no monomial x_{var}^d or x_{var}^(d-1) x_k")]
    NoWitness { var: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}
