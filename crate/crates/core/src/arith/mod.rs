//! Exact arithmetic: cyclotomic fields `Q(ζ_m)` and their reductions to prime
//! fields.

mod cyclo;
mod literal;
mod modp;
mod ratmat;

pub use cyclo::{cyclotomic_polynomial, euler_phi, CyclotomicField, Cyclo};
pub use literal::{format_literal, parse_literal};
pub use modp::{
    find_reduction_prime, find_reduction_prime_capped, is_prime, mod_inv, mod_pow,
    ReductionMap, DEFAULT_PRIME_SEARCH_CAP,
};
pub(crate) use ratmat::solve_rational;

use num_rational::BigRational;
use thiserror::Error;

/// Arbitrary-precision rational number in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator is not invertible modulo {prime}")]
    NonInvertibleDenominator { prime: u64 },
    #[error("conductor {value} does not divide reduction conductor {map}")]
    ConductorMismatch { value: u32, map: u32 },
    #[error("no prime p = 1 mod {modulus} found in [{from}, {to}]")]
    PrimeSearchCap { modulus: u64, from: u64, to: u64 },
    #[error("element is not in the subfield of conductor {0}")]
    NotInSubfield(u32),
    #[error("invalid cyclotomic literal {input:?}: {reason}")]
    Parse { input: String, reason: String },
}
