//! Exact pseudo-boolean polynomials, the variable registry, and reduction to
//! quadratic form.

mod polynomial;
mod qubo;
mod reduce;
mod registry;

pub use polynomial::{Assignment, Coeff, Monomial, Polynomial};
pub use qubo::{Qubo, Substitution};
pub use reduce::{pair_penalty, reduce_to_quadratic};
pub use registry::{Role, VarId, VarInfo, VariableRegistry};

use num_bigint::BigInt;

/// Shorthand for an integer-valued coefficient.
pub fn int(v: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Coeff {
    Coeff::new(BigInt::from(num), BigInt::from(den))
}
