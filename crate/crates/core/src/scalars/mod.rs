//! Exact coefficients.
//!
//! Every coefficient in the crate lives in
//! `ℚ[μ₁…μₙ, a, b, λ, c][(μ·α)⁻¹ : α ≠ 0]`: polynomials in the generic
//! vector `μ`, the density parameters `a, b`, the highest weight `λ` and the
//! central charge `c`, with denominators restricted to products of the
//! nonzero linear forms `μ·α`. Treating the `μᵢ` as independent
//! indeterminates realizes genericity exactly: `μ·α` is a nonzero polynomial
//! for every `α ≠ 0`.

mod monomial;
mod parse;
mod polynomial;
mod rational;
mod scalar;

pub use monomial::{Monomial, Var, MAX_MU};
pub use polynomial::Polynomial;
pub use rational::{ParseRationalError, Rational};
pub use scalar::{LinearForm, Scalar};

use crate::lattice::LatticePoint;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("linear form μ·0 is not invertible")]
    ZeroForm,
    #[error("denominator μ·{0} vanishes under the assignment")]
    DenominatorVanishes(LatticePoint),
    #[error("no value assigned to {0}")]
    MissingVariable(Var),
    #[error("cannot divide by `{0}`: not a constant times a linear form μ·α")]
    NonFormDivisor(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution specializes only part of the denominator form μ·{0}")]
    PartialFormSubstitution(LatticePoint),
    #[error("parse error: {0}")]
    Parse(String),
}

/// `x + y`.
pub fn scalar_add(x: &Scalar, y: &Scalar) -> Scalar {
    x + y
}

/// `x · y`.
pub fn scalar_mul(x: &Scalar, y: &Scalar) -> Scalar {
    x * y
}

/// `x / (μ·α)`.
pub fn divide_by_form(x: &Scalar, f: &LinearForm) -> Scalar {
    x.divide_by_form(f)
}

/// Exact value of `x` under a total assignment of its indeterminates.
pub fn evaluate(x: &Scalar, assignment: &std::collections::BTreeMap<Var, Rational>) -> Result<Rational, ScalarError> {
    x.evaluate(assignment)
}
