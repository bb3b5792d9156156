//! Exact computations in the solenoidal Witt and Virasoro algebras.
//!
//! The rank-`n` algebra has basis `E(α)`, `α ∈ ℤⁿ`, plus a central `c`.
//! The entries of `μ` are kept as indeterminates, so results hold for
//! generic `μ`. Coefficients are [`Scalar`]s: polynomials over ℚ divided by
//! products of linear forms `μ·α`.
//!
//! - [`algebra`]: brackets, the Jacobi identity, the rank-one subalgebras.
//! - [`cocycle`]: 2-cochains, coboundaries, normalization of cocycles.
//! - [`density`]: tensor-density modules `T(a,b)`.
//! - [`verma`] and [`gvm`]: induced modules, built on [`induced`].
//!
//! ```
//! use solvir::algebra::{vir_bracket, AlgebraElement};
//!
//! let x: AlgebraElement = "e[2]".parse().unwrap();
//! let y: AlgebraElement = "e[-2]".parse().unwrap();
//! let z = vir_bracket(&x, &y).unwrap();
//! assert_eq!(z.to_string(), "-4*mu1*e[0] + ((4*mu1^3-mu1)/6)*c");
//! ```

pub mod algebra;
pub mod cocycle;
pub mod density;
pub mod gvm;
pub mod induced;
pub mod lattice;
pub mod linalg;
pub mod scalars;
mod text;
pub mod verma;

pub use lattice::{box_points, lex_compare, LatticeError, LatticePoint};
pub use scalars::{LinearForm, Monomial, Polynomial, Rational, Scalar, ScalarError, Var};
