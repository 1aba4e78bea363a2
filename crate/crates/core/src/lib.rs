//! Exact symbolic engine for the differential invariants of linear ODEs
//! in the canonical form `y^(n) + a_3 y^(n-3) + ... + a_n y = 0`.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere in the verdict paths. The crate is organised
//! around five layers:
//!
//! * [`diffpoly`] - the differential polynomial ring in jet variables,
//!   with total derivatives and the weight grading.
//! * [`ratfunc`] - quotients of differential polynomials, the value type
//!   of absolute invariants and transformed coefficients.
//! * [`liesym`] - equivalence-group machinery: vector fields, prolongation,
//!   the semi-invariance checker, index inference, the ansatz solver and
//!   rank-based invariant counting.
//! * [`halphen`] - the generative machinery: phi/chi constructions,
//!   indefinite invariant sequences, the order-5 catalog, fundamental sets
//!   and invariant differentiation.
//! * [`transform`] - finite structure-preserving transformations
//!   `x = xi(z), y = eta(z) w`: transformed coefficients, the Schwarzian
//!   derivative, the transformation-law verifier and the independently
//!   induced infinitesimal generator.
//!
//! [`expr`] and [`emit`] provide the text front-end (parser, text/LaTeX/JSON
//! emitters) shared by the CLI and the Python bindings; [`report`] assembles
//! the deterministic catalog report.

pub mod diffpoly;
pub mod emit;
pub mod error;
pub mod expr;
pub mod halphen;
pub mod jet;
pub mod linalg;
pub mod liesym;
pub mod ratfunc;
pub mod report;
pub mod transform;

pub use diffpoly::{Deriv, DiffPoly, Monomial, Weight};
pub use error::{Error, Result};
pub use jet::JetVar;
pub use ratfunc::RatFunc;

/// Arbitrary-precision rational scalar used throughout the engine.
pub type Rat = num::BigRational;

/// Default cap on jet orders reachable by prolongation and sequence
/// generation; exceeding it is a reported limit error, never silent
/// truncation.
pub const DEFAULT_MAX_JET_ORDER: u32 = 12;

/// Convenience constructor for small rational constants.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Convenience constructor for integer constants.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}
