//! Multivariate Bernstein approximation of smooth functions in all
//! derivatives, with exact rational arithmetic wherever the input allows.
//!
//! * [`multiindex`]: multiindex orders, binomials, factorials.
//! * [`expr`]: expression trees, parsing, symbolic differentiation.
//! * [`polynomial`]: exact polynomials over ℚ, homotheties, interpolation,
//!   grid sup-norm estimates.
//! * [`bernstein`]: the Bernstein operators and their identities.
//! * [`approx`]: rational polynomial sequences converging locally uniformly
//!   in all derivatives.
//! * [`verify`]: independent oracles and convergence experiments.

mod dense;
pub mod error;
pub mod rational;

pub mod approx;
pub mod bernstein;
pub mod expr;
pub mod multiindex;
pub mod polynomial;
pub mod verify;

pub use error::{Error, Result};
pub use expr::Expression;
pub use multiindex::MultiIndex;
pub use polynomial::{Grid, Homothety, Polynomial};
