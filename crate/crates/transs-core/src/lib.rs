//! Exact computer-algebra kernel for real, grid-based transseries.
//!
//! Values are finite sums of transmonomials x^b e^L (recursively nested,
//! possibly composed with iterated logarithms) with arbitrary-precision
//! rational coefficients, truncated under an explicit O-term bound. On top
//! of the ordered-field arithmetic sit differentiation, exp/log/powers,
//! composition, antiderivatives, and a contraction fixed-point solver.

pub mod calculus;
pub mod error;
pub mod foundations;
pub mod grid;
pub mod integrate;
pub mod monomial;
pub mod numeric;
pub mod rational;
pub mod series;
pub mod solve;

pub use calculus::TaylorBudget;
pub use error::{Error, Result};
pub use foundations::{IndexOrder, MultiIndex};
pub use grid::{Grid, RatioSet};
pub use monomial::{HeightDepth, Monomial};
pub use rational::Rat;
pub use series::{Bound, Classification, FarOrd, Series};
pub use solve::IterationPolicy;
