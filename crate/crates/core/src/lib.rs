//! Exact computer algebra for polynomial maps: Jacobian membership tests,
//! partial elimination of variables, the degree-reduction map and the
//! tree expansion of formal inverses.
//!
//! Coefficients are Gaussian rationals, so every identity is checked as an
//! exact polynomial identity.

pub mod coeff;
pub mod coupling;
pub mod elimination;
pub mod error;
pub mod family;
pub mod inverse;
pub mod io;
pub mod jacobian;
pub mod matrix;
pub mod poly;
pub mod qft;
pub mod reduction;
pub mod series;
pub mod verify;

pub use coeff::Coefficient;
pub use coupling::CouplingTensor;
pub use error::{Error, Result};
pub use poly::{Monomial, PolySystem, Polynomial};
pub use series::{GradedSeries, GradedSeriesVector};
