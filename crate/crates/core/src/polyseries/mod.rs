//! Polynomial and truncated-series arithmetic.

pub mod literal;
pub mod multipoly;
pub mod series;

pub use literal::{poly_to_literal, LiteralScalar, PolyLiteral};
pub use multipoly::{Exponent, MultiPoly};
pub use series::{log_compose_taylor, TruncatedSeries};
