//! Coefficient asymptotics for quasirational generating functions
//! `F = P * prod Q_j^{-s_j}` whose singular varieties have isolated
//! quadratic (cone) points, with exact series oracles for validation.

pub mod asympt;
pub mod cli;
pub mod critpoints;
pub mod error;
pub mod localgeo;
pub mod oracle;
pub mod polyseries;
pub mod scalar;

pub use error::{Error, Result};
pub mod presets;
