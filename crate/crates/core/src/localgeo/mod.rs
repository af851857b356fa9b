//! Local geometry at quadratic points.

pub mod direction;
pub mod hyperbolic;
pub mod matrix;
pub mod point;
pub mod quadratic;

pub use direction::{classify_direction, DirectionClass, DirectionTag};
pub use hyperbolic::hyperbolicity_check;
pub use matrix::{bilinear, determinant, inverse, Mat};
pub use point::{FactorRole, LinearFactor, QuadraticPointData};
pub use quadratic::{
    classify_quadratic, dual_quadratic, homogeneous_part, normalizer_absdet, normalizer_absdet_exact, vanishing_degree,
};
