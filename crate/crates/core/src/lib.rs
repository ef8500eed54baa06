//! Numeric engine for holomorphically homogeneous real hypersurfaces in C³.
//!
//! The crate is layered bottom-up: [`expr`] (expressions, jets), [`liealg`]
//! (structure constants), [`vfield`] (holomorphic vector fields),
//! [`hypersurface`] (defining functions, Levi forms), [`moser`] (degree-4
//! normalization) and [`catalog`] (the surface list and its verifier).

pub mod catalog;
pub mod expr;
pub mod hypersurface;
pub mod liealg;
pub mod linalg;
pub mod moser;
pub mod scalar;
pub mod series;
pub mod vfield;

pub use num_complex::Complex64;
pub use scalar::Real;

/// Double-precision series, the workhorse of the geometric modules.
pub type Series = series::TruncatedSeries<f64>;
/// Double-precision evaluation point.
pub type Point = expr::EvalPoint<f64>;
