//! Scalar abstractions shared by the numeric modules.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type usable for evaluation and jets (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion used for literal constants.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Machine-level tolerance used for "is this exactly zero" style tests.
    fn tiny() -> Self {
        Self::epsilon() * Self::lit(64.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex literal conversion from the `f64` constants stored in expressions.
pub fn clit<T: Real>(c: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(c.re), T::lit(c.im))
}

/// Absolute-plus-relative comparison `|a - b| <= tol * (1 + |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

/// Complex version of [`close`].
pub fn close_c(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn close_is_relative_for_large_values() {
        assert!(close(1e9 + 0.5, 1e9, 1e-9));
        assert!(!close(1.0 + 1e-6, 1.0, 1e-9));
    }

    #[test]
    fn literal_conversion_to_f32() {
        let c: Complex<f32> = clit(Complex::new(0.5, -2.0));
        assert_eq!(c, Complex::new(0.5f32, -2.0f32));
    }
}
