//! Scalar abstraction shared by the real and complex code paths.

use nalgebra::ComplexField;
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

/// Entry type of a hierarchical matrix: `f64` or `Complex<f64>`.
///
/// Extends `nalgebra::ComplexField` with the handful of operations the
/// toolkit needs that are not part of that trait: sampling standard normal
/// entries for randomized algorithms and lossless conversion from `f64`.
pub trait HlrScalar: ComplexField<RealField = f64> + Copy + 'static {
    /// Draw a standard normal sample (complex: independent re/im parts).
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Embed a real scalar.
    fn from_f64(x: f64) -> Self;

    fn is_complex() -> bool;
}

impl HlrScalar for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn is_complex() -> bool {
        false
    }
}

impl HlrScalar for Complex<f64> {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        // Scale so that E|z|^2 = 1, matching the real case.
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    fn from_f64(x: f64) -> Self {
        Complex::new(x, 0.0)
    }

    fn is_complex() -> bool {
        true
    }
}
