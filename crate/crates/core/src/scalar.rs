//! Scalar abstraction shared by every module.
//!
//! All numerics are written against [`Real`], which is implemented for `f32`
//! and `f64`. Each implementation carries the default tolerances appropriate
//! for its precision; [`NumericPolicy`] collects them in one record so
//! callers can tighten or loosen every check in one place.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance for identities that are exact in real arithmetic.
    const EXACT_TOL: f64;
    /// Largest accepted deviation of a state norm from one.
    const NORM_TOL: f64;
    /// Tolerance for the "is this a spatial rotation" check on composed
    /// Lorentz matrices.
    const ROTATION_TOL: f64;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const EXACT_TOL: f64 = 1e-12;
    const NORM_TOL: f64 = 1e-9;
    const ROTATION_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const EXACT_TOL: f64 = 5e-5;
    const NORM_TOL: f64 = 5e-5;
    const ROTATION_TOL: f64 = 5e-4;
}

/// Numeric tolerances used by constructors and assertions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy<T> {
    /// Exact-algebra checks: Hermiticity, unitarity, unit vectors, spectra.
    pub exact: T,
    /// Accepted norm deviation when constructing a state.
    pub normalization: T,
    /// Accepted deviation of a composed little-group element from a pure rotation.
    pub rotation: T,
}

impl<T: Real> Default for NumericPolicy<T> {
    fn default() -> Self {
        Self {
            exact: T::lit(T::EXACT_TOL),
            normalization: T::lit(T::NORM_TOL),
            rotation: T::lit(T::ROTATION_TOL),
        }
    }
}

/// Hyperbolic secant.
#[inline]
pub fn sech<T: Real>(x: T) -> T {
    T::one() / x.cosh()
}

/// Hyperbolic cotangent.
#[inline]
pub fn coth<T: Real>(x: T) -> T {
    T::one() / x.tanh()
}
