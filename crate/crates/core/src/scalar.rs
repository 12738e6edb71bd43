//! Scalar abstraction shared by every numerical routine in the crate.

use core::fmt::{Debug, Display, LowerExp};
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the physics is written against (`f32` or `f64`).
///
/// All physical constants are stored as `f64` and converted on use, so the
/// `f32` instantiation loses precision on quantities like `ħ` but stays
/// within the normal range for every product the engine forms.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Converts an integer coefficient (pulse weights, counts) into `Self`.
    #[inline]
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("representable integer")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `sin(x)/x` with the removable singularity filled in (`sinc 0 = 1`).
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-4) {
        // Taylor series, exact to rounding for |x| < 1e-4
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

/// Relative difference `|a-b|/|b|`, falling back to the absolute difference when `b == 0`.
pub fn rel_diff<T: Real>(a: T, b: T) -> T {
    let d = (a - b).abs();
    if b == T::zero() {
        d
    } else {
        d / b.abs()
    }
}
