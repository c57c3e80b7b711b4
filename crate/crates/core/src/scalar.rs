use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type the probability and distance math is written against.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance for normalization and metric-axiom checks.
    const TOLERANCE: f64;

    /// Converts an `f64` constant into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant not representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }

    #[inline]
    fn tolerance() -> Self {
        Self::lit(Self::TOLERANCE)
    }
}

impl Scalar for f64 {
    const TOLERANCE: f64 = 1e-9;
}

impl Scalar for f32 {
    const TOLERANCE: f64 = 1e-5;
}
