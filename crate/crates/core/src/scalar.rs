use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating point type the metrics are computed in: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for constants and counts.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("count fits the scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
