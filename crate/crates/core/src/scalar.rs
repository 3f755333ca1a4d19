//! Floating-point scalar abstraction shared by every geometric routine.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Coordinate and distance type: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + FromStr + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; used for distribution parameters and radii.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is representable in every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Euclidean distance. Every component that compares distances goes through
/// this function so that equal geometry yields bit-identical distances.
#[inline]
pub fn euclidean<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        let d = *x - *y;
        acc = acc + d * d;
    }
    acc.sqrt()
}
