//! Scalar abstraction for the numeric core.

use std::fmt::{Debug, Display};

use num_traits::{Float, NumCast};

/// Floating-point scalar the numeric modules are generic over.
///
/// Implemented for `f32` and `f64` via the blanket impl. The conversion
/// helpers panic only on values that cannot be represented at all (never the
/// case for the pitch range and row counts this crate works with).
pub trait Scalar: Float + Debug + Display + Send + Sync + 'static {
    fn from_f64(v: f64) -> Self {
        NumCast::from(v).expect("f64 value representable as scalar")
    }

    fn from_i32(v: i32) -> Self {
        NumCast::from(v).expect("i32 value representable as scalar")
    }

    fn from_usize(v: usize) -> Self {
        NumCast::from(v).expect("usize value representable as scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar widens to f64")
    }
}

impl<T> Scalar for T where T: Float + Debug + Display + Send + Sync + 'static {}
