//! Working scalar abstraction.
//!
//! Floating-point entropy and algebra routines are generic over a scalar
//! implementing [`Scalar`]; `f64` is the default used by the CLI and the
//! concrete aliases at the crate root. Exact computations (orbit
//! arithmetic, codecs, surds) use rationals and big integers directly and
//! do not go through this trait.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

/// Shorthand conversion from `f64` literals into the working scalar.
#[inline]
pub fn s<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("f64 -> scalar conversion")
}
