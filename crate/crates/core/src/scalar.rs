//! Scalar abstractions shared by the transform and the quality metrics.

use num_traits::{Float, FromPrimitive, NumCast, PrimInt, Signed};
use std::fmt::{Debug, Display};

/// Signed integer type the block transform can run in exactly (`i32`, `i64`).
pub trait Coefficient: PrimInt + Signed + NumCast + Debug + Default + Send + Sync {}

impl Coefficient for i16 {}
impl Coefficient for i32 {}
impl Coefficient for i64 {}

/// Floating point type used for PSNR/MSE computations (`f32`, `f64`).
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync {}

impl Real for f32 {}
impl Real for f64 {}
