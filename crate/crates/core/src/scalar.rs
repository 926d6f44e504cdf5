//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All physics is written against [`Real`]; `f64` is the workhorse and the
//! type the crate-root aliases pin, `f32` compiles and runs at reduced
//! accuracy.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: f32 or f64.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + FloatConst + Debug + Display + LowerExp
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    /// Lossy conversion back to `f64`, used for diagnostics and output.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a count or index.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits a float")
    }

    /// Whether the value is neither NaN nor infinite.
    #[inline]
    fn finite(self) -> bool {
        self.as_f64().is_finite()
    }

    /// Machine epsilon.
    #[inline]
    fn eps() -> Self {
        Self::default_epsilon()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`].
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn creal<T: Real>(re: T) -> Cplx<T> {
    Complex::new(re, T::zero())
}

/// `e^{i x}`.
#[inline]
pub(crate) fn cis<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x.cos(), x.sin())
}

/// |z| for a generic complex; `Complex::norm` needs `num_traits::Float`.
#[inline]
pub(crate) fn cabs<T: Real>(z: Cplx<T>) -> T {
    z.re.hypot(z.im)
}

/// arg z.
#[inline]
pub(crate) fn carg<T: Real>(z: Cplx<T>) -> T {
    z.im.atan2(z.re)
}
