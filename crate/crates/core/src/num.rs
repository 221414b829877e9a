//! Scalar abstraction shared by every numerical kernel.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, NumAssignOps};

/// Floating-point scalar the kernels are written against.
///
/// Implemented for `f32` and `f64`. Exact quantities (moment coefficients,
/// `D_n`) live in [`num_rational::BigRational`] and are converted at the edge.
pub trait Real:
    Float + FloatConst + NumAssignOps + Debug + Display + Send + Sync + Default + 'static
{
    /// Converts an `f64` literal. Panics only for types that cannot hold it.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("literal representable")
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("index representable")
    }

    #[inline]
    fn from_i64(n: i64) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("integer representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn sq(self) -> Self {
        self * self
    }

    /// `x^(3/2)` for `x >= 0`.
    #[inline]
    fn pow_three_halves(self) -> Self {
        self * self.sqrt()
    }
}

impl<T> Real for T where
    T: Float + FloatConst + NumAssignOps + Debug + Display + Send + Sync + Default + 'static
{
}

/// Neumaier-compensated accumulator.
///
/// Order-dependent but deterministic: feeding the same terms in the same
/// order always yields the same bits.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
    abs: T,
    count: usize,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
            abs: T::zero(),
            count: 0,
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
        self.count += 1;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }

    /// Sum of absolute values of everything added, for rounding bounds.
    pub fn abs_sum(&self) -> T {
        self.abs
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

impl<T: Real> Extend<T> for CompensatedSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}
