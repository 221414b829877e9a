//! Double-double arithmetic and the slow extended-precision Airy series.
//!
//! This is the accuracy oracle for the fast evaluators and also seeds the
//! anchor table they expand around. Only the operations the series needs
//! are provided.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = self.lo.mul_add(b, e);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let r = self - DoubleDouble::from_f64(b).mul_f64(q1);
        let q2 = r.hi / b;
        let r = r - DoubleDouble::from_f64(b).mul_f64(q2);
        let q3 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from_f64(q3)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

/// Ai(0) to double-double precision.
pub const AI_ZERO: DoubleDouble = DoubleDouble::new(0.3550280538878172, 2.05233632436212e-17);
/// Ai'(0) to double-double precision.
pub const AIP_ZERO: DoubleDouble = DoubleDouble::new(-0.2588194037928068, 2.522243111610832e-17);

/// Maclaurin evaluation of (Ai(x), Ai'(x)) in double-double arithmetic.
///
/// Coefficients come from the ODE recurrence `a[j+3] = a[j] / ((j+2)(j+3))`.
/// Cancellation grows like `exp(2|x|^(3/2)/3)`, so results stay well below
/// 1e-17 absolute error for `|x| <= 12`. Slow; not meant for inner loops.
pub fn airy_pair_dd(x: f64) -> (DoubleDouble, DoubleDouble) {
    let x2 = {
        let (p, e) = two_prod(x, x);
        DoubleDouble::new(p, e)
    };
    let x3 = x2.mul_f64(x);

    // Two interleaved chains: j = 0 mod 3 (from Ai(0)) and j = 1 mod 3 (from Ai'(0)).
    let mut t0 = AI_ZERO;
    let mut t1 = AIP_ZERO.mul_f64(x);
    let mut ai = t0 + t1;
    let mut aip = AIP_ZERO;
    let mut j0 = 0.0f64;
    let mut j1 = 1.0f64;
    let mut peak = ai.abs().hi.max(1.0);
    for _ in 0..600 {
        aip = aip + (t0 * x2).div_f64(j0 + 2.0) + (t1 * x2).div_f64(j1 + 2.0);
        t0 = (t0 * x3).div_f64((j0 + 2.0) * (j0 + 3.0));
        t1 = (t1 * x3).div_f64((j1 + 2.0) * (j1 + 3.0));
        j0 += 3.0;
        j1 += 3.0;
        ai = ai + t0 + t1;
        let mag = t0.abs().hi.max(t1.abs().hi);
        peak = peak.max(mag);
        if mag < 1e-36 * peak && j0 > 6.0 {
            break;
        }
    }
    (ai, aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_is_double_double_accurate() {
        let third = DoubleDouble::from_f64(1.0).div_f64(3.0);
        let back = third.mul_f64(3.0) - DoubleDouble::from_f64(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn series_at_origin_returns_constants() {
        let (ai, aip) = airy_pair_dd(0.0);
        assert_eq!(ai, AI_ZERO);
        assert_eq!(aip, AIP_ZERO);
    }

    #[test]
    fn series_matches_reference_digits() {
        // Reference digits from a 50-digit evaluation.
        let (ai, _) = airy_pair_dd(5.0);
        assert!((ai.to_f64() - 1.083_444_281_360_744_2e-4).abs() < 1e-19);
        let (_, aip) = airy_pair_dd(-1.0);
        assert!((aip.to_f64() + 0.010_160_567_116_645_21).abs() < 1e-17);
        let (ai, _) = airy_pair_dd(-10.0);
        assert!((ai.to_f64() - 0.040_241_238_486_443_19).abs() < 1e-16);
    }
}
