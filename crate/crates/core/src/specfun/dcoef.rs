//! Half-oscillator slope coefficients `D_n = 4 (2n+1)! / (4^n (n!)^2)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::num::Real;

/// Largest index for which the float view is taken from the exact rational.
pub const EXACT_FLOAT_LIMIT: usize = 300;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DCoefficient {
    pub n: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub value: BigRational,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl DCoefficient {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact `D_n`. The numerator is `4(2n+1) C(2n, n)`, the denominator `4^n`.
pub fn d_coefficient(n: usize) -> DCoefficient {
    let mut binom = BigUint::one();
    for k in 0..n {
        // C(2k+2, k+1) = C(2k, k) * 2(2k+1)/(k+1), always an integer.
        binom *= 2 * (2 * k as u64 + 1);
        binom /= k as u64 + 1;
    }
    let num = BigInt::from(binom * (4 * (2 * n as u64 + 1)));
    let den = BigInt::one() << (2 * n);
    DCoefficient {
        n,
        value: BigRational::new(num, den),
    }
}

fn exact_table() -> &'static [f64] {
    static TABLE: std::sync::OnceLock<Vec<f64>> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        let mut d = BigRational::from_integer(BigInt::from(4));
        let mut out = Vec::with_capacity(EXACT_FLOAT_LIMIT + 1);
        for k in 0..=EXACT_FLOAT_LIMIT {
            out.push(d.to_f64().unwrap_or(f64::NAN));
            d *= BigRational::new(BigInt::from(2 * k + 3), BigInt::from(2 * k + 2));
        }
        out
    })
}

/// `D_n` as a float: correctly rounded from the exact value up to
/// [`EXACT_FLOAT_LIMIT`], asymptotic series beyond.
pub fn d_value<T: Real>(n: usize) -> T {
    if n <= EXACT_FLOAT_LIMIT {
        T::lit(exact_table()[n])
    } else {
        d_continuous(T::from_usize(n))
    }
}

/// Smooth interpolant of `D_k` for real `k > 0`, used for tail integrals.
///
/// `Gamma(k+1/2)/Gamma(k+1)` through its large-k expansion; relative error
/// below 1e-16 for `k >= 50`.
pub fn d_continuous<T: Real>(k: T) -> T {
    let inv = k.recip();
    let inv2 = inv * inv;
    let series = inv
        * (T::lit(-1.0 / 8.0)
            + inv2
                * (T::lit(1.0 / 192.0)
                    + inv2 * (T::lit(-1.0 / 640.0) + inv2 * T::lit(17.0 / 14336.0))));
    let log_ratio = -T::half() * k.ln() + series;
    T::lit(4.0) * (T::two() * k + T::one()) / T::PI().sqrt() * log_ratio.exp()
}
