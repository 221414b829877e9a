//! Explicit summation plus integral/Euler-Maclaurin tail for slowly decaying series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{CompensatedSum, Real};
use crate::quadrature::{integrate, QuadratureConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMethod {
    None,
    IntegralEulerMaclaurin,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummationConfig {
    /// Number of indices summed term by term (excluded indices count too).
    pub explicit_terms: usize,
    /// Zeros up to this index are Newton-refined; later ones use the asymptotic expansion.
    pub refine_upto: usize,
    pub tail: TailMethod,
    /// Relative tolerance for the tail integral.
    pub tail_rel_tol: f64,
}

pub const MIN_EXPLICIT_TERMS: usize = 100;

impl Default for SummationConfig {
    fn default() -> Self {
        Self {
            explicit_terms: 20_000,
            refine_upto: 200,
            tail: TailMethod::IntegralEulerMaclaurin,
            tail_rel_tol: 1e-13,
        }
    }
}

impl SummationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.explicit_terms < MIN_EXPLICIT_TERMS {
            return Err(Error::Argument(format!(
                "explicit_terms must be at least {MIN_EXPLICIT_TERMS}, got {}",
                self.explicit_terms
            )));
        }
        if self.refine_upto == 0 {
            return Err(Error::Argument("refine_upto must be at least 1".into()));
        }
        if !(self.tail_rel_tol > 0.0 && self.tail_rel_tol < 1.0) {
            return Err(Error::Argument(format!(
                "tail_rel_tol must lie in (0, 1), got {}",
                self.tail_rel_tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumEvaluation<T = f64> {
    pub explicit_sum: T,
    pub explicit_terms: usize,
    pub tail_estimate: T,
    pub tail_method: TailMethod,
    pub total: T,
    pub est_error: T,
}

/// A series `sum_{k >= first} a_k`, with a smooth model `f(k) ~ a_k` for the tail.
pub trait Series<T: Real> {
    fn first_index(&self) -> usize;

    /// Exact k-th term, or `None` when k is excluded from the sum.
    fn term(&self, k: usize) -> Option<T>;

    /// Smooth continuation of the terms to real k beyond the explicit range.
    fn model(&self, k: T) -> T;

    /// Exponent q of the substitution k = K s^-q that makes the tail
    /// integrand smooth on (0, 1]. Chosen so q times the decay rate is an integer.
    fn substitution_power(&self) -> i32;
}

/// Sums `explicit_terms` indices term by term in ascending order, then adds
/// the tail according to `cfg.tail`.
pub fn sum_series<T: Real, S: Series<T> + ?Sized>(
    series: &S,
    cfg: &SummationConfig,
) -> Result<SumEvaluation<T>> {
    cfg.validate()?;
    let first = series.first_index();
    let last = first + cfg.explicit_terms - 1;
    let mut acc = CompensatedSum::new();
    for k in first..=last {
        if let Some(t) = series.term(k) {
            acc.add(t);
        }
    }
    let explicit_sum = acc.value();
    if !explicit_sum.is_finite() {
        return Err(Error::Accuracy {
            achieved: f64::INFINITY,
            requested: 0.0,
        });
    }

    let tail = euler_maclaurin_tail(series, T::from_usize(last), cfg)?;
    let floor = T::lit(16.0) * T::epsilon() * (acc.abs_sum() + tail.value.abs());
    let (tail_estimate, est_error) = match cfg.tail {
        TailMethod::None => (T::zero(), tail.value.abs() + tail.error + floor),
        TailMethod::IntegralEulerMaclaurin => (tail.value, tail.error + floor),
    };
    Ok(SumEvaluation {
        explicit_sum,
        explicit_terms: cfg.explicit_terms,
        tail_estimate,
        tail_method: cfg.tail,
        total: explicit_sum + tail_estimate,
        est_error,
    })
}

pub(crate) struct TailValue<T> {
    pub value: T,
    pub error: T,
}

/// `sum_{k > K} f(k) ~ int_K^inf f - f(K)/2 - f'(K)/12 + f'''(K)/720`.
pub(crate) fn euler_maclaurin_tail<T: Real, S: Series<T> + ?Sized>(
    series: &S,
    k_last: T,
    cfg: &SummationConfig,
) -> Result<TailValue<T>> {
    let q = series.substitution_power();
    let qf = T::from_i64(q as i64);
    let integrand = |s: T| {
        if s <= T::zero() {
            return T::zero();
        }
        let k = k_last * s.powi(-q);
        let v = series.model(k) * qf * k_last * s.powi(-q - 1);
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    let qcfg = QuadratureConfig {
        rel_tol: cfg.tail_rel_tol,
        abs_tol: 0.0,
        max_depth: 30,
        order: 32,
    };
    let breaks = [
        T::zero(),
        T::lit(0.125),
        T::lit(0.25),
        T::half(),
        T::lit(0.75),
        T::one(),
    ];
    let integral = integrate(integrand, &breaks, &qcfg)?;

    // Fourth-order central differences; the second-order ones bound their error.
    let f = |k: T| series.model(k);
    let at = |h: T, j: i32| f(k_last + h * T::from_i64(j as i64));
    let h = k_last * T::lit(0.02);
    let d1_lo = (at(h, 1) - at(h, -1)) / (T::two() * h);
    let d1 = (T::lit(8.0) * (at(h, 1) - at(h, -1)) - (at(h, 2) - at(h, -2))) / (T::lit(12.0) * h);
    let h = k_last * T::lit(0.05);
    let h3 = h * h * h;
    let d3_lo = (at(h, 2) - T::two() * at(h, 1) + T::two() * at(h, -1) - at(h, -2)) / (T::two() * h3);
    let d3 = (-at(h, 3) + T::lit(8.0) * at(h, 2) - T::lit(13.0) * at(h, 1)
        + T::lit(13.0) * at(h, -1)
        - T::lit(8.0) * at(h, -2)
        + at(h, -3))
        / (T::lit(8.0) * h3);
    let c1 = d1 / T::lit(12.0);
    let c3 = d3 / T::lit(720.0);
    let value = integral.value - f(k_last) * T::half() - c1 + c3;
    let error = integral.error
        + c3.abs()
        + (d1 - d1_lo).abs() / T::lit(12.0)
        + (d3 - d3_lo).abs() / T::lit(720.0);
    if !value.is_finite() {
        return Err(Error::Accuracy {
            achieved: f64::INFINITY,
            requested: cfg.tail_rel_tol,
        });
    }
    Ok(TailValue { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// sum_{k>=1} 1/k^2 = pi^2/6.
    struct Basel;
    impl Series<f64> for Basel {
        fn first_index(&self) -> usize {
            1
        }
        fn term(&self, k: usize) -> Option<f64> {
            Some(1.0 / (k as f64).powi(2))
        }
        fn model(&self, k: f64) -> f64 {
            1.0 / (k * k)
        }
        fn substitution_power(&self) -> i32 {
            1
        }
    }

    /// sum_{k>=1} k^{-4/3}, which converges too slowly to truncate.
    struct Zeta43;
    impl Series<f64> for Zeta43 {
        fn first_index(&self) -> usize {
            1
        }
        fn term(&self, k: usize) -> Option<f64> {
            Some((k as f64).powf(-4.0 / 3.0))
        }
        fn model(&self, k: f64) -> f64 {
            k.powf(-4.0 / 3.0)
        }
        fn substitution_power(&self) -> i32 {
            3
        }
    }

    #[test]
    fn basel_with_tail() {
        let cfg = SummationConfig {
            explicit_terms: 200,
            ..Default::default()
        };
        let r = sum_series(&Basel, &cfg).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((r.total - exact).abs() < 1e-13, "{}", r.total - exact);
        assert!(r.est_error >= (r.total - exact).abs());
    }

    #[test]
    fn slow_series_reaches_riemann_zeta() {
        // zeta(4/3) = 3.6009377504588...
        let r = sum_series(&Zeta43, &SummationConfig::default()).unwrap();
        assert!((r.total - 3.600_937_750_458_8).abs() < 1e-11, "{}", r.total);
    }

    #[test]
    fn no_tail_mode_reports_truncation() {
        let cfg = SummationConfig {
            explicit_terms: 1000,
            tail: TailMethod::None,
            ..Default::default()
        };
        let r = sum_series(&Basel, &cfg).unwrap();
        assert_eq!(r.tail_estimate, 0.0);
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!(r.est_error >= exact - r.total);
    }

    #[test]
    fn too_few_terms_rejected() {
        let cfg = SummationConfig {
            explicit_terms: 10,
            ..Default::default()
        };
        assert!(matches!(sum_series(&Basel, &cfg), Err(Error::Argument(_))));
    }
}
