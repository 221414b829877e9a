//! Numeric power-law recursions for off-diagonal matrix elements.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::Real;
use crate::spectra::{half_sho_slope, SystemId};

/// Boundary data at y = 0 for two states and a test function f.
///
/// `u_i'' = (y - lambda_i) u_i` on y >= 0. For odd states `value = 0`,
/// for even states `slope = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfaceData<T = f64> {
    /// f(0), f'(0), f''(0), f'''(0).
    pub f: [T; 4],
    pub value: (T, T),
    pub slope: (T, T),
    pub lambda: (T, T),
}

impl<T: Real> SurfaceData<T> {
    /// Surface data for f(y) = y^q.
    pub fn for_power(q: u32, value: (T, T), slope: (T, T), lambda: (T, T)) -> Self {
        let mut f = [T::zero(); 4];
        if q <= 3 {
            // d^q/dy^q y^q = q!
            f[q as usize] = T::from_usize([1, 1, 2, 6][q as usize]);
        }
        Self {
            f,
            value,
            slope,
            lambda,
        }
    }

    pub fn lambda_ave(&self) -> T {
        (self.lambda.0 + self.lambda.1) * T::half()
    }

    pub fn delta(&self) -> T {
        self.lambda.0 - self.lambda.1
    }

    /// Boundary contribution to the recursion at the origin.
    pub fn term(&self) -> T {
        let [f0, f1, f2, f3] = self.f;
        let (a, b) = self.value;
        let (ap, bp) = self.slope;
        -T::two() * f1 * ap * bp + f2 * (ap * b + a * bp)
            - f3 * a * b
            - T::two() * a * b * f1 * self.lambda_ave()
            + self.delta() * f0 * (ap * b - a * bp)
    }

    /// True when the boundary data respects a definite parity for each state.
    pub fn parity_consistent(&self) -> bool {
        let ok = |v: T, s: T| v == T::zero() || s == T::zero();
        ok(self.value.0, self.slope.0) && ok(self.value.1, self.slope.1)
    }
}

/// Half-line elements X_q = int_0^inf y^q u_1 u_2 dy for q = 0..=q_max of two
/// Airy states with distinct eigenvalues:
///
/// ```text
/// D^2 X_q = 2q(2q-1) X[q-1] - 4 l_ave q(q-1) X[q-2] - q(q-1)(q-2)(q-3) X[q-4] + S_q
/// ```
pub fn airy_offdiagonal<T: Real>(
    value: (T, T),
    slope: (T, T),
    lambda: (T, T),
    q_max: u32,
) -> Result<Vec<T>> {
    let d = lambda.0 - lambda.1;
    if d == T::zero() {
        return Err(Error::Argument(
            "equal eigenvalues: use the diagonal moment recursion".into(),
        ));
    }
    let d2 = d * d;
    let mut x: Vec<T> = Vec::with_capacity(q_max as usize + 1);
    for q in 0..=q_max {
        let s = SurfaceData::for_power(q, value, slope, lambda);
        let qf = T::from_usize(q as usize);
        let get = |k: i64| -> T {
            if k < 0 {
                T::zero()
            } else {
                x[k as usize]
            }
        };
        let qi = q as i64;
        let rhs = T::two() * qf * (T::two() * qf - T::one()) * get(qi - 1)
            - T::lit(4.0) * s.lambda_ave() * qf * (qf - T::one()) * get(qi - 2)
            - qf * (qf - T::one()) * (qf - T::two()) * (qf - T::lit(3.0)) * get(qi - 4)
            + s.term();
        x.push(rhs / d2);
    }
    Ok(x)
}

/// Full-oscillator `<a| y^q |b>` by repeated application of
/// y = (a + a^dagger)/sqrt(2) to |b>.
pub fn ladder_element<T: Real>(q: u32, a: usize, b: usize) -> T {
    let len = b + q as usize + 2;
    let mut v = vec![T::zero(); len];
    v[b] = T::one();
    let r = T::FRAC_1_SQRT_2();
    for _ in 0..q {
        let mut w = vec![T::zero(); len];
        for k in 0..len {
            if v[k] == T::zero() {
                continue;
            }
            if k > 0 {
                w[k - 1] += v[k] * T::from_usize(k).sqrt() * r;
            }
            if k + 1 < len {
                w[k + 1] += v[k] * T::from_usize(k + 1).sqrt() * r;
            }
        }
        v = w;
    }
    if a < len {
        v[a]
    } else {
        T::zero()
    }
}

/// `<n| y^q |m>` for oscillator states via
///
/// ```text
/// [(de)^2 - 4q^2] X_q + 4 e_ave q(q-1) X[q-2] + q(q-1)(q-2)(q-3) X[q-4] = -2 [q=1] psi_n'(0) psi_m'(0)
/// ```
///
/// with the right side present only for the half oscillator. Where the
/// leading coefficient vanishes the value is taken from the ladder algebra
/// of the full oscillator (for the half oscillator, even powers coincide
/// with full-line elements between states 2n+1 and 2m+1).
pub fn oscillator_recursion<T: Real>(system: SystemId, q: u32, n: usize, m: usize) -> Result<T> {
    if q == 0 {
        return Err(Error::Argument("oscillator recursion needs q >= 1".into()));
    }
    let (de, e_ave, rhs1, full_index): (T, T, T, (usize, usize)) = match system {
        SystemId::HalfSho => (
            T::lit(4.0) * (T::from_usize(n) - T::from_usize(m)),
            T::from_usize(2 * n + 2 * m + 3),
            -T::two() * half_sho_slope::<T>(n) * half_sho_slope::<T>(m),
            (2 * n + 1, 2 * m + 1),
        ),
        SystemId::FullSho => (
            T::two() * (T::from_usize(n) - T::from_usize(m)),
            T::from_usize(n + m + 1),
            T::zero(),
            (n, m),
        ),
        _ => {
            return Err(Error::Domain(format!(
                "{system:?} is not an oscillator system"
            )))
        }
    };
    let start = q % 2;
    let mut x = vec![T::zero(); q as usize + 1];
    if start == 0 {
        x[0] = if n == m { T::one() } else { T::zero() };
    }
    let mut j = if start == 0 { 2 } else { 1 };
    while j <= q {
        let jf = T::from_usize(j as usize);
        let coef = de * de - T::lit(4.0) * jf * jf;
        if coef == T::zero() {
            if system == SystemId::HalfSho && j % 2 == 1 {
                return Err(Error::Argument(format!(
                    "no base case for odd power {j} at resonance"
                )));
            }
            x[j as usize] = ladder_element(j, full_index.0, full_index.1);
        } else {
            let get = |k: i64| if k < 0 { T::zero() } else { x[k as usize] };
            let ji = j as i64;
            let mut rhs = -T::lit(4.0) * e_ave * jf * (jf - T::one()) * get(ji - 2)
                - jf * (jf - T::one()) * (jf - T::two()) * (jf - T::lit(3.0)) * get(ji - 4);
            if j == 1 {
                rhs += rhs1;
            }
            x[j as usize] = rhs / coef;
        }
        j += 2;
    }
    Ok(x[q as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_sho_matches_ladder() {
        for q in 1..=6u32 {
            for n in 0..8 {
                for m in 0..8 {
                    let r: f64 = oscillator_recursion(SystemId::FullSho, q, n, m).unwrap();
                    let l: f64 = ladder_element(q, n, m);
                    assert!((r - l).abs() < 1e-12, "q={q} n={n} m={m}: {r} vs {l}");
                }
            }
        }
    }

    #[test]
    fn half_sho_even_powers_match_full_line() {
        for q in [2u32, 4] {
            for n in 0..5 {
                for m in 0..5 {
                    let r: f64 = oscillator_recursion(SystemId::HalfSho, q, n, m).unwrap();
                    let l: f64 = ladder_element(q, 2 * n + 1, 2 * m + 1);
                    assert!((r - l).abs() < 1e-12, "q={q} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn ladder_basics() {
        assert!((ladder_element::<f64>(2, 0, 0) - 0.5).abs() < 1e-15);
        assert!((ladder_element::<f64>(1, 1, 0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(ladder_element::<f64>(1, 2, 0), 0.0);
    }

    #[test]
    fn rejects_non_oscillators_and_q_zero() {
        assert!(oscillator_recursion::<f64>(SystemId::Bouncer, 1, 0, 0).is_err());
        assert!(oscillator_recursion::<f64>(SystemId::HalfSho, 0, 0, 0).is_err());
    }

    #[test]
    fn surface_parity_check() {
        let s = SurfaceData::for_power(1, (0.0, 0.5), (0.7, 0.0), (2.3, 1.0));
        assert!(s.parity_consistent());
        let bad = SurfaceData::for_power(1, (0.1, 0.5), (0.7, 0.0), (2.3, 1.0));
        assert!(!bad.parity_consistent());
    }
}
