//! Airy function Ai and its derivative on the real line.
//!
//! Three regimes:
//! * `x <= -10`: oscillatory asymptotic expansion,
//! * `x >= 8`: exponentially decaying asymptotic expansion,
//! * otherwise: Taylor expansion about the nearest anchor on a 0.25 grid,
//!   with anchor values taken once from the double-double Maclaurin series.

use std::sync::OnceLock;

use super::dd::airy_pair_dd;
use crate::error::{Error, Result};
use crate::num::Real;

const ANCHOR_LO: i32 = -44; // x = -11
const ANCHOR_HI: i32 = 36; // x = 9
const ANCHOR_STEP: f64 = 0.25;

pub(crate) const NEG_ASYMPTOTIC: f64 = -10.0;
pub(crate) const POS_ASYMPTOTIC: f64 = 8.0;

fn anchors() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (ANCHOR_LO..=ANCHOR_HI)
            .map(|j| {
                let (ai, aip) = airy_pair_dd(j as f64 * ANCHOR_STEP);
                (ai.to_f64(), aip.to_f64())
            })
            .collect()
    })
}

fn check_finite<T: Real>(x: T) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Airy argument must be finite, got {x}")))
    }
}

/// Ai(x).
pub fn airy_ai<T: Real>(x: T) -> Result<T> {
    check_finite(x)?;
    Ok(airy_pair_unchecked(x).0)
}

/// Ai'(x).
pub fn airy_ai_prime<T: Real>(x: T) -> Result<T> {
    check_finite(x)?;
    Ok(airy_pair_unchecked(x).1)
}

/// (Ai(x), Ai'(x)) in one evaluation.
pub fn airy_pair<T: Real>(x: T) -> Result<(T, T)> {
    check_finite(x)?;
    Ok(airy_pair_unchecked(x))
}

/// Caller guarantees `x` is finite.
pub(crate) fn airy_pair_unchecked<T: Real>(x: T) -> (T, T) {
    if x <= T::lit(NEG_ASYMPTOTIC) {
        oscillatory(-x)
    } else if x >= T::lit(POS_ASYMPTOTIC) {
        decaying(x)
    } else {
        anchored_taylor(x)
    }
}

pub(crate) fn anchored_taylor<T: Real>(x: T) -> (T, T) {
    let xf = x.to_f64_lossy();
    let j = (xf / ANCHOR_STEP)
        .round()
        .clamp(ANCHOR_LO as f64, ANCHOR_HI as f64) as i32;
    let (y0, d0) = anchors()[(j - ANCHOR_LO) as usize];
    let x0 = T::lit(j as f64 * ANCHOR_STEP);
    taylor(x0, T::lit(y0), T::lit(d0), x - x0)
}

/// Taylor series of the Airy ODE solution through (x0, y0, y0') at offset h.
fn taylor<T: Real>(x0: T, y0: T, d0: T, h: T) -> (T, T) {
    // a[k+2] (k+1)(k+2) = x0 a[k] + a[k-1]
    let mut a_km1 = T::zero();
    let mut a_k = y0;
    let mut a_kp1 = d0;
    let mut hk = T::one(); // h^k
    let mut val = y0 + d0 * h;
    let mut der = d0;
    let eps = T::epsilon() * T::lit(0.25);
    let mut quiet = 0;
    for k in 0..80usize {
        let kf = T::from_usize(k);
        let a_kp2 = (x0 * a_k + a_km1) / ((kf + T::one()) * (kf + T::two()));
        let hk1 = hk * h;
        let hk2 = hk1 * h;
        let dv = a_kp2 * hk2;
        let dd = (kf + T::two()) * a_kp2 * hk1;
        val += dv;
        der += dd;
        if dv.abs() <= eps * val.abs() && dd.abs() <= eps * der.abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        a_km1 = a_k;
        a_k = a_kp1;
        a_kp1 = a_kp2;
        hk = hk1;
    }
    (val, der)
}

/// Generator for the Airy asymptotic coefficients u_k and v_k.
struct Coefficients<T> {
    k: usize,
    u: T,
}

impl<T: Real> Coefficients<T> {
    fn new() -> Self {
        Self { k: 0, u: T::one() }
    }
    /// Returns (u_k, v_k) and advances.
    fn next_pair(&mut self) -> (T, T) {
        let k = T::from_usize(self.k);
        let six_k = T::lit(6.0) * k;
        let v = if self.k == 0 {
            T::one()
        } else {
            -(six_k + T::one()) / (six_k - T::one()) * self.u
        };
        let out = (self.u, v);
        self.k += 1;
        let k1 = T::from_usize(self.k);
        let s = T::lit(6.0) * k1;
        self.u = self.u * (s - T::lit(5.0)) * (s - T::lit(3.0)) * (s - T::one())
            / ((T::two() * k1 - T::one()) * T::lit(216.0) * k1);
        out
    }
}

/// Low part of 2 z^(3/2)/3 given its rounded value `xi`, using FMA error terms.
fn phase_correction<T: Real>(z: T, sqrt_z: T, xi: T) -> T {
    let three = T::lit(3.0);
    let root_lo = (-sqrt_z).mul_add(sqrt_z, z) / (T::two() * sqrt_z);
    let p = z * sqrt_z;
    let p_lo = z.mul_add(sqrt_z, -p) + z * root_lo;
    let two_p = p + p;
    let rem = (-three).mul_add(xi, two_p);
    (rem + T::two() * p_lo) / three
}

/// (Ai, Ai') at x = -z, for large z > 0.
fn oscillatory<T: Real>(z: T) -> (T, T) {
    let sqrt_z = z.sqrt();
    let xi = T::two() * (z * sqrt_z) / T::lit(3.0);
    let inv = xi.recip();
    let eps = T::epsilon() * T::lit(0.1);

    // P, Q for Ai and for Ai' with alternating signs on even/odd pairs.
    let (mut pu, mut qu, mut pv, mut qv) = (T::zero(), T::zero(), T::zero(), T::zero());
    let mut coef = Coefficients::<T>::new();
    let mut pow = T::one();
    let mut last = T::infinity();
    for k in 0..60usize {
        let (u, v) = coef.next_pair();
        let tu = u * pow;
        let tv = v * pow;
        let mag = tu.abs().max(tv.abs());
        if mag > last {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
        if k % 2 == 0 {
            pu += sign * tu;
            pv += sign * tv;
        } else {
            qu += sign * tu;
            qv += sign * tv;
        }
        if mag < eps {
            break;
        }
        last = mag;
        pow *= inv;
    }

    // Near the zeros the result is set by the phase, so carry xi's rounding
    // error separately and fold it into sin/cos to first order.
    let xi_lo = phase_correction(z, sqrt_z, xi);
    let (s0, c0) = xi.sin_cos();
    let s = s0 + xi_lo * c0;
    let c = c0 - xi_lo * s0;
    let r2 = T::FRAC_1_SQRT_2();
    let cos_phase = (c + s) * r2; // cos(xi - pi/4)
    let sin_phase = (s - c) * r2; // sin(xi - pi/4)
    let quarter = sqrt_z.sqrt();
    let pref = T::one() / T::PI().sqrt();
    let ai = pref / quarter * (pu * cos_phase + qu * sin_phase);
    let aip = pref * quarter * (pv * sin_phase - qv * cos_phase);
    (ai, aip)
}

/// Ai(x), Ai'(x) for large x > 0.
fn decaying<T: Real>(x: T) -> (T, T) {
    let sqrt_x = x.sqrt();
    let xi = T::lit(2.0 / 3.0) * x * sqrt_x;
    let e = (-xi).exp();
    if e == T::zero() {
        return (T::zero(), T::zero());
    }
    let inv = xi.recip();
    let eps = T::epsilon() * T::lit(0.1);
    let (mut su, mut sv) = (T::zero(), T::zero());
    let mut coef = Coefficients::<T>::new();
    let mut pow = T::one();
    let mut last = T::infinity();
    for k in 0..60usize {
        let (u, v) = coef.next_pair();
        let tu = u * pow;
        let tv = v * pow;
        let mag = tu.abs().max(tv.abs());
        if mag > last {
            break;
        }
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        su += sign * tu;
        sv += sign * tv;
        if mag < eps {
            break;
        }
        last = mag;
        pow *= inv;
    }
    let quarter = sqrt_x.sqrt();
    let pref = e / (T::two() * T::PI().sqrt());
    (pref / quarter * su, -pref * quarter * sv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(x: f64) -> (f64, f64) {
        let (a, b) = airy_pair_dd(x);
        (a.to_f64(), b.to_f64())
    }

    #[test]
    fn closed_forms_at_origin() {
        let ai = airy_ai(0.0f64).unwrap();
        let aip = airy_ai_prime(0.0f64).unwrap();
        assert!((ai - 0.355_028_053_887_817_2).abs() < 1e-16);
        assert!((aip + 0.258_819_403_792_806_8).abs() < 1e-16);
    }

    #[test]
    fn taylor_region_matches_double_double() {
        let mut x = -10.97;
        while x < 8.99 {
            let (a, b) = airy_pair(x).unwrap();
            let (ea, eb) = oracle(x);
            let tol = 1e-14 * (1.0f64).max(10.0 * ea.abs());
            assert!((a - ea).abs() <= tol, "Ai({x}): {a} vs {ea}");
            let tol = 1e-14 * (1.0f64).max(10.0 * eb.abs());
            assert!((b - eb).abs() <= tol, "Ai'({x}): {b} vs {eb}");
            x += 0.0731;
        }
    }

    #[test]
    fn asymptotic_branches_agree_on_overlap() {
        for i in 0..=40 {
            let x = -11.0 + i as f64 * 0.025;
            let (a, b) = oscillatory(-x);
            let (ta, tb) = anchored_taylor(x);
            assert!((a - ta).abs() < 1e-13, "x={x}");
            assert!((b - tb).abs() < 1e-13, "x={x}");
            let x = 8.0 + i as f64 * 0.025;
            let (a, b) = decaying(x);
            let (ta, tb) = anchored_taylor(x);
            assert!((a - ta).abs() <= 1e-13 * ta.abs(), "x={x}");
            assert!((b - tb).abs() <= 1e-13 * tb.abs(), "x={x}");
        }
    }

    #[test]
    fn far_field_reference_values() {
        // 30-digit reference values.
        assert!((airy_ai(-30.0f64).unwrap() + 0.087_968_188_456_842_16).abs() < 1e-14);
        assert!((airy_ai(8.0f64).unwrap() - 4.692_207_616_099_232e-8).abs() < 1e-21);
        assert_eq!(airy_ai(200.0f64).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_is_domain_error() {
        assert!(matches!(airy_ai(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(airy_ai_prime(f64::INFINITY), Err(Error::Domain(_))));
        assert!(matches!(airy_pair(f32::NEG_INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn single_precision_tracks_double() {
        for &x in &[-25.0f32, -3.3, 0.7, 4.0, 12.0] {
            let a = airy_ai(x).unwrap() as f64;
            let b = airy_ai(x as f64).unwrap();
            // The phase 2/3 z^1.5 carries ~|phase| ulps in single precision.
            assert!((a - b).abs() < 1e-5, "x={x}: {a} vs {b}");
        }
    }
}
