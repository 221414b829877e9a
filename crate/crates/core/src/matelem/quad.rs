//! Quadrature oracle for matrix elements of normalized eigenfunctions.

use crate::error::{Error, Result};
use crate::num::Real;
use crate::quadrature::{integrate, unit_breaks, QuadratureConfig};
use crate::spectra::{wavefunction, wavefunction_value, Parity, SpectralPoint, SystemId};

/// Distance past the outer turning point where integrands are negligible.
pub const DECAY_MARGIN: f64 = 15.0;

fn y_max<T: Real>(a: &SpectralPoint<T>, b: &SpectralPoint<T>) -> T {
    a.turning_point().max(b.turning_point()) + T::lit(DECAY_MARGIN)
}

/// +1 for even, -1 for odd reflection behaviour.
fn reflection_sign<T: Real>(s: &SpectralPoint<T>) -> T {
    let odd = match s.system {
        SystemId::FullSho => s.n % 2 == 1,
        _ => s.parity == Parity::Odd,
    };
    if odd {
        -T::one()
    } else {
        T::one()
    }
}

fn full_line(system: SystemId) -> bool {
    matches!(system, SystemId::SymmetricLinear | SystemId::FullSho)
}

fn check_states<T: Real>(system: SystemId, a: &SpectralPoint<T>, b: &SpectralPoint<T>) -> Result<()> {
    if a.system != system || b.system != system {
        return Err(Error::Domain(format!(
            "states of {:?} and {:?} do not belong to {system:?}",
            a.system, b.system
        )));
    }
    Ok(())
}

/// `int_0^ymax g(y) dy` with breaks at unit spacing and at the turning points.
fn half_line<T: Real, F: FnMut(T) -> T>(
    f: F,
    a: &SpectralPoint<T>,
    b: &SpectralPoint<T>,
    cfg: &QuadratureConfig,
) -> Result<T> {
    let breaks = unit_breaks(
        T::zero(),
        y_max(a, b),
        &[a.turning_point(), b.turning_point()],
    );
    Ok(integrate(f, &breaks, cfg)?.value)
}

fn psi<T: Real>(s: &SpectralPoint<T>, y: T) -> T {
    wavefunction_value(s, y).unwrap_or_else(|_| T::nan())
}

/// `<a| y^p |b>` over the system's configuration space (the full line for
/// the symmetric linear potential and the full oscillator, y >= 0 otherwise).
pub fn quad_matrix_element<T: Real>(
    system: SystemId,
    p: u32,
    a: &SpectralPoint<T>,
    b: &SpectralPoint<T>,
    cfg: &QuadratureConfig,
) -> Result<T> {
    check_states(system, a, b)?;
    let _ = wavefunction(a, T::zero())?;
    let _ = wavefunction(b, T::zero())?;
    let pi = p as i32;
    let g = |y: T| y.powi(pi) * psi(a, y) * psi(b, y);
    if full_line(system) {
        let sign = reflection_sign(a) * reflection_sign(b) * if p % 2 == 1 { -T::one() } else { T::one() };
        if sign < T::zero() {
            return Ok(T::zero());
        }
        Ok(T::two() * half_line(g, a, b, cfg)?)
    } else {
        half_line(g, a, b, cfg)
    }
}

/// `<s| |y|^p |s>`, the moment list's quantity for both parities.
pub fn quad_abs_moment<T: Real>(s: &SpectralPoint<T>, p: u32, cfg: &QuadratureConfig) -> Result<T> {
    let _ = wavefunction(s, T::zero())?;
    let pi = p as i32;
    let g = |y: T| {
        let v = psi(s, y);
        y.powi(pi) * v * v
    };
    let v = half_line(g, s, s, cfg)?;
    Ok(if full_line(s.system) { T::two() * v } else { v })
}

/// Kinetic energy `int |psi'|^2` over the configuration space.
pub fn quad_kinetic<T: Real>(s: &SpectralPoint<T>, cfg: &QuadratureConfig) -> Result<T> {
    let _ = wavefunction(s, T::zero())?;
    let g = |y: T| {
        let d = wavefunction(s, y).map(|w| w.1).unwrap_or_else(|_| T::nan());
        d * d
    };
    let v = half_line(g, s, s, cfg)?;
    Ok(if full_line(s.system) { T::two() * v } else { v })
}

/// Half-line `int_0^inf y^p u_a u_b` with the states' own normalization.
pub fn quad_half_line<T: Real>(
    p: u32,
    a: &SpectralPoint<T>,
    b: &SpectralPoint<T>,
    cfg: &QuadratureConfig,
) -> Result<T> {
    let _ = wavefunction(a, T::zero())?;
    let _ = wavefunction(b, T::zero())?;
    let pi = p as i32;
    half_line(|y: T| y.powi(pi) * psi(a, y) * psi(b, y), a, b, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_of_each_system() {
        let cfg = QuadratureConfig::default();
        let states = [
            SpectralPoint::<f64>::linear(Parity::Odd, 3).unwrap(),
            SpectralPoint::<f64>::linear(Parity::Even, 2).unwrap(),
            SpectralPoint::<f64>::bouncer(4).unwrap(),
            SpectralPoint::<f64>::half_sho(3),
            SpectralPoint::<f64>::full_sho(5),
        ];
        for s in &states {
            let v = quad_matrix_element(s.system, 0, s, s, &cfg).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "{s:?}: {v}");
        }
    }

    #[test]
    fn mismatched_systems_are_rejected() {
        let cfg = QuadratureConfig::default();
        let a = SpectralPoint::<f64>::half_sho(0);
        let b = SpectralPoint::<f64>::full_sho(0);
        assert!(quad_matrix_element(SystemId::HalfSho, 1, &a, &b, &cfg).is_err());
    }
}
