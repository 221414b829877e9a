//! Eigenvalues, zero tables and wavefunction data for the four model systems.
//!
//! Units are dimensionless throughout (rho = beta = 1). Linear-potential
//! indices start at 1, oscillator indices at 0.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;
use crate::specfun::{airy_pair_unchecked, d_value, hermite_unchecked, hermite_with_derivative};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemId {
    SymmetricLinear,
    Bouncer,
    #[serde(rename = "HalfSHO")]
    HalfSho,
    #[serde(rename = "FullSHO")]
    FullSho,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::None => "none",
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            "none" => Ok(Parity::None),
            _ => Err(Error::Argument(format!("unknown parity `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZeroKind {
    AiZero,
    AiPrimeZero,
}

impl ZeroKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroKind::AiZero => "ai",
            ZeroKind::AiPrimeZero => "aiprime",
        }
    }
}

/// One eigenstate of one system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralPoint<T = f64> {
    pub system: SystemId,
    pub parity: Parity,
    pub n: usize,
    /// zeta_n, eta_n or epsilon_n.
    pub lambda: T,
}

impl<T: Real> SpectralPoint<T> {
    /// Builds a validated state, computing its eigenvalue.
    pub fn new(system: SystemId, parity: Parity, n: usize) -> Result<Self> {
        let lambda = match (system, parity) {
            (SystemId::SymmetricLinear, Parity::Odd) | (SystemId::Bouncer, Parity::Odd) => {
                airy_zero(ZeroKind::AiZero, n)?
            }
            (SystemId::SymmetricLinear, Parity::Even) => airy_zero(ZeroKind::AiPrimeZero, n)?,
            (SystemId::HalfSho, Parity::None) => T::from_usize(4 * n + 3),
            (SystemId::FullSho, Parity::None) => T::from_usize(2 * n + 1),
            _ => {
                return Err(Error::Domain(format!(
                    "{system:?} has no {} states",
                    parity.as_str()
                )))
            }
        };
        Ok(Self {
            system,
            parity,
            n,
            lambda,
        })
    }

    /// Same as [`SpectralPoint::new`] but with a known eigenvalue (e.g. from a table).
    pub fn with_lambda(system: SystemId, parity: Parity, n: usize, lambda: T) -> Self {
        Self {
            system,
            parity,
            n,
            lambda,
        }
    }

    pub fn linear(parity: Parity, n: usize) -> Result<Self> {
        Self::new(SystemId::SymmetricLinear, parity, n)
    }

    pub fn bouncer(n: usize) -> Result<Self> {
        Self::new(SystemId::Bouncer, Parity::Odd, n)
    }

    pub fn half_sho(n: usize) -> Self {
        Self::with_lambda(SystemId::HalfSho, Parity::None, n, T::from_usize(4 * n + 3))
    }

    pub fn full_sho(n: usize) -> Self {
        Self::with_lambda(SystemId::FullSho, Parity::None, n, T::from_usize(2 * n + 1))
    }

    pub fn is_airy(&self) -> bool {
        matches!(self.system, SystemId::SymmetricLinear | SystemId::Bouncer)
    }

    /// Classical turning point in y.
    pub fn turning_point(&self) -> T {
        match self.system {
            SystemId::SymmetricLinear | SystemId::Bouncer => self.lambda,
            SystemId::HalfSho | SystemId::FullSho => self.lambda.sqrt(),
        }
    }
}

/// Leading-order asymptotic seed [3 pi/4 (2n - 1/2)]^(2/3) (Ai) or
/// [3 pi/4 (2n - 3/2)]^(2/3) (Ai').
pub fn zero_seed<T: Real>(kind: ZeroKind, n: usize) -> T {
    let shift = match kind {
        ZeroKind::AiZero => T::half(),
        ZeroKind::AiPrimeZero => T::lit(1.5),
    };
    let t = T::lit(0.75) * T::PI() * (T::two() * T::from_usize(n) - shift);
    t.powf(T::lit(2.0 / 3.0))
}

/// Two-correction asymptotic expansion of the k-th zero, valid as a
/// continuous function of real `k`.
pub fn asymptotic_zero<T: Real>(kind: ZeroKind, k: T) -> T {
    let eighth = T::lit(0.375) * T::PI();
    match kind {
        ZeroKind::AiZero => {
            let t = eighth * (T::lit(4.0) * k - T::one());
            let it2 = (t * t).recip();
            t.powf(T::lit(2.0 / 3.0))
                * (T::one() + it2 * (T::lit(5.0 / 48.0) - it2 * T::lit(5.0 / 36.0)))
        }
        ZeroKind::AiPrimeZero => {
            let t = eighth * (T::lit(4.0) * k - T::lit(3.0));
            let it2 = (t * t).recip();
            t.powf(T::lit(2.0 / 3.0))
                * (T::one() + it2 * (T::lit(-7.0 / 48.0) + it2 * T::lit(35.0 / 288.0)))
        }
    }
}

/// Magnitude of the n-th zero of Ai (zeta_n) or Ai' (eta_n).
///
/// Newton iteration from the leading-order seed, safeguarded by bisection on
/// a bracket of half the local zero spacing around the seed.
pub fn airy_zero<T: Real>(kind: ZeroKind, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::Index("Airy zeros are numbered from 1".into()));
    }
    let seed = zero_seed::<T>(kind, n);
    let quarter = T::PI() / seed.sqrt() * T::lit(0.25);
    Ok(refine_zero(kind, seed, seed - quarter, seed + quarter))
}

/// Signed target function and its Newton step at lambda.
fn newton_parts<T: Real>(kind: ZeroKind, lambda: T) -> (T, T) {
    let (ai, aip) = airy_pair_unchecked(-lambda);
    match kind {
        // f = Ai(-z), f' = -Ai'(-z)
        ZeroKind::AiZero => (ai, ai / aip),
        // g = Ai'(-z), g' = z Ai(-z)
        ZeroKind::AiPrimeZero => (aip, -aip / (lambda * ai)),
    }
}

fn refine_zero<T: Real>(kind: ZeroKind, seed: T, lo: T, hi: T) -> T {
    let (mut lo, mut hi) = (lo.max(T::epsilon()), hi);
    let f_lo = newton_parts(kind, lo).0;
    let f_hi = newton_parts(kind, hi).0;
    let bracketed = f_lo.signum() != f_hi.signum();
    let mut x = seed;
    for _ in 0..200 {
        let (f, step) = newton_parts(kind, x);
        if f == T::zero() {
            return x;
        }
        if bracketed {
            if f.signum() == f_lo.signum() {
                lo = x;
            } else {
                hi = x;
            }
        }
        let mut next = x + step;
        if bracketed && !(next > lo && next < hi) {
            next = (lo + hi) * T::half();
        }
        let moved = (next - x).abs();
        x = next;
        if moved <= T::epsilon() * x.abs() * T::two() {
            break;
        }
    }
    // Polish: keep stepping while the residual shrinks.
    let (mut f, mut step) = newton_parts(kind, x);
    for _ in 0..4 {
        let next = x + step;
        let (f_next, step_next) = newton_parts(kind, next);
        if f_next.abs() >= f.abs() {
            break;
        }
        x = next;
        f = f_next;
        step = step_next;
    }
    x
}

/// Ordered zeros, Newton-refined up to `refined_upto`, asymptotic beyond.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroTable<T = f64> {
    pub kind: ZeroKind,
    pub refined_upto: usize,
    pub values: Vec<T>,
}

/// Builds a table of the first `count` zeros.
pub fn zero_table<T: Real>(kind: ZeroKind, count: usize, refine_upto: usize) -> Result<ZeroTable<T>> {
    if refine_upto == 0 || count == 0 {
        return Err(Error::Argument(
            "zero table needs count >= refine_upto >= 1".into(),
        ));
    }
    if refine_upto > count {
        return Err(Error::Argument(format!(
            "refine_upto ({refine_upto}) exceeds count ({count})"
        )));
    }
    let mut values = Vec::with_capacity(count);
    for k in 1..=count {
        let v = if k <= refine_upto {
            airy_zero(kind, k)?
        } else {
            asymptotic_zero(kind, T::from_usize(k))
        };
        if let Some(&prev) = values.last() {
            if !(v > prev) {
                return Err(Error::Accuracy {
                    achieved: v.to_f64_lossy(),
                    requested: prev.to_f64_lossy(),
                });
            }
        }
        values.push(v);
    }
    Ok(ZeroTable {
        kind,
        refined_upto: refine_upto,
        values,
    })
}

impl<T: Real> ZeroTable<T> {
    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// k-th zero, 1-based.
    pub fn get(&self, k: usize) -> Option<T> {
        k.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    /// k-th zero, falling back to the asymptotic expansion past the table end.
    pub fn get_or_extrapolate(&self, k: usize) -> T {
        self.get(k)
            .unwrap_or_else(|| asymptotic_zero(self.kind, T::from_usize(k)))
    }

    /// CSV with header `kind,k,value,refined`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Argument(format!("csv write failed: {e}"));
        w.write_record(["kind", "k", "value", "refined"]).map_err(io)?;
        for (i, v) in self.values.iter().enumerate() {
            let k = i + 1;
            w.write_record([
                self.kind.as_str().to_string(),
                k.to_string(),
                format!("{:.16e}", v.to_f64_lossy()),
                (k <= self.refined_upto).to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Argument(format!("csv flush failed: {e}")))?;
        Ok(())
    }
}

/// Dimensionless energy: the eigenvalue for linear states, 4n+3 or 2n+1 for oscillators.
pub fn energy<T: Real>(state: &SpectralPoint<T>) -> T {
    state.lambda
}

/// Amplitude N such that psi(y) = N Ai(y - lambda) for y >= 0.
///
/// Symmetric-linear states are normalized on the full line, bouncer states
/// on the half line.
pub fn airy_normalization<T: Real>(state: &SpectralPoint<T>) -> Result<T> {
    let (ai, aip) = airy_pair_unchecked(-state.lambda);
    match (state.system, state.parity) {
        (SystemId::SymmetricLinear, Parity::Odd) => Ok(T::one() / (T::SQRT_2() * aip)),
        (SystemId::SymmetricLinear, Parity::Even) => {
            Ok(T::one() / ((T::two() * state.lambda).sqrt() * ai))
        }
        (SystemId::Bouncer, _) => Ok(T::one() / aip),
        _ => Err(Error::Domain(format!(
            "{:?} states are not Airy functions",
            state.system
        ))),
    }
}

/// psi(0) for linear states; psi'(0) for half-oscillator states.
pub fn boundary_value<T: Real>(state: &SpectralPoint<T>) -> Result<T> {
    match (state.system, state.parity) {
        (SystemId::SymmetricLinear, Parity::Even) => {
            Ok(T::one() / (T::two() * state.lambda).sqrt())
        }
        (SystemId::SymmetricLinear, _) | (SystemId::Bouncer, _) => Ok(T::zero()),
        (SystemId::HalfSho, _) => Ok(half_sho_slope(state.n)),
        (SystemId::FullSho, _) => Err(Error::Domain(
            "the full oscillator has no boundary at the origin".into(),
        )),
    }
}

/// psi'(0): 1/sqrt(2) for odd linear, 1 for bouncer, 0 for even linear.
pub fn boundary_slope<T: Real>(state: &SpectralPoint<T>) -> Result<T> {
    match (state.system, state.parity) {
        (SystemId::SymmetricLinear, Parity::Odd) => Ok(T::FRAC_1_SQRT_2()),
        (SystemId::SymmetricLinear, _) => Ok(T::zero()),
        (SystemId::Bouncer, _) => Ok(T::one()),
        (SystemId::HalfSho, _) => Ok(half_sho_slope(state.n)),
        (SystemId::FullSho, _) => Err(Error::Domain(
            "the full oscillator has no boundary at the origin".into(),
        )),
    }
}

/// psi~_n'(0) = (-1)^n sqrt(D_n) / pi^(1/4).
pub fn half_sho_slope<T: Real>(n: usize) -> T {
    let mag = d_value::<T>(n).sqrt() / T::PI().sqrt().sqrt();
    if n.is_multiple_of(2) {
        mag
    } else {
        -mag
    }
}

/// Wavefunction and derivative at `y`.
///
/// Linear and bouncer states use |y| with the parity sign on y < 0; the
/// half oscillator is `sqrt(2) psi_{2n+1}` restricted to y >= 0.
pub fn wavefunction<T: Real>(state: &SpectralPoint<T>, y: T) -> Result<(T, T)> {
    if !y.is_finite() {
        return Err(Error::Domain(format!("non-finite position {y}")));
    }
    match state.system {
        SystemId::SymmetricLinear | SystemId::Bouncer => {
            let norm = airy_normalization(state)?;
            let (a, ap) = airy_pair_unchecked(y.abs() - state.lambda);
            let (v, d) = (norm * a, norm * ap);
            if y < T::zero() {
                if state.system == SystemId::Bouncer {
                    return Ok((T::zero(), T::zero()));
                }
                return Ok(match state.parity {
                    Parity::Odd => (-v, d),
                    _ => (v, -d),
                });
            }
            Ok((v, d))
        }
        SystemId::HalfSho => {
            if y < T::zero() {
                return Ok((T::zero(), T::zero()));
            }
            let (v, d) = hermite_with_derivative(2 * state.n + 1, y);
            Ok((T::SQRT_2() * v, T::SQRT_2() * d))
        }
        SystemId::FullSho => Ok(hermite_with_derivative(state.n, y)),
    }
}

/// Wavefunction value only; cheaper for the oscillators.
pub fn wavefunction_value<T: Real>(state: &SpectralPoint<T>, y: T) -> Result<T> {
    match state.system {
        SystemId::HalfSho if y >= T::zero() && y.is_finite() => {
            Ok(T::SQRT_2() * hermite_unchecked(2 * state.n + 1, y))
        }
        SystemId::FullSho if y.is_finite() => Ok(hermite_unchecked(state.n, y)),
        _ => wavefunction(state, y).map(|p| p.0),
    }
}
