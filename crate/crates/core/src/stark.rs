//! Classical densities and moments, the semiclassical density check, and
//! Stark-effect shifts from WKB closed forms and second-order perturbation sums.
//!
//! Linear-potential Stark values are in units of (Fbar/F)^2 F rho, so the
//! coefficient `value / energy` is the multiple of the unperturbed level.
//! Half-oscillator values are in units of Fbar beta (first order) and
//! Fbar^2 / (m omega^2) (second order), with hbar omega = 1.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matelem::{dipole_half_sho, dipole_half_sho_squared, dipole_linear_from, moment_table};
use crate::num::Real;
use crate::specfun::{airy_pair_unchecked, d_continuous, d_value};
use crate::spectra::{airy_zero, asymptotic_zero, Parity, SpectralPoint, SystemId, ZeroKind, ZeroTable};
use crate::sumrules::{sum_series, Series, SumEngine, SumEvaluation, SummationConfig, MIN_EXPLICIT_TERMS};

/// Classical position density of a state at the quantum energy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalDensitySpec<T = f64> {
    pub system: SystemId,
    pub n: usize,
    /// Outer turning point A_n.
    pub turning_point: T,
}

impl<T: Real> ClassicalDensitySpec<T> {
    /// Bouncer and symmetric linear states use A = zeta_n (odd) or eta_n (even);
    /// the half oscillator uses A = sqrt(4n+3).
    pub fn new(system: SystemId, parity: Parity, n: usize) -> Result<Self> {
        let state = state_for(system, parity, n)?;
        Ok(Self {
            system,
            n,
            turning_point: state.turning_point(),
        })
    }

    /// Density at y; zero outside the allowed region.
    pub fn density(&self, y: T) -> T {
        let a = self.turning_point;
        match self.system {
            SystemId::Bouncer => {
                if y < T::zero() || y >= a {
                    T::zero()
                } else {
                    T::half() / (a * (a - y)).sqrt()
                }
            }
            SystemId::SymmetricLinear => {
                let u = y.abs();
                if u >= a {
                    T::zero()
                } else {
                    T::lit(0.25) / (a * (a - u)).sqrt()
                }
            }
            SystemId::HalfSho => {
                if y < T::zero() || y >= a {
                    T::zero()
                } else {
                    T::two() / (T::PI() * (a * a - y * y).sqrt())
                }
            }
            SystemId::FullSho => unreachable!("rejected in new"),
        }
    }

    /// Probability of finding the particle below y.
    pub fn cumulative(&self, y: T) -> T {
        let a = self.turning_point;
        match self.system {
            SystemId::Bouncer => {
                let y = y.max(T::zero()).min(a);
                T::one() - ((a - y) / a).sqrt()
            }
            SystemId::SymmetricLinear => {
                let y = y.max(-a).min(a);
                let half_mass = T::half() * (T::one() - ((a - y.abs()) / a).sqrt());
                if y < T::zero() {
                    T::half() - half_mass
                } else {
                    T::half() + half_mass
                }
            }
            SystemId::HalfSho => {
                let y = y.max(T::zero()).min(a);
                T::two() / T::PI() * (y / a).asin()
            }
            SystemId::FullSho => unreachable!("rejected in new"),
        }
    }
}

fn state_for<T: Real>(system: SystemId, parity: Parity, n: usize) -> Result<SpectralPoint<T>> {
    match system {
        SystemId::Bouncer => SpectralPoint::bouncer(n),
        SystemId::SymmetricLinear => SpectralPoint::linear(parity, n),
        SystemId::HalfSho => Ok(SpectralPoint::half_sho(n)),
        SystemId::FullSho => Err(Error::Domain(
            "classical densities are provided for the bouncer, the symmetric linear potential and the half oscillator".into(),
        )),
    }
}

/// A^p 2^p p! / (2p+1)!!
fn linear_moment_factor<T: Real>(p: u32) -> T {
    (1..=p).fold(T::one(), |acc, j| {
        acc * T::two() * T::from_usize(j as usize) / T::from_usize(2 * j as usize + 1)
    })
}

/// Gamma((1+p)/2) / (sqrt(pi) Gamma(1+p/2)), via the Wallis recursion.
fn half_sho_moment_factor<T: Real>(p: u32) -> T {
    let mut w = if p.is_multiple_of(2) { T::one() } else { T::two() / T::PI() };
    let mut j = if p.is_multiple_of(2) { 2 } else { 3 };
    while j <= p {
        w = w * T::from_usize(j as usize - 1) / T::from_usize(j as usize);
        j += 2;
    }
    w
}

/// Classical `<|y|^p>` for the state's own turning point.
///
/// Bouncer and symmetric linear: A^p Gamma(1+p) Gamma(1/2) / (2 Gamma(p+3/2)).
/// Half oscillator: A^p Gamma((1+p)/2) / (sqrt(pi) Gamma(1+p/2)).
pub fn classical_moment<T: Real>(system: SystemId, parity: Parity, p: i32, n: usize) -> Result<T> {
    if p < 0 {
        return Err(Error::Argument(format!("moment power must be >= 0, got {p}")));
    }
    let spec = ClassicalDensitySpec::<T>::new(system, parity, n)?;
    let p = p as u32;
    let factor = match system {
        SystemId::HalfSho => half_sho_moment_factor::<T>(p),
        _ => linear_moment_factor::<T>(p),
    };
    Ok(spec.turning_point.powi(p as i32) * factor)
}

/// Quantum `<|y|^p>` from the exact moment recursion over the classical value.
pub fn leading_term_ratio<T: Real>(parity: Parity, p: u32, n: usize) -> Result<T> {
    let table = moment_table(parity, p)?;
    let state = SpectralPoint::<T>::linear(parity, n)?;
    let quantum = table[p as usize].eval(state.lambda);
    let classical = classical_moment::<T>(SystemId::SymmetricLinear, parity, p as i32, n)?;
    Ok(quantum / classical)
}

/// Largest relative deviation between the window-averaged bouncer density
/// |psi_n|^2 and the classical density, over windows centred in the inner
/// 80% of [0, zeta_n].
///
/// A window covers `window` local wavelengths, i.e. `2 window` consecutive
/// lobes between nodes, so the oscillating factor averages without bias.
pub fn semiclassical_density_check<T: Real>(n: usize, window: T) -> Result<T> {
    if n < 10 {
        return Err(Error::Argument(format!(
            "the density check needs n >= 10, got {n}"
        )));
    }
    if !(window >= T::one()) {
        return Err(Error::Argument(format!(
            "window must span at least one local wavelength, got {window}"
        )));
    }
    let lobes = (T::two() * window).round().to_f64_lossy() as usize;
    let zeros = (1..=n)
        .map(|k| airy_zero::<T>(ZeroKind::AiZero, k))
        .collect::<Result<Vec<T>>>()?;
    let zn = zeros[n - 1];
    // Nodes in ascending y: the wall, then zeta_n - zeta_j for j = n-1 down to 1.
    let nodes: Vec<T> = (0..n).map(|i| zn - zeros[n - 1 - i]).collect();
    if lobes >= nodes.len() {
        return Err(Error::Argument(format!(
            "window of {lobes} lobes exceeds the {} lobes of state {n}",
            nodes.len() - 1
        )));
    }
    let spec = ClassicalDensitySpec {
        system: SystemId::Bouncer,
        n,
        turning_point: zn,
    };
    let slope0 = airy_pair_unchecked(-zn).1;
    // At nodes Ai = 0, so int Ai(y - zeta)^2 dy = -Ai'(y - zeta)^2 between them.
    let slope_sq = |y: T| {
        let d = airy_pair_unchecked(y - zn).1 / slope0;
        d * d
    };
    let (lo, hi) = (T::lit(0.1) * zn, T::lit(0.9) * zn);
    let mut worst = T::zero();
    for i in 0..nodes.len() - lobes {
        let (a, b) = (nodes[i], nodes[i + lobes]);
        let mid = (a + b) * T::half();
        if mid < lo || mid > hi {
            continue;
        }
        let width = b - a;
        let quantum = (slope_sq(a) - slope_sq(b)) / width;
        let classical = (spec.cumulative(b) - spec.cumulative(a)) / width;
        worst = worst.max(((quantum - classical) / classical).abs());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StarkMethod {
    #[serde(rename = "WKB")]
    Wkb,
    #[serde(rename = "PT")]
    Pt,
}

impl StarkMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            StarkMethod::Wkb => "WKB",
            StarkMethod::Pt => "PT",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StarkResult<T = f64> {
    pub system: SystemId,
    pub parity: Parity,
    pub n: usize,
    pub order: u8,
    pub method: StarkMethod,
    pub value: T,
    /// Unperturbed energy in the same energy unit as `value`.
    pub energy: T,
    /// Explicit terms of the perturbation sum (0 for closed forms).
    pub terms: usize,
    pub tail: T,
    pub est_error: T,
}

impl<T: Real> StarkResult<T> {
    fn closed(system: SystemId, parity: Parity, n: usize, order: u8, method: StarkMethod, value: T, energy: T) -> Self {
        Self {
            system,
            parity,
            n,
            order,
            method,
            value,
            energy,
            terms: 0,
            tail: T::zero(),
            est_error: T::zero(),
        }
    }

    /// `value / energy`; for the linear potential the multiple of E_n.
    pub fn coefficient(&self) -> T {
        self.value / self.energy
    }
}

/// Exact second-order shift of the symmetric linear potential:
/// -7/9 E_n for odd states and -5/9 E_n for even states.
pub fn stark_linear_closed_form<T: Real>(parity: Parity, n: usize) -> Result<StarkResult<T>> {
    let state = SpectralPoint::<T>::linear(parity, n)?;
    let c = match parity {
        Parity::Odd => T::lit(-7.0 / 9.0),
        _ => T::lit(-5.0 / 9.0),
    };
    Ok(StarkResult::closed(
        SystemId::SymmetricLinear,
        parity,
        n,
        2,
        StarkMethod::Pt,
        c * state.lambda,
        state.lambda,
    ))
}

/// WKB second-order shift of the symmetric linear potential, -6/9 of the
/// WKB level (3 pi (m + 1/2) / 4)^(2/3), with m counting both parities from 0.
pub fn stark_linear_wkb<T: Real>(parity: Parity, n: usize) -> Result<StarkResult<T>> {
    let m = match parity {
        Parity::Even if n >= 1 => 2 * (n - 1),
        Parity::Odd if n >= 1 => 2 * n - 1,
        Parity::None => {
            return Err(Error::Domain(
                "symmetric linear states are even or odd".into(),
            ))
        }
        _ => return Err(Error::Index("linear states are numbered from 1".into())),
    };
    let e0 = (T::lit(0.75) * T::PI() * (T::from_usize(m) + T::half())).powf(T::lit(2.0 / 3.0));
    Ok(StarkResult::closed(
        SystemId::SymmetricLinear,
        parity,
        n,
        2,
        StarkMethod::Wkb,
        T::lit(-2.0 / 3.0) * e0,
        e0,
    ))
}

/// First-order shift of the symmetric linear potential: the diagonal dipole
/// vanishes by parity.
pub fn stark_linear_first_order<T: Real>(parity: Parity, n: usize) -> Result<StarkResult<T>> {
    let state = SpectralPoint::<T>::linear(parity, n)?;
    Ok(StarkResult::closed(
        SystemId::SymmetricLinear,
        parity,
        n,
        1,
        StarkMethod::Pt,
        T::zero(),
        state.lambda,
    ))
}

/// WKB half-oscillator energies: order 0 is 2n + 3/2, order 1 is
/// (2/pi) sqrt(4n+3), order 2 is -1/2 + 4/pi^2.
pub fn wkb_half_sho<T: Real>(n: usize, order: u8) -> Result<StarkResult<T>> {
    let e0 = T::from_usize(2 * n) + T::lit(1.5);
    let value = match order {
        0 => e0,
        1 => T::two() / T::PI() * T::from_usize(4 * n + 3).sqrt(),
        2 => T::lit(4.0) / (T::PI() * T::PI()) - T::half(),
        _ => {
            return Err(Error::Argument(format!(
                "WKB order must be 0, 1 or 2, got {order}"
            )))
        }
    };
    Ok(StarkResult::closed(SystemId::HalfSho, Parity::None, n, order, StarkMethod::Wkb, value, e0))
}

/// Exact first-order half-oscillator shift `<n|y|n>` = D_n / (2 sqrt(pi)).
pub fn pt1_half_sho<T: Real>(n: usize) -> StarkResult<T> {
    let e0 = T::from_usize(2 * n) + T::lit(1.5);
    StarkResult::closed(
        SystemId::HalfSho,
        Parity::None,
        n,
        1,
        StarkMethod::Pt,
        dipole_half_sho::<T>(n, n),
        e0,
    )
}

/// sum_k |<n|y|k>|^2 / (E_n - E_k) over the opposite-parity linear states.
struct LinearPt2<'a, T: Real> {
    parity: Parity,
    fixed: T,
    table: &'a ZeroTable<T>,
}

impl<T: Real> LinearPt2<'_, T> {
    fn value(&self, lk: T) -> T {
        let (zeta, eta) = match self.parity {
            Parity::Odd => (self.fixed, lk),
            _ => (lk, self.fixed),
        };
        let d = dipole_linear_from(zeta, eta);
        d * d / (self.fixed - lk)
    }
}

impl<T: Real> Series<T> for LinearPt2<'_, T> {
    fn first_index(&self) -> usize {
        1
    }
    fn term(&self, k: usize) -> Option<T> {
        Some(self.value(self.table.get_or_extrapolate(k)))
    }
    fn model(&self, k: T) -> T {
        self.value(asymptotic_zero(self.table.kind, k))
    }
    fn substitution_power(&self) -> i32 {
        3
    }
}

/// sum_{k != n} |<n|y|k>|^2 / (2(n - k)) for the half oscillator.
struct HalfShoPt2<T: Real> {
    n: usize,
    dn: T,
}

impl<T: Real> HalfShoPt2<T> {
    fn value(&self, k: T, dk: T) -> T {
        let d = T::from_usize(self.n) - k;
        let den = T::lit(4.0) * d * d - T::one();
        self.dn * dk / (T::lit(4.0) * T::PI() * den * den) / (T::two() * d)
    }
}

impl<T: Real> Series<T> for HalfShoPt2<T> {
    fn first_index(&self) -> usize {
        0
    }
    fn term(&self, k: usize) -> Option<T> {
        if k == self.n {
            return None;
        }
        Some(dipole_half_sho_squared::<T>(self.n, k) / (T::two() * (T::from_usize(self.n) - T::from_usize(k))))
    }
    fn model(&self, k: T) -> T {
        self.value(k, d_continuous(k))
    }
    fn substitution_power(&self) -> i32 {
        2
    }
}

fn from_sum<T: Real>(system: SystemId, parity: Parity, n: usize, energy: T, s: SumEvaluation<T>) -> StarkResult<T> {
    StarkResult {
        system,
        parity,
        n,
        order: 2,
        method: StarkMethod::Pt,
        value: s.total,
        energy,
        terms: s.explicit_terms,
        tail: s.tail_estimate,
        est_error: s.est_error,
    }
}

fn check_terms(cfg: &SummationConfig, n: usize) -> Result<()> {
    cfg.validate()?;
    let needed = 2 * n + MIN_EXPLICIT_TERMS;
    if cfg.explicit_terms < needed {
        return Err(Error::Argument(format!(
            "explicit_terms = {} is too small for n = {n} (need at least {needed})",
            cfg.explicit_terms
        )));
    }
    Ok(())
}

fn half_sho_pt2<T: Real>(n: usize, cfg: &SummationConfig) -> Result<StarkResult<T>> {
    check_terms(cfg, n)?;
    let series = HalfShoPt2 { n, dn: d_value::<T>(n) };
    let s = sum_series(&series, cfg)?;
    let e0 = T::from_usize(2 * n) + T::lit(1.5);
    Ok(from_sum(SystemId::HalfSho, Parity::None, n, e0, s))
}

/// Second-order perturbation sum using an existing engine's zero tables.
pub fn pt2_shift_with<T: Real>(engine: &SumEngine<T>, system: SystemId, parity: Parity, n: usize) -> Result<StarkResult<T>> {
    let cfg = engine.config();
    match system {
        SystemId::SymmetricLinear => {
            check_terms(cfg, n)?;
            let state = SpectralPoint::<T>::linear(parity, n)?;
            let (fixed_kind, summed_kind) = match parity {
                Parity::Odd => (ZeroKind::AiZero, ZeroKind::AiPrimeZero),
                _ => (ZeroKind::AiPrimeZero, ZeroKind::AiZero),
            };
            let fixed = engine.fixed_zero(fixed_kind, n)?;
            let series = LinearPt2 {
                parity,
                fixed,
                table: engine.table(summed_kind),
            };
            let s = sum_series(&series, cfg)?;
            Ok(from_sum(system, parity, n, state.lambda, s))
        }
        SystemId::HalfSho => half_sho_pt2(n, cfg),
        _ => Err(unsupported_pt2(system)),
    }
}

fn unsupported_pt2(system: SystemId) -> Error {
    Error::Domain(format!(
        "second-order Stark sums are provided for the symmetric linear potential and the half oscillator, not {system:?}"
    ))
}

/// Second-order perturbation sum sum_k |<n|y|k>|^2 / (E_n - E_k).
pub fn pt2_shift<T: Real>(system: SystemId, parity: Parity, n: usize, cfg: &SummationConfig) -> Result<StarkResult<T>> {
    match system {
        SystemId::HalfSho => half_sho_pt2(n, cfg),
        SystemId::SymmetricLinear => {
            pt2_shift_with(&SumEngine::<T>::new(cfg.clone())?, system, parity, n)
        }
        _ => Err(unsupported_pt2(system)),
    }
}

/// r1 = 4 sqrt(4n+3) / (sqrt(pi) D_n) - 1.
pub fn r1_closed_form<T: Real>(n: usize) -> T {
    T::lit(4.0) * T::from_usize(4 * n + 3).sqrt() / (T::PI().sqrt() * d_value::<T>(n)) - T::one()
}

/// One row of the WKB / perturbation-theory comparison for the half oscillator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Fig1Row<T = f64> {
    pub n: usize,
    pub r1: T,
    pub r2: T,
    pub pt2_terms: usize,
    pub pt2_tail: T,
}

pub const FIG1_HEADER: [&str; 5] = ["n", "r1", "r2", "pt2_terms", "pt2_tail"];

fn fig1_row<T: Real>(n: usize, cfg: &SummationConfig) -> Result<Fig1Row<T>> {
    let r1 = wkb_half_sho::<T>(n, 1)?.value / pt1_half_sho::<T>(n).value - T::one();
    let pt2 = pt2_shift::<T>(SystemId::HalfSho, Parity::None, n, cfg)?;
    let r2 = wkb_half_sho::<T>(n, 2)?.value / pt2.value - T::one();
    Ok(Fig1Row {
        n,
        r1,
        r2,
        pt2_terms: pt2.terms,
        pt2_tail: pt2.tail,
    })
}

/// Rows n = 0..=n_max of r_i = E^(i)(WKB) / E^(i)(PT) - 1, computed in parallel.
pub fn fig1_series<T: Real + Send + Sync>(n_max: usize, cfg: &SummationConfig) -> Result<Vec<Fig1Row<T>>> {
    if n_max < 4 {
        return Err(Error::Argument(format!("n_max must be at least 4, got {n_max}")));
    }
    cfg.validate()?;
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(n_max + 1);
    let mut rows: Vec<Option<Result<Fig1Row<T>>>> = (0..=n_max).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (w, chunk) in rows.chunks_mut((n_max + workers) / workers).enumerate() {
            let start = w * ((n_max + workers) / workers);
            scope.spawn(move || {
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(fig1_row(start + i, cfg));
                }
            });
        }
    });
    rows.into_iter().map(|r| r.expect("every row computed")).collect()
}

pub fn write_fig1_csv<W: Write, T: Real>(out: W, rows: &[Fig1Row<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Argument(format!("CSV output failed: {e}"));
    w.write_record(FIG1_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            format!("{:.16e}", r.r1.to_f64_lossy()),
            format!("{:.16e}", r.r2.to_f64_lossy()),
            r.pt2_terms.to_string(),
            format!("{:.16e}", r.pt2_tail.to_f64_lossy()),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Argument(format!("CSV output failed: {e}")))?;
    Ok(())
}
