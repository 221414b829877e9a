//! The inverse-power sum families over Airy zeros and the half-oscillator `D_k` sums.

use serde::{Deserialize, Serialize};

use super::series::{sum_series, Series, SumEvaluation, SummationConfig};
use crate::error::{Error, Result};
use crate::num::Real;
use crate::specfun::{d_continuous, d_value};
use crate::spectra::{airy_zero, asymptotic_zero, zero_table, ZeroKind, ZeroTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SumFamilyKind {
    /// sum_k 1 / (eta_k (eta_k - zeta_n)^p)
    T,
    /// (1/eta_n) sum_k 1 / (zeta_k - eta_n)^p
    U,
    /// sum_k 1 / (eta_k - zeta_n)^p
    Ttilde,
    /// sum_k 1 / (zeta_k - eta_n)^p
    Utilde,
    /// sum_{k != n} 1 / (zeta_k - zeta_n)^p
    S,
    /// sum_{k != n} (eta_n + eta_k)^2 / (eta_n eta_k (eta_k - eta_n)^7)
    EvenEvenMonopole,
    /// D_n sum_k (k - n) D_k / [4(n-k)^2 - 1]^2
    HalfShoTrk,
    /// D_n sum_k D_k / [4(n-k)^2 - 1]^2
    HalfShoCompleteness,
    /// D_n sum_k k D_k / [4(n-k)^2 - 1]^2
    HalfShoKWeighted,
}

impl SumFamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            SumFamilyKind::T => "T",
            SumFamilyKind::U => "U",
            SumFamilyKind::Ttilde => "Ttilde",
            SumFamilyKind::Utilde => "Utilde",
            SumFamilyKind::S => "S",
            SumFamilyKind::EvenEvenMonopole => "EvenEvenMonopole",
            SumFamilyKind::HalfShoTrk => "HalfShoTRK",
            SumFamilyKind::HalfShoCompleteness => "HalfShoCompleteness",
            SumFamilyKind::HalfShoKWeighted => "HalfShoKWeighted",
        }
    }

    /// Smallest power for which the family is accepted.
    pub fn min_power(self) -> Option<i32> {
        match self {
            SumFamilyKind::T
            | SumFamilyKind::U
            | SumFamilyKind::Ttilde
            | SumFamilyKind::Utilde
            | SumFamilyKind::S => Some(2),
            _ => None,
        }
    }

    pub fn is_half_sho(self) -> bool {
        matches!(
            self,
            SumFamilyKind::HalfShoTrk
                | SumFamilyKind::HalfShoCompleteness
                | SumFamilyKind::HalfShoKWeighted
        )
    }

    /// Kind of the fixed state's eigenvalue.
    pub fn fixed_kind(self) -> Option<ZeroKind> {
        match self {
            SumFamilyKind::T | SumFamilyKind::Ttilde | SumFamilyKind::S => Some(ZeroKind::AiZero),
            SumFamilyKind::U | SumFamilyKind::Utilde | SumFamilyKind::EvenEvenMonopole => {
                Some(ZeroKind::AiPrimeZero)
            }
            _ => None,
        }
    }

    /// Kind of the summed eigenvalue.
    pub fn summed_kind(self) -> Option<ZeroKind> {
        match self {
            SumFamilyKind::T | SumFamilyKind::Ttilde | SumFamilyKind::EvenEvenMonopole => {
                Some(ZeroKind::AiPrimeZero)
            }
            SumFamilyKind::U | SumFamilyKind::Utilde | SumFamilyKind::S => Some(ZeroKind::AiZero),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumFamily {
    pub tag: SumFamilyKind,
    /// Inverse power; ignored by the monopole and half-oscillator families.
    pub p: i32,
    /// Fixed state (1-based for Airy families, 0-based for the half oscillator).
    pub n: usize,
}

impl SumFamily {
    pub fn new(tag: SumFamilyKind, p: i32, n: usize) -> Self {
        Self { tag, p, n }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(min_p) = self.tag.min_power() {
            if self.p < min_p {
                return Err(Error::Divergence {
                    family: self.tag.name().into(),
                    p: self.p,
                    min_p,
                });
            }
        }
        if !self.tag.is_half_sho() && self.n == 0 {
            return Err(Error::Index(format!(
                "{} sums are indexed from n = 1",
                self.tag.name()
            )));
        }
        Ok(())
    }
}

/// Zero tables shared by many sum evaluations.
#[derive(Clone, Debug)]
pub struct SumEngine<T: Real = f64> {
    cfg: SummationConfig,
    zeta: ZeroTable<T>,
    eta: ZeroTable<T>,
}

impl<T: Real> SumEngine<T> {
    pub fn new(cfg: SummationConfig) -> Result<Self> {
        cfg.validate()?;
        let count = cfg.explicit_terms.max(cfg.refine_upto) + 1;
        let zeta = zero_table(ZeroKind::AiZero, count, cfg.refine_upto)?;
        let eta = zero_table(ZeroKind::AiPrimeZero, count, cfg.refine_upto)?;
        Ok(Self { cfg, zeta, eta })
    }

    pub fn config(&self) -> &SummationConfig {
        &self.cfg
    }

    pub fn table(&self, kind: ZeroKind) -> &ZeroTable<T> {
        match kind {
            ZeroKind::AiZero => &self.zeta,
            ZeroKind::AiPrimeZero => &self.eta,
        }
    }

    /// Eigenvalue of the fixed state: always Newton-refined.
    pub fn fixed_zero(&self, kind: ZeroKind, n: usize) -> Result<T> {
        if n <= self.cfg.refine_upto {
            Ok(self.table(kind).get(n).expect("table covers refine_upto"))
        } else {
            airy_zero(kind, n)
        }
    }

    pub fn evaluate(&self, family: &SumFamily) -> Result<SumEvaluation<T>> {
        family.validate()?;
        let needed = 2 * family.n + super::series::MIN_EXPLICIT_TERMS;
        if self.cfg.explicit_terms < needed {
            return Err(Error::Argument(format!(
                "explicit_terms = {} is too small for n = {} (need at least {needed})",
                self.cfg.explicit_terms, family.n
            )));
        }
        if family.tag.is_half_sho() {
            let s = HalfShoSeries::<T>::new(family.tag, family.n);
            sum_series(&s, &self.cfg)
        } else {
            let fixed = self.fixed_zero(family.tag.fixed_kind().unwrap(), family.n)?;
            let summed = family.tag.summed_kind().unwrap();
            let s = AirySeries {
                tag: family.tag,
                p: family.p,
                n: family.n,
                fixed,
                table: self.table(summed),
            };
            sum_series(&s, &self.cfg)
        }
    }

    /// (T~_p(n), U~_p(n)) from T~ = zeta_n T_p + T_{p-1} and U~ = eta_n U_p.
    pub fn tilde_sums(&self, p: i32, n: usize) -> Result<(T, T)> {
        if p < 3 {
            return Err(Error::Divergence {
                family: "Ttilde".into(),
                p,
                min_p: 3,
            });
        }
        let zeta = self.fixed_zero(ZeroKind::AiZero, n)?;
        let eta = self.fixed_zero(ZeroKind::AiPrimeZero, n)?;
        let tp = self.evaluate(&SumFamily::new(SumFamilyKind::T, p, n))?.total;
        let tp1 = self.evaluate(&SumFamily::new(SumFamilyKind::T, p - 1, n))?.total;
        let up = self.evaluate(&SumFamily::new(SumFamilyKind::U, p, n))?.total;
        Ok((zeta * tp + tp1, eta * up))
    }
}

/// Evaluates one family with a freshly built engine.
pub fn evaluate_sum<T: Real>(family: &SumFamily, cfg: &SummationConfig) -> Result<SumEvaluation<T>> {
    family.validate()?;
    SumEngine::<T>::new(cfg.clone())?.evaluate(family)
}

pub fn tilde_sums<T: Real>(p: i32, n: usize, cfg: &SummationConfig) -> Result<(T, T)> {
    if p < 3 {
        return Err(Error::Divergence {
            family: "Ttilde".into(),
            p,
            min_p: 3,
        });
    }
    SumEngine::<T>::new(cfg.clone())?.tilde_sums(p, n)
}

struct AirySeries<'a, T: Real> {
    tag: SumFamilyKind,
    p: i32,
    n: usize,
    fixed: T,
    table: &'a ZeroTable<T>,
}

impl<T: Real> AirySeries<'_, T> {
    fn value(&self, lk: T) -> T {
        let ln = self.fixed;
        match self.tag {
            SumFamilyKind::T => (lk * (lk - ln).powi(self.p)).recip(),
            SumFamilyKind::U => (ln * (lk - ln).powi(self.p)).recip(),
            SumFamilyKind::Ttilde | SumFamilyKind::Utilde | SumFamilyKind::S => {
                (lk - ln).powi(self.p).recip()
            }
            SumFamilyKind::EvenEvenMonopole => {
                let s = ln + lk;
                s * s / (ln * lk * (lk - ln).powi(7))
            }
            _ => unreachable!("half-oscillator family routed to the Airy series"),
        }
    }

    fn excludes_diagonal(&self) -> bool {
        matches!(self.tag, SumFamilyKind::S | SumFamilyKind::EvenEvenMonopole)
    }
}

impl<T: Real> Series<T> for AirySeries<'_, T> {
    fn first_index(&self) -> usize {
        1
    }

    fn term(&self, k: usize) -> Option<T> {
        if self.excludes_diagonal() && k == self.n {
            return None;
        }
        Some(self.value(self.table.get_or_extrapolate(k)))
    }

    fn model(&self, k: T) -> T {
        self.value(asymptotic_zero(self.table.kind, k))
    }

    fn substitution_power(&self) -> i32 {
        3
    }
}

struct HalfShoSeries<T: Real> {
    tag: SumFamilyKind,
    n: usize,
    dn: T,
}

impl<T: Real> HalfShoSeries<T> {
    fn new(tag: SumFamilyKind, n: usize) -> Self {
        Self {
            tag,
            n,
            dn: d_value(n),
        }
    }

    fn value(&self, k: T, dk: T) -> T {
        let d = T::from_usize(self.n) - k;
        let den = T::lit(4.0) * d * d - T::one();
        let base = self.dn * dk / (den * den);
        match self.tag {
            SumFamilyKind::HalfShoTrk => -d * base,
            SumFamilyKind::HalfShoCompleteness => base,
            SumFamilyKind::HalfShoKWeighted => k * base,
            _ => unreachable!("Airy family routed to the oscillator series"),
        }
    }
}

impl<T: Real> Series<T> for HalfShoSeries<T> {
    fn first_index(&self) -> usize {
        0
    }

    fn term(&self, k: usize) -> Option<T> {
        Some(self.value(T::from_usize(k), d_value(k)))
    }

    fn model(&self, k: T) -> T {
        self.value(k, d_continuous(k))
    }

    fn substitution_power(&self) -> i32 {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divergence_below_threshold() {
        for tag in [SumFamilyKind::T, SumFamilyKind::U, SumFamilyKind::S, SumFamilyKind::Utilde] {
            let err = evaluate_sum::<f64>(&SumFamily::new(tag, 1, 1), &SummationConfig::default())
                .unwrap_err();
            assert!(matches!(err, Error::Divergence { min_p: 2, .. }), "{tag:?}");
        }
        assert!(matches!(
            tilde_sums::<f64>(2, 1, &SummationConfig::default()),
            Err(Error::Divergence { min_p: 3, .. })
        ));
    }

    #[test]
    fn index_checks() {
        let cfg = SummationConfig::default();
        assert!(matches!(
            evaluate_sum::<f64>(&SumFamily::new(SumFamilyKind::S, 3, 0), &cfg),
            Err(Error::Index(_))
        ));
        let small = SummationConfig {
            explicit_terms: 100,
            ..Default::default()
        };
        assert!(matches!(
            evaluate_sum::<f64>(&SumFamily::new(SumFamilyKind::S, 3, 10), &small),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn trk_and_force_momentum() {
        let engine = SumEngine::<f64>::new(SummationConfig::default()).unwrap();
        let t5 = engine.evaluate(&SumFamily::new(SumFamilyKind::T, 5, 1)).unwrap();
        assert!((t5.total - 0.25).abs() < 1e-10);
        let t3 = engine.evaluate(&SumFamily::new(SumFamilyKind::T, 3, 4)).unwrap();
        assert!(t3.total.abs() < 1e-9);
        let u2 = engine.evaluate(&SumFamily::new(SumFamilyKind::U, 2, 2)).unwrap();
        assert!((u2.total - 1.0).abs() < 1e-6);
    }
}
