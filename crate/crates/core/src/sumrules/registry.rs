//! Identity registry and verification reports.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::family::{SumEngine, SumFamily, SumFamilyKind};
use super::series::SummationConfig;
use crate::error::{Error, Result};
use crate::spectra::{Parity, SystemId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResidualKind {
    Relative,
    Absolute,
}

/// One checked equation: a sum family at fixed p against its closed form.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityMember {
    /// Suffix for report ids of multi-member identities ("T", "U").
    pub label: Option<&'static str>,
    pub family: SumFamilyKind,
    pub p: i32,
    /// Parity of the fixed state.
    pub parity: Parity,
    pub rhs_text: &'static str,
    #[serde(skip)]
    rhs: fn(f64, usize) -> f64,
    pub residual: ResidualKind,
    pub default_tolerance: f64,
}

impl IdentityMember {
    /// Closed-form right side given the fixed eigenvalue and index.
    pub fn rhs(&self, lambda_n: f64, n: usize) -> f64 {
        (self.rhs)(lambda_n, n)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRecord {
    pub id: &'static str,
    pub system: SystemId,
    pub members: Vec<IdentityMember>,
    /// Physical origin of the constraint.
    pub provenance: &'static str,
}

impl IdentityRecord {
    /// Smallest valid fixed-state index.
    pub fn first_index(&self) -> usize {
        match self.system {
            SystemId::HalfSho | SystemId::FullSho => 0,
            _ => 1,
        }
    }

    pub fn report_id(&self, m: &IdentityMember) -> String {
        match m.label {
            Some(l) => format!("{}:{l}", self.id),
            None => self.id.to_string(),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn member(
    label: Option<&'static str>,
    family: SumFamilyKind,
    p: i32,
    parity: Parity,
    rhs_text: &'static str,
    rhs: fn(f64, usize) -> f64,
    residual: ResidualKind,
    default_tolerance: f64,
) -> IdentityMember {
    IdentityMember {
        label,
        family,
        p,
        parity,
        rhs_text,
        rhs,
        residual,
        default_tolerance,
    }
}

fn linear_pair(
    id: &'static str,
    p: i32,
    t: (&'static str, fn(f64, usize) -> f64),
    u: (&'static str, fn(f64, usize) -> f64),
    tol: f64,
    provenance: &'static str,
) -> IdentityRecord {
    use ResidualKind::Relative;
    IdentityRecord {
        id,
        system: SystemId::SymmetricLinear,
        members: vec![
            member(Some("T"), SumFamilyKind::T, p, Parity::Odd, t.0, t.1, Relative, tol),
            member(Some("U"), SumFamilyKind::U, p, Parity::Even, u.0, u.1, Relative, tol),
        ],
        provenance,
    }
}

#[allow(clippy::too_many_arguments)]
fn single(
    id: &'static str,
    system: SystemId,
    family: SumFamilyKind,
    p: i32,
    parity: Parity,
    rhs: (&'static str, fn(f64, usize) -> f64),
    tol: f64,
    provenance: &'static str,
) -> IdentityRecord {
    IdentityRecord {
        id,
        system,
        members: vec![member(
            None,
            family,
            p,
            parity,
            rhs.0,
            rhs.1,
            ResidualKind::Relative,
            tol,
        )],
        provenance,
    }
}

/// All registered identities, in reporting order.
pub fn registry() -> Vec<IdentityRecord> {
    use SumFamilyKind as F;
    let lin = 1e-8;
    let bounce = SystemId::Bouncer;
    let half = SystemId::HalfSho;
    vec![
        linear_pair(
            "linear.force_squared",
            2,
            ("1", |_, _| 1.0),
            ("1", |_, _| 1.0),
            1e-6,
            "force-squared sum rule, symmetric linear potential",
        ),
        IdentityRecord {
            id: "linear.force_momentum",
            system: SystemId::SymmetricLinear,
            members: vec![
                member(
                    Some("T"),
                    F::T,
                    3,
                    Parity::Odd,
                    "0",
                    |_, _| 0.0,
                    ResidualKind::Absolute,
                    1e-9,
                ),
                member(
                    Some("U"),
                    F::U,
                    3,
                    Parity::Even,
                    "1/(2 eta_n)",
                    |e, _| 0.5 / e,
                    ResidualKind::Relative,
                    1e-6,
                ),
            ],
            provenance: "force-times-momentum sum rule, symmetric linear potential",
        },
        linear_pair(
            "linear.momentum_completeness",
            4,
            ("zeta_n/3", |z, _| z / 3.0),
            ("eta_n/3", |e, _| e / 3.0),
            lin,
            "momentum completeness, symmetric linear potential",
        ),
        linear_pair(
            "linear.trk",
            5,
            ("1/4", |_, _| 0.25),
            ("1/4", |_, _| 0.25),
            lin,
            "Thomas-Reiche-Kuhn sum rule, symmetric linear potential",
        ),
        linear_pair(
            "linear.z_completeness",
            6,
            ("2 zeta_n^2/15", |z, _| 2.0 * z * z / 15.0),
            ("2 eta_n^2/15 + 1/(20 eta_n)", |e, _| {
                2.0 * e * e / 15.0 + 1.0 / (20.0 * e)
            }),
            lin,
            "position completeness, symmetric linear potential",
        ),
        linear_pair(
            "linear.stark",
            7,
            ("7 zeta_n/36", |z, _| 7.0 * z / 36.0),
            ("5 eta_n/36", |e, _| 5.0 * e / 36.0),
            lin,
            "second-order Stark shift, symmetric linear potential",
        ),
        single(
            "linear.even_monopole",
            SystemId::SymmetricLinear,
            F::EvenEvenMonopole,
            7,
            Parity::Even,
            ("(8 eta_n^2/15 + 1/(5 eta_n))/36", |e, _| {
                (8.0 * e * e / 15.0 + 1.0 / (5.0 * e)) / 36.0
            }),
            lin,
            "monopole sum rule between even states",
        ),
        single(
            "bouncer.trk",
            bounce,
            F::S,
            3,
            Parity::Odd,
            ("1/4", |_, _| 0.25),
            lin,
            "Thomas-Reiche-Kuhn sum rule, quantum bouncer",
        ),
        single(
            "bouncer.momentum_completeness",
            bounce,
            F::S,
            2,
            Parity::Odd,
            ("zeta_n/3", |z, _| z / 3.0),
            lin,
            "momentum completeness, quantum bouncer",
        ),
        single(
            "bouncer.x_completeness",
            bounce,
            F::S,
            4,
            Parity::Odd,
            ("zeta_n^2/45", |z, _| z * z / 45.0),
            lin,
            "position completeness, quantum bouncer",
        ),
        single(
            "bouncer.stark",
            bounce,
            F::S,
            5,
            Parity::Odd,
            ("zeta_n/36", |z, _| z / 36.0),
            lin,
            "second-order Stark shift, quantum bouncer",
        ),
        single(
            "bouncer.monopole",
            bounce,
            F::S,
            7,
            Parity::Odd,
            ("zeta_n^2/270", |z, _| z * z / 270.0),
            lin,
            "monopole sum rule, quantum bouncer",
        ),
        single(
            "halfsho.trk",
            half,
            F::HalfShoTrk,
            0,
            Parity::None,
            ("pi", |_, _| PI),
            1e-6,
            "Thomas-Reiche-Kuhn sum rule, half oscillator",
        ),
        single(
            "halfsho.completeness",
            half,
            F::HalfShoCompleteness,
            0,
            Parity::None,
            ("(8n+6) pi", |_, n| (8 * n + 6) as f64 * PI),
            1e-6,
            "position completeness, half oscillator (all k)",
        ),
        single(
            "halfsho.k_weighted",
            half,
            F::HalfShoKWeighted,
            0,
            Parity::None,
            ("(4n+1)(2n+1) pi", |_, n| ((4 * n + 1) * (2 * n + 1)) as f64 * PI),
            1e-6,
            "index-weighted completeness, half oscillator (all k)",
        ),
    ]
}

pub fn find_identity(id: &str) -> Result<IdentityRecord> {
    registry()
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationConfig {
    pub sum: SummationConfig,
    /// Keyed by identity id ("linear.trk") or report id ("linear.trk:U").
    pub tolerances: BTreeMap<String, f64>,
}

impl VerificationConfig {
    pub fn tolerance_for(&self, record: &IdentityRecord, m: &IdentityMember) -> f64 {
        self.tolerances
            .get(&record.report_id(m))
            .or_else(|| self.tolerances.get(record.id))
            .copied()
            .unwrap_or(m.default_tolerance)
    }

    /// Rejects overrides naming unknown ids or non-positive tolerances.
    pub fn validate(&self) -> Result<()> {
        self.sum.validate()?;
        let reg = registry();
        for (key, &tol) in &self.tolerances {
            let known = reg.iter().any(|r| {
                r.id == key || r.members.iter().any(|m| r.report_id(m) == *key)
            });
            if !known {
                return Err(Error::UnknownIdentity(key.clone()));
            }
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::Argument(format!(
                    "tolerance for {key} must be positive, got {tol}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_res: f64,
    pub rel_res: f64,
    pub terms: usize,
    pub tail: f64,
    pub pass: bool,
    #[serde(skip)]
    pub tolerance: f64,
    #[serde(skip)]
    pub est_error: f64,
}

pub const CSV_HEADER: [&str; 9] = [
    "id", "n", "lhs", "rhs", "abs_res", "rel_res", "terms", "tail", "pass",
];

impl VerificationReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn csv_record(&self) -> [String; 9] {
        let f = |x: f64| format!("{x:.16e}");
        [
            self.id.clone(),
            self.n.to_string(),
            f(self.lhs),
            f(self.rhs),
            f(self.abs_res),
            f(self.rel_res),
            self.terms.to_string(),
            f(self.tail),
            self.pass.to_string(),
        ]
    }
}

pub fn write_reports_csv<W: Write>(out: W, reports: &[VerificationReport]) -> Result<()> {
    let io = |e: csv::Error| Error::Argument(format!("csv write failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in reports {
        w.write_record(r.csv_record()).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Argument(format!("csv flush failed: {e}")))
}

/// Verifies identities against a shared set of zero tables.
pub struct Verifier {
    cfg: VerificationConfig,
    engine: SumEngine<f64>,
}

impl Verifier {
    pub fn new(cfg: VerificationConfig) -> Result<Self> {
        cfg.validate()?;
        let engine = SumEngine::new(cfg.sum.clone())?;
        Ok(Self { cfg, engine })
    }

    pub fn engine(&self) -> &SumEngine<f64> {
        &self.engine
    }

    pub fn verify_record(&self, record: &IdentityRecord, n: usize) -> Result<Vec<VerificationReport>> {
        if n < record.first_index() {
            return Err(Error::Index(format!(
                "{} is indexed from n = {}",
                record.id,
                record.first_index()
            )));
        }
        record
            .members
            .iter()
            .map(|m| {
                let fam = SumFamily::new(m.family, m.p, n);
                let eval = self.engine.evaluate(&fam)?;
                let lambda = match m.family.fixed_kind() {
                    Some(kind) => self.engine.fixed_zero(kind, n)?,
                    None => f64::NAN,
                };
                let rhs = m.rhs(lambda, n);
                let abs_res = (eval.total - rhs).abs();
                let rel_res = if rhs != 0.0 { abs_res / rhs.abs() } else { abs_res };
                let tolerance = self.cfg.tolerance_for(record, m);
                let measured = match m.residual {
                    ResidualKind::Absolute => abs_res,
                    ResidualKind::Relative => rel_res,
                };
                Ok(VerificationReport {
                    id: record.report_id(m),
                    n,
                    lhs: eval.total,
                    rhs,
                    abs_res,
                    rel_res,
                    terms: eval.explicit_terms,
                    tail: eval.tail_estimate,
                    pass: measured <= tolerance,
                    tolerance,
                    est_error: eval.est_error,
                })
            })
            .collect()
    }

    pub fn verify(&self, id: &str, n: usize) -> Result<Vec<VerificationReport>> {
        self.verify_record(&find_identity(id)?, n)
    }
}

/// One-shot verification with a freshly built engine.
pub fn verify_identity(id: &str, n: usize, cfg: &VerificationConfig) -> Result<Vec<VerificationReport>> {
    let record = find_identity(id)?;
    Verifier::new(cfg.clone())?.verify_record(&record, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_shape() {
        let r = registry();
        assert_eq!(r.len(), 15);
        let mut ids: Vec<_> = r.iter().map(|x| x.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 15);
        assert!(ids.contains(&"linear.trk"));
        assert_eq!(r.iter().filter(|x| x.id.starts_with("bouncer.")).count(), 5);
    }

    #[test]
    fn unknown_ids() {
        assert!(matches!(
            verify_identity("bogus", 1, &VerificationConfig::default()),
            Err(Error::UnknownIdentity(_))
        ));
        let mut cfg = VerificationConfig::default();
        cfg.tolerances.insert("nope".into(), 1e-3);
        assert!(cfg.validate().is_err());
        cfg.tolerances.clear();
        cfg.tolerances.insert("linear.trk:U".into(), 1e-3);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn report_formats() {
        let reports = verify_identity("linear.trk", 1, &VerificationConfig::default()).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].id, "linear.trk:T");
        let v: serde_json::Value = serde_json::from_str(&reports[1].to_json_line()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys.len(), 9);
        assert_eq!(v["rhs"], serde_json::json!(0.25));
        let mut buf = Vec::new();
        write_reports_csv(&mut buf, &reports).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("id,n,lhs,rhs,abs_res,rel_res,terms,tail,pass\n"));
    }
}
