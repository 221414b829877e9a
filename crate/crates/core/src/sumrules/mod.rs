//! Sum families, the accelerated series engine and the identity registry.

mod family;
mod registry;
mod series;

pub use family::{evaluate_sum, tilde_sums, SumEngine, SumFamily, SumFamilyKind};
pub use registry::{
    find_identity, registry, verify_identity, write_reports_csv, IdentityMember, IdentityRecord,
    ResidualKind, VerificationConfig, VerificationReport, Verifier, CSV_HEADER,
};
pub use series::{
    sum_series, Series, SumEvaluation, SummationConfig, TailMethod, MIN_EXPLICIT_TERMS,
};
