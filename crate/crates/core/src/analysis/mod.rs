//! Verdicts and derived data computed from stored eigensystems.

pub mod basechange;
pub mod cm;
pub mod lfunc;
pub mod record;
pub mod stats;

pub use basechange::{conjugate_record, conjugation_test, detect_base_change};
pub use cm::detect_cm;
pub use lfunc::{lfunction_coefficients, LFunctionData};
pub use record::{BaseChangeVerdict, CmVerdict, NewformRecord};
pub use stats::{hecke_field_stats, HeckeFieldStats};
