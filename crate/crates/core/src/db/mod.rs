//! The per-level pipeline, the database format, queries and the
//! two-algebra cross-check.

pub mod config;
pub mod format;
pub mod pipeline;
pub mod query;
pub mod verify;

pub use config::FieldConfig;
pub use format::{parse, read_database, record_order, serialize, write_database};
pub use query::Query;
pub use verify::{crosscheck_pnew, spot_check, CrosscheckReport, SpotCheck};
pub use pipeline::{build_database, BuildOutput, LevelResult, Pipeline};
