//! Totally definite quaternion algebras, maximal orders, right ideal
//! classes and residue splittings.

pub mod algebra;
pub mod classes;
pub mod config;
pub mod order;
pub mod splitting;

pub use algebra::{hilbert_symbol, Place, QuaternionAlgebra, Quat};
pub use classes::{IdealClassSet, RightIdeal};
pub use config::{load_algebra_config, pizer_config};
pub use order::QuaternionOrder;
pub use splitting::{LevelSplitting, LocalSplitting};
