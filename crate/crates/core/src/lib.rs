//! Exact arithmetic engine for Hilbert cusp forms of parallel weight 2 over
//! `Q` and real quadratic fields of narrow class number one, computed with
//! Brandt modules of totally definite quaternion algebras.
//!
//! The pipeline runs bottom-up:
//!
//! * [`arith`]: the base field, its ideals and residue rings, integer
//!   lattices and short-vector enumeration.
//! * [`p1`]: the projective line over `Z_F/N`.
//! * [`quat`]: quaternion algebras, maximal orders, right ideal classes and
//!   residue splittings.
//! * [`brandt`]: the Brandt module with Hecke and Atkin–Lehner operators.
//! * [`linalg`]: exact linear algebra over `Q` (characteristic polynomials,
//!   factorization, old/new splitting, eigensystems).
//! * [`analysis`]: CM and base-change verdicts, L-function data, Hecke-field
//!   statistics.
//! * [`db`]: per-level pipeline, the line-oriented database format, queries
//!   and the two-algebra cross-check.

pub mod analysis;
pub mod arith;
pub mod brandt;
pub mod db;
mod error;
pub mod linalg;
pub mod p1;
pub mod par;
pub mod quat;

pub use error::{Error, Result};
