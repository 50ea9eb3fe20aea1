//! Exact linear algebra over `Q`: matrices, integer polynomials,
//! multimodular characteristic polynomials, factorization, Hecke fields and
//! the decomposition into constituents.

pub mod charpoly;
pub mod decompose;
pub mod factor;
pub mod numfield;
pub mod poly;
pub mod qmat;

pub use charpoly::{charpoly, charpoly_q, charpoly_rational};
pub use decompose::{decompose, old_new_split, HeckeConstituent, LabeledOp, OldNew};
pub use factor::factor;
pub use numfield::{Elem, NumberField};
pub use poly::IntPoly;
pub use qmat::{rat, QMat, Rat};
