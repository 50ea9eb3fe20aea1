//! Base field arithmetic: `Q` or a real quadratic field with narrow class
//! number one, its ideals, residue rings, and integer lattices.

pub mod field;
pub mod ideal;
pub mod intmat;
pub mod lattice;
pub mod residue;

pub use field::{BaseField, FieldElement, Zf};
pub use ideal::{Ideal, PrimeIdeal};
pub use lattice::GramLattice;
pub use residue::{LocalRing, ResidueRing};
