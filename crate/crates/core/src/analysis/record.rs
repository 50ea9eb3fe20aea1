//! The per-constituent newform record shared by analysis and the database.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{BaseField, Ideal};
use crate::linalg::{Elem, NumberField, Rat};
use crate::{Error, Result};

/// Outcome of the square-class CM test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CmVerdict {
    NotCm,
    /// All nonzero-`a_p` discriminants share one square class, given by the
    /// fundamental discriminant of a rational representative; `evidence`
    /// counts primes inert in the CM field with `a_p = 0`.
    Candidate { disc: i64, evidence: usize },
    Untested,
}

/// Outcome of the base-change test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseChangeVerdict {
    /// Not applicable (rational base field).
    None,
    /// `σ(N) ≠ N` or `a_{σp} ≠ a_p` somewhere.
    Not,
    /// Passed the conjugation test; no rational data was searched.
    Stage1,
    /// Passed the conjugation test; no rational form matched.
    Unmatched,
    /// Heuristic match with a rational form, `evidence` primes compared.
    Matched { form: String, evidence: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformRecord {
    pub field: String,
    /// Hermite data `(norm, a, b, c)` of the Brandt level.
    pub level: [i64; 4],
    /// Hermite data of the algebra discriminant.
    pub disc: [i64; 4],
    /// Position among the constituents of the level.
    pub index: usize,
    /// Monic minimal polynomial of the Hecke field generator, increasing.
    pub heckefield: Vec<BigInt>,
    /// Common denominator of the eigenvalue coordinates.
    pub denominator: BigInt,
    /// Classical Atkin–Lehner signs `w_p` at the primes of `D·M`.
    pub al: Vec<(String, i8)>,
    /// Prime labels in canonical order.
    pub primes: Vec<String>,
    /// Numerators of `a_p` in the power basis, empty at primes of `D·M`.
    pub eigenvalues: Vec<Vec<BigInt>>,
    pub cm: CmVerdict,
    pub base_change: BaseChangeVerdict,
    pub prime_bound: i64,
}

pub fn hnf_data(level: &Ideal) -> [i64; 4] {
    let (a, b, c) = level.hnf();
    [level.norm(), a, b, c]
}

pub fn ideal_from_data(field: &BaseField, data: &[i64; 4]) -> Result<Ideal> {
    let id = Ideal::from_hnf(field, data[1], data[2], data[3])?;
    if id.norm() != data[0] {
        return Err(Error::Field(format!("norm {} does not match Hermite data {data:?}", data[0])));
    }
    Ok(id)
}

/// Field from its label `n.r.D.1`.
pub fn field_from_label(label: &str) -> Result<BaseField> {
    let parts: Vec<&str> = label.split('.').collect();
    let bad = || Error::Config(format!("unknown field label {label}"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let disc: i64 = parts[2].parse().map_err(|_| bad())?;
    let f = if parts[0] == "1" { BaseField::rationals() } else { BaseField::new(disc)? };
    if f.label() != label {
        return Err(bad());
    }
    Ok(f)
}

impl NewformRecord {
    /// `field-D-a.b.c-index` with the Hermite data of the level.
    pub fn label(&self) -> String {
        format!("{}-{}-{}.{}.{}-{}", self.field, self.disc[0], self.level[1], self.level[2], self.level[3], self.index)
    }

    pub fn dim(&self) -> usize {
        self.heckefield.len().saturating_sub(1)
    }

    pub fn hecke_field(&self) -> NumberField {
        NumberField::new(crate::linalg::IntPoly::new(self.heckefield.clone()))
    }

    pub fn base_field(&self) -> Result<BaseField> {
        field_from_label(&self.field)
    }

    /// Full level `D·M`.
    pub fn full_level(&self, field: &BaseField) -> Result<Ideal> {
        Ok(ideal_from_data(field, &self.level)?.mul(field, &ideal_from_data(field, &self.disc)?))
    }

    /// `a_p` as an element of the Hecke field, `None` at primes of the level
    /// or when the label is not tabulated.
    pub fn eigenvalue(&self, label: &str) -> Option<Elem> {
        let i = self.primes.iter().position(|p| p == label)?;
        let v = &self.eigenvalues[i];
        if v.is_empty() {
            return None;
        }
        Some(v.iter().map(|c| Rat::new(c.clone(), self.denominator.clone())).collect())
    }

    pub fn al_sign(&self, label: &str) -> Option<i8> {
        self.al.iter().find(|(l, _)| l == label).map(|&(_, s)| s)
    }

    /// Whether every eigenvalue is rational.
    pub fn is_rational(&self) -> bool {
        self.dim() == 1
    }

    /// Number of tabulated eigenvalues.
    pub fn eigenvalue_count(&self) -> usize {
        self.eigenvalues.iter().filter(|v| !v.is_empty()).count()
    }
}

/// Common denominator and integer numerators for a list of coordinate
/// vectors (`None` entries stay empty).
pub fn integral_coordinates(values: &[Option<Elem>]) -> (BigInt, Vec<Vec<BigInt>>) {
    use num_integer::Integer;
    let den = values.iter().flatten().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let nums = values
        .iter()
        .map(|v| match v {
            None => Vec::new(),
            Some(v) => v.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect(),
        })
        .collect();
    (den, nums)
}

/// Eigenvalue of a rational record as an integer.
pub fn rational_value(x: &Elem) -> Option<BigInt> {
    if x.iter().skip(1).all(Zero::is_zero) && x[0].is_integer() {
        Some(x[0].to_integer())
    } else {
        None
    }
}
