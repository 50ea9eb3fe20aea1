//! Dirichlet coefficients and functional-equation data from the Euler
//! product.

use std::collections::{BTreeMap, HashMap};

use crate::analysis::record::NewformRecord;
use crate::arith::ideal::{factor_ideal, ideals_in_range};
use crate::arith::{BaseField, Ideal, PrimeIdeal};
use crate::linalg::{Elem, NumberField, Rat};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LFunctionData {
    /// `d_F²·Nm(N)`
    pub conductor: i64,
    /// Number of `Γ_C(s + 1/2)` factors.
    pub gamma_exponent: usize,
    /// `a_m` for `m = 1..=bound` (index `m − 1`), summed over ideals of
    /// norm `m`; `None` where some ideal of that norm has no known
    /// coefficient.
    pub coefficients: Vec<Option<Elem>>,
    /// Coefficient of each ideal of norm at most the bound.
    pub by_ideal: BTreeMap<Ideal, Option<Elem>>,
}

impl LFunctionData {
    pub fn coefficient(&self, m: usize) -> Option<&Elem> {
        self.coefficients.get(m.checked_sub(1)?)?.as_ref()
    }

    /// Norms whose coefficient is unavailable.
    pub fn unavailable(&self) -> Vec<usize> {
        (1..=self.coefficients.len()).filter(|&m| self.coefficients[m - 1].is_none()).collect()
    }
}

/// `a_{p^k}` for `k = 0..=max`, or `None` when the local factor is unknown.
fn local_powers(k: &NumberField, r: &NewformRecord, p: &PrimeIdeal, level_exp: u32, max: u32) -> Result<Option<Vec<Elem>>> {
    let label = p.label();
    let mut out = vec![k.from_int(1)];
    match level_exp {
        0 => {
            let a = r.eigenvalue(&label).ok_or_else(|| {
                Error::Insufficient(format!("no eigenvalue at {label} below the coefficient bound"))
            })?;
            let q = Rat::from_integer(p.norm().into());
            for i in 1..=max as usize {
                let next = if i == 1 {
                    a.clone()
                } else {
                    k.sub(&k.mul(&a, &out[i - 1]), &k.scale(&q, &out[i - 2]))
                };
                out.push(next);
            }
        }
        1 => {
            let Some(w) = r.al_sign(&label) else { return Ok(None) };
            let a = k.from_int(-i64::from(w));
            for _ in 1..=max {
                let next = k.mul(out.last().expect("nonempty"), &a);
                out.push(next);
            }
        }
        _ => return Ok(None),
    }
    Ok(Some(out))
}

pub fn lfunction_coefficients(field: &BaseField, r: &NewformRecord, bound: usize) -> Result<LFunctionData> {
    let k = r.hecke_field();
    let level = r.full_level(field)?;
    let level_exps: HashMap<PrimeIdeal, u32> = factor_ideal(field, &level)?.into_iter().collect();
    let d = field.discriminant();
    let mut cache: HashMap<PrimeIdeal, Option<Vec<Elem>>> = HashMap::new();
    let mut by_ideal = BTreeMap::new();
    let mut coefficients: Vec<Option<Elem>> = (0..bound).map(|_| Some(k.from_int(0))).collect();
    for ideal in ideals_in_range(field, 1, bound as i64) {
        let mut value = Some(k.from_int(1));
        for (p, e) in factor_ideal(field, &ideal)? {
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(p) {
                let max = (bound as f64).log(p.norm() as f64).floor() as u32 + 1;
                let powers = local_powers(&k, r, &p, level_exps.get(&p).copied().unwrap_or(0), max)?;
                e.insert(powers);
            }
            value = match (&value, &cache[&p]) {
                (Some(v), Some(pw)) => Some(k.mul(v, &pw[e as usize])),
                _ => None,
            };
        }
        let slot = &mut coefficients[ideal.norm() as usize - 1];
        *slot = match (slot.take(), &value) {
            (Some(s), Some(v)) => Some(k.add(&s, v)),
            _ => None,
        };
        by_ideal.insert(ideal, value);
    }
    Ok(LFunctionData {
        conductor: d * d * level.norm(),
        gamma_exponent: field.degree(),
        coefficients,
        by_ideal,
    })
}
