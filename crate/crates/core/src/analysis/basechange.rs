//! Base-change detection: the conjugation test, then a heuristic match
//! against rational eigenforms.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::analysis::record::{ideal_from_data, rational_value, BaseChangeVerdict, NewformRecord};
use crate::arith::ideal::primes_up_to;
use crate::arith::{BaseField, PrimeIdeal};
use crate::Result;

/// Tabulated primes of `F` by label.
fn prime_table(field: &BaseField, r: &NewformRecord) -> HashMap<String, PrimeIdeal> {
    primes_up_to(field, r.prime_bound).into_iter().map(|p| (p.label(), p)).collect()
}

fn conjugate_label(field: &BaseField, table: &HashMap<String, PrimeIdeal>, p: &PrimeIdeal) -> Option<String> {
    let c = p.ideal.conj(field);
    table.values().find(|q| q.ideal == c).map(|q| q.label())
}

/// The record with `σ` applied to its level and prime data.
pub fn conjugate_record(field: &BaseField, r: &NewformRecord) -> Result<NewformRecord> {
    let table = prime_table(field, r);
    let mut out = r.clone();
    out.level = crate::analysis::record::hnf_data(&ideal_from_data(field, &r.level)?.conj(field));
    for (i, label) in r.primes.iter().enumerate() {
        let Some(p) = table.get(label) else { continue };
        let Some(c) = conjugate_label(field, &table, p) else { continue };
        if let Some(j) = r.primes.iter().position(|l| *l == c) {
            out.eigenvalues[j] = r.eigenvalues[i].clone();
        }
    }
    for entry in out.al.iter_mut() {
        if let Some(c) = table.get(&entry.0).and_then(|p| conjugate_label(field, &table, p)) {
            entry.0 = c;
        }
    }
    out.al.sort_by(|a, b| {
        let key = |l: &str| table.get(l).map(|p| p.sort_key());
        key(&a.0).cmp(&key(&b.0))
    });
    Ok(out)
}

/// Stage one: `σ(N) = N` and `a_{σp} = a_p` on every tabulated pair.
pub fn conjugation_test(field: &BaseField, r: &NewformRecord) -> Result<bool> {
    let n = r.full_level(field)?;
    if n.conj(field) != n {
        return Ok(false);
    }
    let table = prime_table(field, r);
    for label in &r.primes {
        let (Some(p), Some(a)) = (table.get(label), r.eigenvalue(label)) else { continue };
        let Some(c) = conjugate_label(field, &table, p) else { continue };
        if let Some(b) = r.eigenvalue(&c) {
            if a != b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Compares a rational record over `F` with a rational form over `Q`:
/// `a_p(f) = a_p(g)` at split `p` and `a_p(f) = a_p(g)² − 2p` at inert `p`.
/// Returns the number of primes compared, or `None` on a mismatch.
pub fn match_rational(field: &BaseField, f: &NewformRecord, g: &NewformRecord) -> Option<usize> {
    let table = prime_table(field, f);
    let mut evidence = 0;
    for label in &f.primes {
        let Some(p) = table.get(label) else { continue };
        if p.ramified {
            continue;
        }
        let Some(a) = f.eigenvalue(label).as_ref().and_then(rational_value) else { continue };
        let Some(b) = g.eigenvalue(&p.p.to_string()).as_ref().and_then(rational_value) else { continue };
        let expected = if p.f == 1 { b } else { &b * &b - BigInt::from(2 * p.p) };
        if a != expected {
            return None;
        }
        evidence += 1;
    }
    Some(evidence)
}

/// Both stages. Without rational data only stage one runs.
pub fn detect_base_change(field: &BaseField, f: &NewformRecord, rational: Option<&[NewformRecord]>) -> Result<BaseChangeVerdict> {
    if field.is_rational() {
        return Ok(BaseChangeVerdict::None);
    }
    if !conjugation_test(field, f)? {
        return Ok(BaseChangeVerdict::Not);
    }
    let Some(db) = rational else { return Ok(BaseChangeVerdict::Stage1) };
    if !f.is_rational() {
        return Ok(BaseChangeVerdict::Unmatched);
    }
    for g in db.iter().filter(|g| g.field == "1.1.1.1" && g.is_rational()) {
        if let Some(evidence) = match_rational(field, f, g).filter(|&e| e > 0) {
            return Ok(BaseChangeVerdict::Matched { form: g.label(), evidence });
        }
    }
    Ok(BaseChangeVerdict::Unmatched)
}
