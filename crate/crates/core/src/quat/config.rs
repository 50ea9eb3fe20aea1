//! Text configuration for algebras and maximal orders.
//!
//! ```text
//! # comment
//! a = -1
//! b = -1
//! ramified = 2
//! basis = 1 | 0 | 0 | 0
//! basis = 1/2 | 1/2 | 1/2 | 1/2
//! ```
//!
//! Each `basis` line lists the four coordinates over `{1, i, j, k}`; a
//! coordinate is one rational over `Q` or two (`x y` for `x + yω`) over a
//! quadratic field. Nothing in the file is trusted: the loader recomputes
//! the ramification and the discriminant.

use crate::arith::{BaseField, Zf};
use crate::quat::algebra::{parse_field_element, QuaternionAlgebra, Quat};
use crate::quat::order::QuaternionOrder;
use crate::{Error, Result};

pub const ICOSIAN: &str = include_str!("../../data/icosian.alg");

pub fn hurwitz_config() -> String {
    "a = -1\nb = -1\nramified = 2\n\
     basis = 1 | 0 | 0 | 0\nbasis = 0 | 1 | 0 | 0\nbasis = 0 | 0 | 1 | 0\n\
     basis = 1/2 | 1/2 | 1/2 | 1/2\n"
        .to_string()
}

pub fn lipschitz_config() -> String {
    "a = -1\nb = -1\nramified = 2\n\
     basis = 1 | 0 | 0 | 0\nbasis = 0 | 1 | 0 | 0\nbasis = 0 | 0 | 1 | 0\nbasis = 0 | 0 | 0 | 1\n"
        .to_string()
}

fn legendre(a: i64, p: i64) -> i64 {
    let (mut b, mut e, mut acc) = (a.rem_euclid(p), (p - 1) / 2, 1i64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if acc == p - 1 {
        -1
    } else {
        acc
    }
}

/// Config text for a maximal order of the definite quaternion algebra over
/// `Q` ramified exactly at the prime `p` and infinity.
pub fn pizer_config(p: i64) -> Result<String> {
    if !crate::arith::ideal::is_prime(p) {
        return Err(Error::Config(format!("{p} is not prime")));
    }
    let body = if p == 2 {
        return Ok(hurwitz_config());
    } else if p % 4 == 3 {
        format!(
            "a = -1\nb = -{p}\nramified = {p}\n\
             basis = 1 | 0 | 0 | 0\nbasis = 0 | 1 | 0 | 0\n\
             basis = 1/2 | 0 | 1/2 | 0\nbasis = 0 | 1/2 | 0 | 1/2\n"
        )
    } else if p % 8 == 5 {
        format!(
            "a = -2\nb = -{p}\nramified = {p}\n\
             basis = 1 | 0 | 0 | 0\nbasis = 1/2 | 0 | 1/2 | 1/2\n\
             basis = 0 | 1/4 | 1/2 | 1/4\nbasis = 0 | 0 | 0 | 1\n"
        )
    } else {
        let q = (3..)
            .step_by(4)
            .find(|&q| crate::arith::ideal::is_prime(q) && legendre(p, q) == -1)
            .expect("an auxiliary prime exists");
        let c = (0..q).find(|c| (c * c * p + 1) % q == 0).expect("-1/p is a square mod q");
        format!(
            "a = -{p}\nb = -{q}\nramified = {p}\n\
             basis = 1/2 | 0 | 1/2 | 0\nbasis = 0 | 1/2 | 0 | 1/2\n\
             basis = 0 | 0 | 1/{q} | {c}/{q}\nbasis = 0 | 0 | 0 | 1\n"
        )
    };
    Ok(body)
}

fn parse_integral(field: &BaseField, s: &str, key: &str) -> Result<Zf> {
    parse_field_element(s)?
        .to_zf()
        .filter(|z| field.degree() == 2 || z.b == 0)
        .ok_or_else(|| Error::Config(format!("{key} must be an element of Z_F, got '{s}'")))
}

/// Parses and verifies an algebra config: the ramification must be exactly
/// the declared finite primes plus every real place, and the basis must
/// span a maximal order.
pub fn load_algebra_config(field: &BaseField, text: &str) -> Result<(QuaternionAlgebra, QuaternionOrder)> {
    let mut a = None;
    let mut b = None;
    let mut ramified: Option<Vec<String>> = None;
    let mut basis: Vec<Quat> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "a" => a = Some(parse_integral(field, value, "a")?),
            "b" => b = Some(parse_integral(field, value, "b")?),
            "ramified" => ramified = Some(value.split_whitespace().map(str::to_string).collect()),
            "basis" => {
                let parts: Vec<&str> = value.split('|').collect();
                if parts.len() != 4 {
                    return Err(Error::Config(format!("line {}: basis needs 4 coordinates", lineno + 1)));
                }
                let mut q: Quat = std::array::from_fn(|_| crate::arith::FieldElement::zero());
                for (slot, p) in q.iter_mut().zip(parts) {
                    let x = parse_field_element(p)?;
                    if field.degree() == 1 && !num_traits::Zero::is_zero(&x.b) {
                        return Err(Error::Config(format!("line {}: Q coordinates take one value", lineno + 1)));
                    }
                    *slot = x;
                }
                basis.push(q);
            }
            other => return Err(Error::Config(format!("line {}: unknown key '{other}'", lineno + 1))),
        }
    }
    let (a, b) = (
        a.ok_or_else(|| Error::Config("missing 'a'".into()))?,
        b.ok_or_else(|| Error::Config("missing 'b'".into()))?,
    );
    let declared = ramified.ok_or_else(|| Error::Config("missing 'ramified'".into()))?;
    let alg = QuaternionAlgebra::new(field, a, b)?;
    let mut found: Vec<String> = alg.ramified_primes().iter().map(|p| p.label()).collect();
    let mut want = declared.clone();
    found.sort();
    want.sort();
    if found != want {
        return Err(Error::Ramification(format!(
            "declared finite ramification {{{}}} but the algebra ramifies at {{{}}}",
            want.join(", "),
            found.join(", ")
        )));
    }
    let order = QuaternionOrder::new(alg.clone(), basis)?;
    Ok((alg, order))
}
