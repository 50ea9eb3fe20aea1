//! CM detection by square classes of Frobenius discriminants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::analysis::record::{rational_value, CmVerdict, NewformRecord};
use crate::arith::{BaseField, FieldElement};
use crate::linalg::numfield::fundamental_discriminant;
use crate::{Error, Result};

/// Minimum number of tabulated eigenvalues for a verdict.
pub const MIN_EIGENVALUES: usize = 10;

/// Norm encoded in a prime label (`p`, `N.a` or `N`).
pub fn label_norm(label: &str) -> Result<i64> {
    label
        .split('.')
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse { pos: 0, msg: format!("bad prime label {label}") })
}

fn squarefree_part(mut n: i64) -> i64 {
    let sign = n.signum();
    n = n.abs();
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    sign * out * n
}

/// Smallest squarefree integer in the square class of `x` over `F`.
pub fn square_class_rep(field: &BaseField, x: i64) -> i64 {
    let s = squarefree_part(x);
    if field.is_rational() {
        return s;
    }
    let r = field.radicand();
    let g = s.gcd(&r);
    let t = s / g * (r / g);
    if (t.abs(), -t) < (s.abs(), -s) {
        t
    } else {
        s
    }
}

fn is_nonresidue(a: i64, p: i64) -> bool {
    let a = a.rem_euclid(p);
    if a == 0 {
        return false;
    }
    let (mut acc, mut b, mut e) = (1i64, a, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc == p - 1
}

/// Square-class test on the rational eigenvalues of a record.
pub fn detect_cm(field: &BaseField, r: &NewformRecord) -> Result<CmVerdict> {
    if r.eigenvalue_count() < MIN_EIGENVALUES {
        return Err(Error::Insufficient(format!(
            "{} eigenvalues available, at least {MIN_EIGENVALUES} needed",
            r.eigenvalue_count()
        )));
    }
    let mut class: Option<i64> = None;
    let mut zeros = Vec::new();
    for label in &r.primes {
        let Some(a) = r.eigenvalue(label).as_ref().and_then(rational_value) else { continue };
        let q = label_norm(label)?;
        if a.is_zero() {
            zeros.push(q);
            continue;
        }
        let disc = &a * &a - BigInt::from(4 * q);
        let Some(disc) = disc.to_i64().filter(|d| *d != 0) else { continue };
        let rep = square_class_rep(field, disc);
        match class {
            None => class = Some(rep),
            Some(c) => {
                let same = field.square_class_equal(&FieldElement::from_int(c), &FieldElement::from_int(rep))?;
                if !same {
                    return Ok(CmVerdict::NotCm);
                }
            }
        }
    }
    let Some(rep) = class else { return Ok(CmVerdict::Untested) };
    // a degree-one prime of odd norm p is inert in F(√rep) iff rep is a
    // nonresidue mod p; inert primes of F always split
    let evidence = zeros.iter().filter(|&&q| is_prime(q) && q > 2 && is_nonresidue(rep, q)).count();
    let disc = fundamental_discriminant(&BigInt::from(rep)).unwrap_or(rep);
    Ok(CmVerdict::Candidate { disc, evidence })
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Whether `rep` and `disc` name the same square class over `F`.
pub fn same_class(field: &BaseField, x: i64, y: i64) -> Result<bool> {
    field.square_class_equal(&FieldElement::from_int(x), &FieldElement::from_int(y))
}
