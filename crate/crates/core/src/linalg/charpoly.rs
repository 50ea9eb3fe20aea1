//! Multimodular characteristic polynomials.
//!
//! The polynomial is computed modulo enough 31-bit primes to exceed twice
//! the Hadamard-style bound `(1 + √n·A)^n` on its coefficients, merged by
//! CRT into symmetric residues, and checked by Cayley–Hamilton on a random
//! vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::poly::IntPoly;
use crate::linalg::qmat::{QMat, Rat};
use crate::par;
use crate::{Error, Result};

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Descending 31-bit primes.
pub fn word_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = (1u64 << 31) - 1;
    while out.len() < count {
        if is_prime_u64(p) {
            out.push(p);
        }
        p -= 2;
    }
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Characteristic polynomial over `F_p` (increasing degree, monic) by
/// reduction to Hessenberg form.
pub fn charpoly_mod(m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = m.len();
    let mut h: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else { continue };
        if i != j + 1 {
            h.swap(i, j + 1);
            for row in h.iter_mut() {
                row.swap(i, j + 1);
            }
        }
        let inv = inv_mod(h[j + 1][j], p);
        for i in j + 2..n {
            if h[i][j] == 0 {
                continue;
            }
            let u = h[i][j] * inv % p;
            for c in 0..n {
                let sub = u * h[j + 1][c] % p;
                h[i][c] = (h[i][c] + p - sub) % p;
            }
            for row in h.iter_mut() {
                let add = u * row[i] % p;
                row[j + 1] = (row[j + 1] + add) % p;
            }
        }
    }
    // p_{k+1} = (x − h_kk)·p_k − Σ_{i<k} (∏_{l=i+1}^{k} h_{l,l−1})·h_{ik}·p_i
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let pk = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (d, &c) in pk.iter().enumerate() {
            next[d + 1] = (next[d + 1] + c) % p;
            next[d] = (next[d] + p - c * h[k][k] % p) % p;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = prod * h[i + 1][i] % p;
            if prod == 0 {
                break;
            }
            let f = prod * h[i][k] % p;
            if f == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = (next[d] + p - f * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n + 1 polynomials")
}

fn coefficient_bound_bits(n: usize, max_abs: &BigInt) -> u64 {
    let a = max_abs.to_f64().unwrap_or(f64::MAX).max(1.0);
    let per = ((n as f64).sqrt() * a + 1.0).log2();
    (n as f64 * per).ceil() as u64 + 2
}

/// Exact characteristic polynomial `det(x − M)` of an integer matrix.
pub fn charpoly_big(m: &[Vec<BigInt>]) -> Result<IntPoly> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Linalg("charpoly of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(IntPoly::one());
    }
    let max_abs = m.iter().flatten().map(|x| x.abs()).max().unwrap_or_default();
    let bits = coefficient_bound_bits(n, &max_abs);
    let count = (bits / 30 + 1) as usize;
    let primes = word_primes(count);
    let residues: Vec<Vec<u64>> = par::map(&primes, |&p| {
        let pb = BigInt::from(p);
        let red: Vec<Vec<u64>> =
            m.iter().map(|r| r.iter().map(|x| x.mod_floor(&pb).to_u64().expect("reduced")).collect()).collect();
        charpoly_mod(&red, p)
    });
    // CRT, symmetric residues
    let mut modulus = BigInt::one();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (res, &p) in residues.iter().zip(&primes) {
        let pb = BigInt::from(p);
        let minv = BigInt::from(inv_mod((&modulus % &pb).to_u64().expect("small"), p));
        for (c, &r) in coeffs.iter_mut().zip(res) {
            // c + modulus·((r − c)·modulus⁻¹ mod p)
            let t = ((BigInt::from(r) - &*c).mod_floor(&pb) * &minv).mod_floor(&pb);
            *c += &modulus * t;
        }
        modulus *= pb;
    }
    let half = &modulus >> 1;
    for c in coeffs.iter_mut() {
        if *c > half {
            *c -= &modulus;
        }
    }
    let poly = IntPoly::new(coeffs);
    cayley_hamilton_check(m, &poly)?;
    Ok(poly)
}

pub fn charpoly(m: &[Vec<i64>]) -> Result<IntPoly> {
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    charpoly_big(&big)
}

/// `det(x − M)` for a rational matrix whose characteristic polynomial has
/// integer coefficients (an error otherwise).
pub fn charpoly_rational(m: &QMat) -> Result<IntPoly> {
    let c = charpoly_q(m)?;
    IntPoly::from_rat_exact(&c)
}

/// Rational coefficients of `det(x − M)`, increasing degree.
pub fn charpoly_q(m: &QMat) -> Result<Vec<Rat>> {
    let n = m.nrows();
    let d = m.rows().iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<Vec<BigInt>> =
        m.rows().iter().map(|r| r.iter().map(|x| (x * Rat::from_integer(d.clone())).to_integer()).collect()).collect();
    let e = charpoly_big(&scaled)?;
    // det(x − M) = d^{-n}·χ_{dM}(d·x)
    Ok((0..=n)
        .map(|k| Rat::new(e.coeff(k) * d.pow(k as u32), d.pow(n as u32)))
        .collect())
}

fn cayley_hamilton_check(m: &[Vec<BigInt>], poly: &IntPoly) -> Result<()> {
    let n = m.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc4a1 ^ n as u64);
    let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-7i64..=7))).collect();
    // Horner: w ← M·w + c_k·v
    let mut w = vec![BigInt::zero(); n];
    for c in poly.coeffs().iter().rev() {
        let mw: Vec<BigInt> = m.iter().map(|r| r.iter().zip(&w).map(|(a, b)| a * b).sum()).collect();
        w = mw.into_iter().zip(&v).map(|(x, vi)| x + c * vi).collect();
    }
    if w.iter().all(Zero::is_zero) {
        Ok(())
    } else {
        Err(Error::Linalg("Cayley-Hamilton check failed".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::intmat;

    #[test]
    fn small_cases() {
        assert_eq!(charpoly(&[vec![0, 1], vec![1, 0]]).unwrap(), IntPoly::from_i64(&[-1, 0, 1]));
        let id: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| i64::from(i == j)).collect()).collect();
        assert_eq!(charpoly(&id).unwrap(), IntPoly::linear(1).pow(4));
        assert_eq!(charpoly(&[]).unwrap(), IntPoly::one());
    }

    #[test]
    fn trace_and_determinant() {
        let m = vec![vec![3, -2, 7], vec![1, 0, 4], vec![-5, 9, 2]];
        let c = charpoly(&m).unwrap();
        assert_eq!(c.coeff(2), BigInt::from(-5));
        assert_eq!(c.coeff(0), BigInt::from(-intmat::det(&m) as i64));
    }

    #[test]
    fn rational_matrix() {
        let m = QMat::from_rows(
            vec![vec![Rat::new(1.into(), 2.into()), Rat::from_integer(1.into())], vec![Rat::zero(), Rat::new(1.into(), 3.into())]],
            2,
        );
        let c = charpoly_q(&m).unwrap();
        assert_eq!(c[0], Rat::new(1.into(), 6.into()));
        assert_eq!(c[1], Rat::new((-5).into(), 6.into()));
        assert!(charpoly_rational(&m).is_err());
    }
}
