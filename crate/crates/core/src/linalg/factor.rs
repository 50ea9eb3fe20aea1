//! Factorization over `Q` by Zassenhaus: squarefree decomposition, factoring
//! modulo a small prime (distinct-degree then Cantor–Zassenhaus), linear
//! Hensel lifting, and subset recombination against the Mignotte bound.
//! Recombination is exhaustive over subsets, which is fine at the degrees
//! seen here.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::poly::IntPoly;
use crate::{Error, Result};

/// Polynomials over `F_p`, increasing degree, no trailing zeros.
type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn deg(a: &Fp) -> isize {
    a.len() as isize - 1
}

fn inv(a: u64, p: u64) -> u64 {
    crate::linalg::charpoly::pow_mod(a, p - 2, p)
}

fn add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let mut r = a.clone();
    if deg(a) < deg(b) {
        return (Vec::new(), r);
    }
    let bi = inv(*b.last().expect("nonzero divisor"), p);
    let db = b.len() - 1;
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * bi % p;
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * y % p) % p;
        }
    }
    (trim(q), trim(r))
}

fn monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        Some(&l) => {
            let li = inv(l, p);
            a.iter().map(|&x| x * li % p).collect()
        }
        None => Vec::new(),
    }
}

fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// `(g, s, t)` with `s·a + t·b = g` monic.
fn ext_gcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let li = inv(*r0.last().expect("nonzero gcd"), p);
    let sc = |v: &Fp| trim(v.iter().map(|&x| x * li % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut acc: Fp = vec![1];
    let b = divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        acc = divrem(&mul(&acc, &acc, p), m, p).1;
        if e.bit(i) {
            acc = divrem(&mul(&acc, &b, p), m, p).1;
        }
    }
    acc
}

fn derivative(a: &Fp, p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

/// `(product of irreducible factors of degree d, d)`.
fn distinct_degree(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 1;
    while 2 * d <= deg(&f) as usize {
        h = powmod(&h, &BigUint::from(p), &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if deg(&g) > 0 {
            f = divrem(&f, &g, p).0;
            h = divrem(&h, &f, p).1;
            out.push((g, d));
        }
        d += 1;
    }
    if deg(&f) > 0 {
        let n = deg(&f) as usize;
        out.push((f, n));
    }
    out
}

fn equal_degree(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = deg(f) as usize;
    if n == d {
        return vec![f.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a) < 1 {
            continue;
        }
        let b = sub(&powmod(&a, &e, f, p), &vec![1], p);
        let g = gcd(&b, f, p);
        if deg(&g) > 0 && deg(&g) < n as isize {
            let h = monic(&divrem(f, &g, p).0, p);
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors of a squarefree `f` over `F_p`.
fn factor_mod(f: &Fp, p: u64) -> Vec<Fp> {
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let f = monic(f, p);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&f, p) {
        out.extend(equal_degree(&g, d, p, &mut rng));
    }
    out.sort();
    out
}

fn to_fp(f: &IntPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced")).collect())
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

type Zp = Vec<BigInt>;

fn zmul(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out.into_iter().map(|c| c.mod_floor(m)).collect()
}

fn lift_fp(a: &Fp) -> Zp {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Lifts `f ≡ g·h (mod p)` with `g` monic and `lc(h) = lc(f)` to the same
/// factorization modulo `p^k`.
fn hensel_pair(f: &Zp, g: &Fp, h: &Fp, p: u64, k: u32) -> (Zp, Zp) {
    let (one, s, t) = ext_gcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let top = pb.pow(k);
    let mut big_g = lift_fp(g);
    let mut big_h = lift_fp(h);
    let n = f.len();
    let lcf = f[n - 1].mod_floor(&top);
    *big_h.last_mut().expect("nonzero") = lcf;
    let mut pj = pb.clone();
    for _ in 1..k {
        let gh = zmul(&big_g, &big_h, &top);
        let e: Fp = trim(
            (0..n)
                .map(|i| {
                    let diff = (&f[i] - gh.get(i).cloned().unwrap_or_default()).mod_floor(&top);
                    debug_assert!((&diff % &pj).is_zero());
                    (diff / &pj).mod_floor(&pb).to_u64().expect("reduced")
                })
                .collect(),
        );
        if !e.is_empty() {
            let (q, r) = divrem(&mul(&e, &t, p), g, p);
            let dh = add(&mul(&e, &s, p), &mul(&q, h, p), p);
            for (i, c) in r.iter().enumerate() {
                big_g[i] = (&big_g[i] + &pj * c).mod_floor(&top);
            }
            for (i, c) in dh.iter().enumerate() {
                if i >= big_h.len() {
                    big_h.resize(i + 1, BigInt::zero());
                }
                big_h[i] = (&big_h[i] + &pj * c).mod_floor(&top);
            }
        }
        pj *= &pb;
    }
    (big_g, big_h)
}

/// Lifts monic factors `f ≡ lc·∏ gᵢ (mod p)` to monic factors mod `p^k`.
fn hensel_multi(f: &IntPoly, factors: &[Fp], p: u64, k: u32) -> Vec<Zp> {
    let top = BigInt::from(p).pow(k);
    let mut cur: Zp = f.coeffs().iter().map(|c| c.mod_floor(&top)).collect();
    let lcp = to_fp(&IntPoly::new(vec![f.lc()]), p);
    let mut out = Vec::new();
    for i in 0..factors.len() - 1 {
        let rest = factors[i + 1..].iter().fold(lcp.clone(), |acc, g| mul(&acc, g, p));
        let (g, h) = hensel_pair(&cur, &factors[i], &rest, p, k);
        out.push(g);
        cur = h;
    }
    // last factor: cur/lc mod p^k
    let lc = cur.last().cloned().expect("nonzero");
    let lci = lc.modpow(&(&top - BigInt::one() - (&top / BigInt::from(p))), &top);
    // φ(p^k) − 1 = p^k − p^{k−1} − 1 gives the inverse of a unit
    out.push(cur.iter().map(|c| (c * &lci).mod_floor(&top)).collect());
    out
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn mignotte_bits(f: &IntPoly) -> u64 {
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let b = (norm2.sqrt() + 1u32) << f.degree();
    (b * f.lc().abs() * 2u32).bits() + 1
}

/// Irreducible factors of a squarefree primitive polynomial of degree ≥ 1.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    if f.degree() <= 1 {
        return vec![f.primitive()];
    }
    // best of a few good primes
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        let fp = to_fp(f, p);
        if deg(&fp) != f.degree() as isize {
            continue;
        }
        if deg(&gcd(&fp, &derivative(&fp, p), p)) > 0 {
            continue;
        }
        let fac = factor_mod(&fp, p);
        if fac.len() == 1 {
            return vec![f.primitive()];
        }
        if best.as_ref().is_none_or(|(_, b)| fac.len() < b.len()) {
            best = Some((p, fac));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (p, fac) = best.expect("a good prime exists");
    let bits = mignotte_bits(f);
    let k = (bits as f64 / (p as f64).log2()).ceil() as u32 + 1;
    let m = BigInt::from(p).pow(k);
    let lifted = hensel_multi(f, &fac, p, k);
    recombine(f, lifted, &m)
}

fn recombine(f: &IntPoly, mut lifted: Vec<Zp>, m: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut s = 1;
    'outer: while 2 * s <= lifted.len() {
        let r = lifted.len();
        let mut subset: Vec<usize> = (0..s).collect();
        loop {
            let lc = rest.lc();
            let prod = subset.iter().fold(vec![lc.mod_floor(m)], |acc, &i| zmul(&acc, &lifted[i], m));
            let cand = IntPoly::new(prod.iter().map(|c| symmetric(c, m)).collect()).primitive();
            if cand.degree() > 0 {
                if let Some(q) = rest.div_exact(&cand) {
                    out.push(cand);
                    rest = q.primitive();
                    for &i in subset.iter().rev() {
                        lifted.remove(i);
                    }
                    continue 'outer;
                }
            }
            // next subset of size s in lexicographic order
            let mut i = s;
            loop {
                if i == 0 {
                    s += 1;
                    continue 'outer;
                }
                i -= 1;
                if subset[i] < r - s + i {
                    subset[i] += 1;
                    for j in i + 1..s {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    if rest.degree() > 0 {
        out.push(rest.primitive());
    }
    out
}

/// Irreducible factorization over `Q` of a nonzero polynomial, as primitive
/// factors with positive leading coefficient and their multiplicities,
/// sorted by degree then coefficients. The content is dropped.
pub fn factor(f: &IntPoly) -> Result<Vec<(IntPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::Linalg("factoring the zero polynomial".into()));
    }
    let mut out = Vec::new();
    for (g, e) in f.squarefree_decomposition() {
        for h in factor_squarefree(&g) {
            out.push((h, e));
        }
    }
    out.sort_by(|a, b| (a.0.degree(), &a.0).cmp(&(b.0.degree(), &b.0)));
    let prod = out.iter().fold(IntPoly::one(), |acc, (g, e)| acc.mul(&g.pow(*e)));
    if prod != f.primitive() {
        return Err(Error::Linalg(format!("factorization of {f} does not multiply back")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        let f = IntPoly::from_i64(&[-1, 0, 1]);
        assert_eq!(factor(&f).unwrap(), vec![(IntPoly::linear(1), 1), (IntPoly::linear(-1), 1)]);
        let g = IntPoly::from_i64(&[-1, -1, 1]);
        assert_eq!(factor(&g).unwrap(), vec![(g.clone(), 1)]);
        let h = g.pow(2).mul(&IntPoly::linear(3));
        assert_eq!(factor(&h).unwrap(), vec![(IntPoly::linear(3), 1), (g, 2)]);
    }

    #[test]
    fn needs_recombination() {
        // x^4 + 1 splits modulo every prime
        let f = IntPoly::from_i64(&[1, 0, 0, 0, 1]);
        assert_eq!(factor(&f).unwrap(), vec![(f.clone(), 1)]);
        // (x^2 - 2)(x^2 - 3)(2x + 1)
        let g = IntPoly::from_i64(&[-2, 0, 1]).mul(&IntPoly::from_i64(&[-3, 0, 1])).mul(&IntPoly::from_i64(&[1, 2]));
        let fac = factor(&g).unwrap();
        assert_eq!(fac.len(), 3);
        assert_eq!(fac[0].0, IntPoly::from_i64(&[1, 2]));
    }

    #[test]
    fn larger_degree() {
        let g = IntPoly::from_i64(&[1, -3, 0, 1]);
        let h = IntPoly::from_i64(&[-1, -4, 2, 1]);
        let f = g.mul(&h).mul(&IntPoly::from_i64(&[-5, 0, 1])).mul(&IntPoly::linear(-7));
        let fac = factor(&f).unwrap();
        assert_eq!(fac.len(), 4);
        assert!(fac.iter().all(|(_, e)| *e == 1));
    }
}
