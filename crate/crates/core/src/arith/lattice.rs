//! Positive definite integral lattices given by a Gram matrix, LLL reduction
//! and Fincke–Pohst enumeration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

/// A lattice `Z^r` with the quadratic form `v ↦ vᵀ·G·v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
    /// LLL transform: reduced basis vector `i` is `reduced[i] · e`.
    reduced: Vec<Vec<i64>>,
    reduced_gram: Vec<Vec<i64>>,
}

/// Positive-definiteness via exact rational `LDLᵀ`.
pub fn is_positive_definite(g: &[Vec<i64>]) -> bool {
    let n = g.len();
    let mut a: Vec<Vec<BigRational>> = g
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    true
}

fn quad(g: &[Vec<i64>], v: &[i64]) -> i64 {
    let mut s = 0i64;
    for (i, row) in g.iter().enumerate() {
        if v[i] == 0 {
            continue;
        }
        let mut t = 0i64;
        for (j, x) in row.iter().enumerate() {
            t += x * v[j];
        }
        s += v[i] * t;
    }
    s
}

fn transform_gram(g: &[Vec<i64>], u: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = u.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut s = 0i64;
            for (a, ua) in u[i].iter().enumerate() {
                if *ua == 0 {
                    continue;
                }
                for (b, ub) in u[j].iter().enumerate() {
                    s += ua * g[a][b] * ub;
                }
            }
            out[i][j] = s;
            out[j][i] = s;
        }
    }
    out
}

/// LLL on a Gram matrix (δ = 0.99). Returns the unimodular transform `U`
/// (rows) with reduced Gram `U·G·Uᵀ`.
pub fn lll(g: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut gr = g.to_vec();
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&gr);
            let q = mu[k][j].round() as i64;
            if q != 0 {
                let uj = u[j].clone();
                for (a, b) in u[k].iter_mut().zip(&uj) {
                    *a -= q * b;
                }
                gr = transform_gram(g, &u);
            }
        }
        let (mu, bs) = gram_schmidt(&gr);
        if bs[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bs[k - 1] {
            u.swap(k, k - 1);
            gr = transform_gram(g, &u);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    u
}

fn gram_schmidt(g: &[Vec<i64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut r = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j] as f64;
            for k in 0..j {
                s -= mu[j][k] * r[i][k];
            }
            r[i][j] = s;
            if j < i {
                mu[i][j] = s / b[j];
            } else {
                b[i] = s;
            }
        }
    }
    (mu, b)
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Lattice("Gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Lattice("Gram matrix is not symmetric".into()));
                }
            }
        }
        if !is_positive_definite(&gram) {
            return Err(Error::Lattice("Gram matrix is not positive definite".into()));
        }
        let reduced = lll(&gram);
        let reduced_gram = transform_gram(&gram, &reduced);
        Ok(GramLattice { gram, reduced, reduced_gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn value(&self, v: &[i64]) -> i64 {
        quad(&self.gram, v)
    }

    /// Calls `f(v, value)` once for each pair `±v ≠ 0` with value `≤ bound`,
    /// `v` in original coordinates. Enumeration stops when `f` returns
    /// `false`.
    pub fn for_each_up_to(&self, bound: i64, mut f: impl FnMut(&[i64], i64) -> bool) {
        let n = self.rank();
        if n == 0 || bound <= 0 {
            return;
        }
        // Cholesky in Cohen's form: Q(x) = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)²
        let g = &self.reduced_gram;
        let mut q = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in i..n {
                q[i][j] = g[i][j] as f64;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        let eps = 1e-6 * (1.0 + bound as f64);
        let mut x = vec![0i64; n];
        let mut t = vec![0.0f64; n];
        let mut ctr = vec![0.0f64; n];
        let mut upper = vec![0i64; n];
        let mut orig = vec![0i64; n];
        // iterative depth-first enumeration from the last coordinate down
        let mut i = n - 1;
        t[i] = bound as f64;
        ctr[i] = 0.0;
        let init = |i: usize, t: &[f64], ctr: &[f64], x: &mut [i64], upper: &mut [i64], all_zero_above: bool| {
            let r = ((t[i] + eps) / q[i][i]).max(0.0).sqrt();
            let lo = (-ctr[i] - r).ceil() as i64;
            let hi = (-ctr[i] + r).floor() as i64;
            x[i] = if all_zero_above { lo.max(0) } else { lo };
            upper[i] = hi;
        };
        init(i, &t, &ctr, &mut x, &mut upper, true);
        loop {
            if x[i] > upper[i] {
                if i == n - 1 {
                    break;
                }
                i += 1;
                x[i] += 1;
                continue;
            }
            let d = x[i] as f64 + ctr[i];
            let rem = t[i] - q[i][i] * d * d;
            if i == 0 {
                if x.iter().any(|&c| c != 0) && rem > -eps {
                    orig.iter_mut().for_each(|o| *o = 0);
                    for (k, xk) in x.iter().enumerate() {
                        if *xk != 0 {
                            for (o, u) in orig.iter_mut().zip(&self.reduced[k]) {
                                *o += xk * u;
                            }
                        }
                    }
                    let val = quad(&self.gram, &orig);
                    if val <= bound && !f(&orig, val) {
                        return;
                    }
                }
                x[0] += 1;
                continue;
            }
            let above_zero = x[i..].iter().all(|&c| c == 0);
            i -= 1;
            t[i] = rem;
            let mut c = 0.0;
            for j in i + 1..n {
                c += q[i][j] * x[j] as f64;
            }
            ctr[i] = c;
            init(i, &t, &ctr, &mut x, &mut upper, above_zero);
        }
    }

    /// All `v` (one of each `±v`) with `vᵀGv == target`, first nonzero
    /// coordinate positive, sorted.
    pub fn short_vectors(&self, target: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        self.for_each_up_to(target, |v, val| {
            if val == target {
                out.push(normalize_sign(v));
            }
            true
        });
        out.sort();
        out
    }

    /// A shortest nonzero vector, with its value; ties broken by the
    /// sign-normalized coordinates.
    pub fn shortest(&self) -> (Vec<i64>, i64) {
        let bound = (0..self.rank()).map(|i| self.reduced_gram[i][i]).min().unwrap_or(0);
        let mut best: Option<(i64, Vec<i64>)> = None;
        self.for_each_up_to(bound, |v, val| {
            let cand = (val, normalize_sign(v));
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
            true
        });
        let (val, v) = best.expect("nonzero lattice");
        (v, val)
    }

    /// Counts of vectors (both signs, including zero) with value `k` for
    /// `k = 0..len`.
    pub fn representation_numbers(&self, len: usize) -> Vec<u64> {
        let mut out = vec![0u64; len];
        if len == 0 {
            return out;
        }
        out[0] = 1;
        self.for_each_up_to(len as i64 - 1, |_, val| {
            out[val as usize] += 2;
            true
        });
        out
    }
}

pub(crate) fn normalize_sign(v: &[i64]) -> Vec<i64> {
    match v.iter().find(|&&c| c != 0) {
        Some(&c) if c < 0 => v.iter().map(|x| -x).collect(),
        _ => v.to_vec(),
    }
}
