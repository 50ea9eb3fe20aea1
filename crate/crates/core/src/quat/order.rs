//! Orders as rank-`4n` Z-lattices with integer structure constants.
//!
//! Elements are integer coordinate vectors over a fixed Z-basis `e_r` of the
//! order. The reduced norm is evaluated from `nrd(e_r)` and the bilinear
//! values `trd(e_r ē_s)`, and the trace form used for enumeration is
//! `Tr_{F/Q} trd(x ȳ)`, so `vᵀGv = 2·Tr nrd(v)`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::field::rat;
use crate::arith::intmat::{self, IMat};
use crate::arith::{BaseField, FieldElement, GramLattice, Ideal, Zf};
use crate::quat::algebra::{QuaternionAlgebra, Quat};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct QuaternionOrder {
    alg: QuaternionAlgebra,
    dim: usize,
    basis: Vec<Quat>,
    inv_basis: Vec<Vec<BigRational>>,
    /// `mult[(r·dim + s)·dim + t]`: coordinate `t` of `e_r e_s`
    mult: Vec<i64>,
    nrd_diag: Vec<Zf>,
    bil: Vec<Vec<Zf>>,
    trd_basis: Vec<Zf>,
    one: Vec<i64>,
    omega: Vec<i64>,
    gram: IMat,
    lattice: GramLattice,
    disc: Ideal,
}

fn flatten(field: &BaseField, x: &Quat) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(4 * field.degree());
    for c in x {
        out.push(c.a.clone());
        if field.degree() == 2 {
            out.push(c.b.clone());
        }
    }
    out
}

fn invert(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn integral_vec(v: &[BigRational]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                i64::try_from(x.to_integer()).ok()
            } else {
                None
            }
        })
        .collect()
}

fn fe_to_zf(x: &FieldElement, what: &str) -> Result<Zf> {
    x.to_zf().ok_or_else(|| Error::NotIntegral(format!("{what} is not in Z_F")))
}

impl QuaternionOrder {
    /// Verifies that `basis` spans an order: a ring containing `1` whose
    /// elements are integral.
    pub fn new(alg: QuaternionAlgebra, basis: Vec<Quat>) -> Result<Self> {
        let field = alg.field().clone();
        let dim = 4 * field.degree();
        if basis.len() != dim {
            return Err(Error::Config(format!("expected {dim} basis elements, got {}", basis.len())));
        }
        let rows: Vec<Vec<BigRational>> = basis.iter().map(|x| flatten(&field, x)).collect();
        let inv_basis = invert(&rows).ok_or_else(|| Error::Config("basis is linearly dependent".into()))?;
        let mut order = QuaternionOrder {
            alg,
            dim,
            basis,
            inv_basis,
            mult: vec![0; dim * dim * dim],
            nrd_diag: Vec::new(),
            bil: Vec::new(),
            trd_basis: Vec::new(),
            one: Vec::new(),
            omega: Vec::new(),
            gram: Vec::new(),
            lattice: GramLattice::new(vec![vec![1]])?,
            disc: Ideal::unit(),
        };
        order.one = order
            .coordinates(&order.alg.one())
            .ok_or_else(|| Error::NotIntegral("1 is not in the lattice".into()))?;
        let mut om = order.alg.zero();
        om[0] = FieldElement::from(field.omega());
        order.omega = order
            .coordinates(&om)
            .ok_or_else(|| Error::NotIntegral("Z_F is not in the lattice".into()))?;
        for r in 0..dim {
            for s in 0..dim {
                let prod = order.alg.mul(&order.basis[r], &order.basis[s]);
                let c = order
                    .coordinates(&prod)
                    .ok_or_else(|| Error::NotIntegral(format!("e{r}·e{s} leaves the lattice")))?;
                order.mult[(r * dim + s) * dim..(r * dim + s + 1) * dim].copy_from_slice(&c);
            }
        }
        order.nrd_diag = (0..dim)
            .map(|r| fe_to_zf(&order.alg.nrd(&order.basis[r]), "reduced norm"))
            .collect::<Result<_>>()?;
        order.trd_basis = (0..dim)
            .map(|r| fe_to_zf(&order.alg.trd(&order.basis[r]), "reduced trace"))
            .collect::<Result<_>>()?;
        let mut bil = vec![vec![Zf::ZERO; dim]; dim];
        for r in 0..dim {
            for s in 0..dim {
                let x = order.alg.mul(&order.basis[r], &order.alg.conj(&order.basis[s]));
                bil[r][s] = fe_to_zf(&order.alg.trd(&x), "reduced trace form")?;
            }
        }
        order.gram = bil.iter().map(|row| row.iter().map(|&z| field.trace(z)).collect()).collect();
        order.bil = bil;
        order.lattice = GramLattice::new(order.gram.clone()).map_err(|_| Error::Indefinite)?;
        order.disc = order.compute_discriminant()?;
        Ok(order)
    }

    /// Reduced discriminant from `|det G| = Nm(d)²·d_F⁴`, as the product of
    /// the ramified primes when it matches and an error otherwise.
    fn compute_discriminant(&self) -> Result<Ideal> {
        let field = self.field();
        let det = intmat::det(&self.gram).unsigned_abs();
        let df4 = (field.discriminant() as u128).pow(4);
        let expected = self.alg.discriminant().norm() as u128;
        if !det.is_multiple_of(df4) {
            return Err(Error::Verification(format!("Gram determinant {det} not divisible by d_F^4")));
        }
        let q = det / df4;
        let found = (q as f64).sqrt().round() as u128;
        if found * found != q {
            return Err(Error::Verification(format!("Gram determinant {det} is not a square times d_F^4")));
        }
        if found != expected {
            return Err(Error::NotMaximal { found: format!("({found})"), expected: format!("({expected})") });
        }
        Ok(*self.alg.discriminant())
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.alg
    }

    pub fn field(&self) -> &BaseField {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Quat] {
        &self.basis
    }

    pub fn discriminant(&self) -> &Ideal {
        &self.disc
    }

    pub fn gram(&self) -> &IMat {
        &self.gram
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn one(&self) -> &[i64] {
        &self.one
    }

    /// Coordinates of `x` if it lies in the lattice.
    pub fn coordinates(&self, x: &Quat) -> Option<Vec<i64>> {
        integral_vec(&self.rational_coordinates(x))
    }

    pub fn rational_coordinates(&self, x: &Quat) -> Vec<BigRational> {
        let v = flatten(self.field(), x);
        (0..self.dim)
            .map(|j| v.iter().zip(&self.inv_basis).fold(BigRational::zero(), |acc, (a, row)| acc + a * &row[j]))
            .collect()
    }

    pub fn element(&self, v: &[i64]) -> Quat {
        let f = self.field();
        let mut out = self.alg.zero();
        for (c, e) in v.iter().zip(&self.basis) {
            if *c != 0 {
                let k = FieldElement::new(rat(*c), BigRational::zero());
                for t in 0..4 {
                    out[t] = f.fe_add(&out[t], &f.fe_mul(&k, &e[t]));
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let d = self.dim;
        let mut out = vec![0i64; d];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0 {
                continue;
            }
            for (s, &ys) in y.iter().enumerate() {
                if ys == 0 {
                    continue;
                }
                let k = xr * ys;
                let base = (r * d + s) * d;
                for (t, o) in out.iter_mut().enumerate() {
                    let c = self.mult[base + t];
                    if c != 0 {
                        *o += k * c;
                    }
                }
            }
        }
        out
    }

    pub fn nrd(&self, x: &[i64]) -> Zf {
        let f = self.field();
        let mut acc = Zf::ZERO;
        for r in 0..self.dim {
            if x[r] == 0 {
                continue;
            }
            acc = acc + f.scale(x[r] * x[r], self.nrd_diag[r]);
            for s in r + 1..self.dim {
                if x[s] != 0 {
                    acc = acc + f.scale(x[r] * x[s], self.bil[r][s]);
                }
            }
        }
        acc
    }

    pub fn trd(&self, x: &[i64]) -> Zf {
        x.iter().zip(&self.trd_basis).fold(Zf::ZERO, |acc, (&c, &t)| acc + self.field().scale(c, t))
    }

    /// `trd(x ȳ)`.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> Zf {
        let f = self.field();
        let mut acc = Zf::ZERO;
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0 {
                continue;
            }
            for (s, &ys) in y.iter().enumerate() {
                if ys != 0 {
                    acc = acc + f.scale(xr * ys, self.bil[r][s]);
                }
            }
        }
        acc
    }

    /// Coordinates of the scalar `c ∈ Z_F`.
    pub fn scalar(&self, c: Zf) -> Vec<i64> {
        self.one.iter().zip(&self.omega).map(|(u, w)| c.a * u + c.b * w).collect()
    }

    /// `c·x` for `c ∈ Z_F`.
    pub fn scale(&self, c: Zf, x: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = x.iter().map(|v| c.a * v).collect();
        if c.b != 0 {
            let wx = self.mul(&self.omega, x);
            for (o, w) in out.iter_mut().zip(wx) {
                *o += c.b * w;
            }
        }
        out
    }

    pub fn conj(&self, x: &[i64]) -> Vec<i64> {
        let t = self.scalar(self.trd(x));
        t.iter().zip(x).map(|(a, b)| a - b).collect()
    }

    /// Z-basis (HNF rows) of the lattice `c·O` for an ideal with Z-basis
    /// `gens` of `Z_F`.
    pub fn ideal_times_order(&self, ideal: &Ideal) -> IMat {
        let mut rows = Vec::new();
        for g in ideal.basis(self.field()) {
            for r in 0..self.dim {
                let mut e = vec![0i64; self.dim];
                e[r] = 1;
                rows.push(self.scale(g, &e));
            }
        }
        intmat::hnf(&rows, self.dim)
    }

    /// HNF of the Z-span of all products `x·y` with `x` in the row span of
    /// `a` and `y` in the row span of `b`.
    pub fn product(&self, a: &[Vec<i64>], b: &[Vec<i64>]) -> IMat {
        let mut rows = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                rows.push(self.mul(x, y));
            }
        }
        intmat::hnf(&rows, self.dim)
    }

    /// Trace-form Gram matrix of the lattice with basis rows `b`.
    pub fn sub_gram(&self, b: &[Vec<i64>]) -> IMat {
        let gb: Vec<Vec<i64>> = b.iter().map(|x| intmat::vec_mat(x, &self.gram)).collect();
        b.iter().map(|x| gb.iter().map(|gy| x.iter().zip(gy).map(|(u, v)| u * v).sum()).collect()).collect()
    }
}
