//! Number fields `Q[x]/(g)` for monic irreducible `g`, elements in the power
//! basis.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::charpoly::charpoly_q;
use crate::linalg::poly::IntPoly;
use crate::linalg::qmat::{QMat, Rat};
use crate::Result;

pub type Elem = Vec<Rat>;

#[derive(Clone, Debug, PartialEq)]
pub struct NumberField {
    poly: IntPoly,
    roots: Vec<f64>,
}

impl NumberField {
    /// `g` must be monic and irreducible; real roots are computed when every
    /// root is real (otherwise `embeddings` is empty).
    pub fn new(poly: IntPoly) -> Self {
        let roots = if poly.count_real_roots() == poly.degree() { poly.real_roots() } else { Vec::new() };
        NumberField { poly, roots }
    }

    pub fn rationals() -> Self {
        Self::new(IntPoly::x())
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn is_totally_real(&self) -> bool {
        self.roots.len() == self.degree()
    }

    pub fn from_rat(&self, x: Rat) -> Elem {
        let mut v = vec![Rat::zero(); self.degree()];
        v[0] = x;
        v
    }

    pub fn from_int(&self, x: i64) -> Elem {
        self.from_rat(Rat::from_integer(x.into()))
    }

    pub fn is_rational(&self, x: &Elem) -> bool {
        x.iter().skip(1).all(Zero::is_zero)
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    pub fn scale(&self, c: &Rat, x: &Elem) -> Elem {
        x.iter().map(|a| a * c).collect()
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let d = self.degree();
        let mut prod = vec![Rat::zero(); 2 * d];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        // reduce with x^d = −Σ g_k x^k
        let g = self.poly.coeffs();
        for k in (d..2 * d).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (j, gj) in g.iter().take(d).enumerate() {
                prod[k - d + j] -= &c * Rat::from_integer(gj.clone());
            }
        }
        prod.truncate(d);
        prod
    }

    pub fn pow(&self, x: &Elem, e: u32) -> Elem {
        (0..e).fold(self.from_int(1), |acc, _| self.mul(&acc, x))
    }

    /// Matrix of multiplication by `x` acting on column coordinate vectors.
    pub fn mul_matrix(&self, x: &Elem) -> QMat {
        let d = self.degree();
        let mut m = QMat::zeros(d, d);
        for j in 0..d {
            let mut e = vec![Rat::zero(); d];
            e[j] = Rat::one();
            let col = self.mul(x, &e);
            for (i, c) in col.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    /// Characteristic polynomial of `x` over `Q` (rational coefficients).
    pub fn charpoly(&self, x: &Elem) -> Result<Vec<Rat>> {
        charpoly_q(&self.mul_matrix(x))
    }

    pub fn trace(&self, x: &Elem) -> Rat {
        self.mul_matrix(x).trace()
    }

    pub fn norm(&self, x: &Elem) -> Result<Rat> {
        let c = self.charpoly(x)?;
        let n = self.degree();
        Ok(if n.is_multiple_of(2) { c[0].clone() } else { -c[0].clone() })
    }

    /// Real embeddings of `x`, one per root of `g` in increasing order.
    pub fn embeddings(&self, x: &Elem) -> Vec<f64> {
        self.roots
            .iter()
            .map(|&r| x.iter().rev().fold(0.0, |acc, c| acc * r + c.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    /// Polynomial discriminant of `g`.
    pub fn poly_discriminant(&self) -> BigInt {
        let d = self.degree();
        let g = &self.poly;
        if d == 1 {
            return BigInt::one();
        }
        if d == 2 {
            let (a, b, c) = (g.coeff(2), g.coeff(1), g.coeff(0));
            return &b * &b - BigInt::from(4) * a * c;
        }
        // (−1)^{d(d−1)/2}·Res(g, g') for monic g, via the norm of g'(θ)
        let theta: Elem = (0..d).map(|i| if i == 1 { Rat::one() } else { Rat::zero() }).collect();
        let dg = g.derivative();
        let val = dg.coeffs().iter().rev().fold(vec![Rat::zero(); d], |acc, c| {
            let mut t = self.mul(&acc, &theta);
            t[0] += Rat::from_integer(c.clone());
            t
        });
        let n = self.norm(&val).expect("charpoly").to_integer();
        if (d * (d - 1) / 2) % 2 == 1 {
            -n
        } else {
            n
        }
    }

    /// Fundamental discriminant of a quadratic field.
    pub fn quadratic_fundamental_discriminant(&self) -> Option<i64> {
        if self.degree() != 2 {
            return None;
        }
        fundamental_discriminant(&self.poly_discriminant())
    }
}

/// Fundamental discriminant of `Q(√n)` for a nonsquare integer `n`.
pub fn fundamental_discriminant(n: &BigInt) -> Option<i64> {
    let mut m = n.to_i64()?;
    if m == 0 {
        return None;
    }
    let sign = m.signum();
    m = m.abs();
    let mut core = 1i64;
    let mut p = 2i64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    core *= m;
    let d = sign * core;
    if d == 1 {
        return None;
    }
    Some(if d.rem_euclid(4) == 1 { d } else { 4 * d })
}

/// Whether a rational is the square of a rational.
pub fn is_rational_square(x: &Rat) -> bool {
    if x.is_negative() {
        return false;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    &(&rn * &rn) == n && &(&rd * &rd) == d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_field() {
        let k = NumberField::new(IntPoly::from_i64(&[-1, -1, 1]));
        let th: Elem = vec![Rat::zero(), Rat::one()];
        assert_eq!(k.mul(&th, &th), vec![Rat::one(), Rat::one()]);
        assert_eq!(k.norm(&th).unwrap(), Rat::from_integer((-1).into()));
        assert_eq!(k.poly_discriminant(), BigInt::from(5));
        assert_eq!(k.quadratic_fundamental_discriminant(), Some(5));
        let e = k.embeddings(&th);
        assert!((e[0] + 0.6180339887498949).abs() < 1e-12);
    }

    #[test]
    fn discriminants() {
        assert_eq!(fundamental_discriminant(&BigInt::from(8)), Some(8));
        assert_eq!(fundamental_discriminant(&BigInt::from(12)), Some(12));
        assert_eq!(fundamental_discriminant(&BigInt::from(-4)), Some(-4));
        assert_eq!(fundamental_discriminant(&BigInt::from(-44)), Some(-11));
        let cubic = NumberField::new(IntPoly::from_i64(&[1, -3, 0, 1]));
        assert_eq!(cubic.poly_discriminant(), BigInt::from(81));
    }
}
