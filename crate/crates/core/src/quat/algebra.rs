//! Quaternion algebras `(a, b | F)` with `i² = a`, `j² = b`, `ij = −ji`, and
//! local Hilbert symbols.

use std::collections::HashSet;

use num_integer::Integer;
use num_traits::Zero;

use crate::arith::ideal::factor_ideal;
use crate::arith::{BaseField, FieldElement, Ideal, LocalRing, PrimeIdeal, Zf};
use crate::{Error, Result};

/// Coordinates over `{1, i, j, k}`.
pub type Quat = [FieldElement; 4];

/// A place of `F`: a real embedding or a finite prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Place {
    Real(usize),
    Finite(PrimeIdeal),
}

#[derive(Clone, Debug)]
pub struct QuaternionAlgebra {
    field: BaseField,
    a: Zf,
    b: Zf,
    ramified: Vec<PrimeIdeal>,
    disc: Ideal,
}

impl QuaternionAlgebra {
    /// Builds the algebra and computes its finite ramification. Fails unless
    /// every real place ramifies.
    pub fn new(field: &BaseField, a: Zf, b: Zf) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::Zero("quaternion algebra parameter"));
        }
        for k in 0..field.degree() {
            if hilbert_symbol(field, a, b, Place::Real(k))? != -1 {
                return Err(Error::Ramification(format!(
                    "({a}, {b}) is split at real place {k}; the algebra must be totally definite"
                )));
            }
        }
        let ab2 = field.scale(2, field.mul(a, b));
        let support = factor_ideal(field, &Ideal::principal(field, ab2)?)?;
        let mut ramified = Vec::new();
        for (p, _) in support {
            if hilbert_symbol(field, a, b, Place::Finite(p))? == -1 {
                ramified.push(p);
            }
        }
        ramified.sort();
        if !(ramified.len() + field.degree()).is_multiple_of(2) {
            return Err(Error::Verification("ramification set has odd cardinality".into()));
        }
        let disc = ramified.iter().fold(Ideal::unit(), |acc, p| acc.mul(field, &p.ideal));
        Ok(QuaternionAlgebra { field: field.clone(), a, b, ramified, disc })
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn params(&self) -> (Zf, Zf) {
        (self.a, self.b)
    }

    pub fn ramified_primes(&self) -> &[PrimeIdeal] {
        &self.ramified
    }

    pub fn discriminant(&self) -> &Ideal {
        &self.disc
    }

    pub fn zero(&self) -> Quat {
        std::array::from_fn(|_| FieldElement::zero())
    }

    pub fn one(&self) -> Quat {
        let mut q = self.zero();
        q[0] = FieldElement::one();
        q
    }

    pub fn mul(&self, x: &Quat, y: &Quat) -> Quat {
        let f = &self.field;
        let a = FieldElement::from(self.a);
        let b = FieldElement::from(self.b);
        let ab = f.fe_mul(&a, &b);
        let m = |u: &FieldElement, v: &FieldElement| f.fe_mul(u, v);
        let z0 = f.fe_sub(
            &f.fe_add(&f.fe_add(&m(&x[0], &y[0]), &m(&a, &m(&x[1], &y[1]))), &m(&b, &m(&x[2], &y[2]))),
            &m(&ab, &m(&x[3], &y[3])),
        );
        let z1 = f.fe_add(
            &f.fe_add(&m(&x[0], &y[1]), &m(&x[1], &y[0])),
            &m(&b, &f.fe_sub(&m(&x[3], &y[2]), &m(&x[2], &y[3]))),
        );
        let z2 = f.fe_add(
            &f.fe_add(&m(&x[0], &y[2]), &m(&x[2], &y[0])),
            &m(&a, &f.fe_sub(&m(&x[1], &y[3]), &m(&x[3], &y[1]))),
        );
        let z3 = f.fe_add(
            &f.fe_add(&m(&x[0], &y[3]), &m(&x[3], &y[0])),
            &f.fe_sub(&m(&x[1], &y[2]), &m(&x[2], &y[1])),
        );
        [z0, z1, z2, z3]
    }

    pub fn conj(&self, x: &Quat) -> Quat {
        let neg = |u: &FieldElement| self.field.fe_sub(&FieldElement::zero(), u);
        [x[0].clone(), neg(&x[1]), neg(&x[2]), neg(&x[3])]
    }

    pub fn trd(&self, x: &Quat) -> FieldElement {
        self.field.fe_add(&x[0], &x[0])
    }

    pub fn nrd(&self, x: &Quat) -> FieldElement {
        let f = &self.field;
        let a = FieldElement::from(self.a);
        let b = FieldElement::from(self.b);
        let sq = |u: &FieldElement| f.fe_mul(u, u);
        let t1 = f.fe_mul(&a, &sq(&x[1]));
        let t2 = f.fe_mul(&b, &sq(&x[2]));
        let t3 = f.fe_mul(&f.fe_mul(&a, &b), &sq(&x[3]));
        f.fe_add(&f.fe_sub(&f.fe_sub(&sq(&x[0]), &t1), &t2), &t3)
    }
}

fn valuation(field: &BaseField, p: &PrimeIdeal, mut x: Zf) -> (u32, Zf) {
    let mut v = 0;
    while let Some(y) = field.div_exact(x, p.generator) {
        x = y;
        v += 1;
    }
    (v, x)
}

/// Hilbert symbol `(a, b)_v`: `+1` iff `a x² + b y² = z²` has a nontrivial
/// solution in the completion at `v`.
pub fn hilbert_symbol(field: &BaseField, a: Zf, b: Zf, v: Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("Hilbert symbol argument"));
    }
    match v {
        Place::Real(k) => {
            let neg = |x| field.sign_at(x, k) == std::cmp::Ordering::Less;
            Ok(if neg(a) && neg(b) { -1 } else { 1 })
        }
        Place::Finite(p) if p.p != 2 => Ok(tame_symbol(field, &p, a, b)),
        Place::Finite(p) => Ok(dyadic_symbol(field, &p, a, b)),
    }
}

/// Hilbert symbol for arguments with rational coordinates; denominators are
/// cleared by squares.
pub fn hilbert_symbol_fe(field: &BaseField, a: &FieldElement, b: &FieldElement, v: Place) -> Result<i32> {
    let clear = |x: &FieldElement| -> Result<Zf> {
        if x.is_zero() {
            return Err(Error::Zero("Hilbert symbol argument"));
        }
        let den = x.a.denom().lcm(x.b.denom());
        let d2 = num_rational::BigRational::from_integer(&den * &den);
        let y = FieldElement::new(&x.a * &d2, &x.b * &d2);
        y.to_zf().ok_or_else(|| Error::Field("coordinate overflow".into()))
    };
    hilbert_symbol(field, clear(a)?, clear(b)?, v)
}

fn tame_symbol(field: &BaseField, p: &PrimeIdeal, a: Zf, b: Zf) -> i32 {
    let (va, u) = valuation(field, p, a);
    let (vb, w) = valuation(field, p, b);
    let k = LocalRing::new(field, *p, 1);
    let q = p.norm() as u64;
    let mut x = k.mul(k.pow(k.encode(u), vb as u64), k.pow(k.inv(k.encode(w)).expect("unit"), va as u64));
    if (va * vb) % 2 == 1 {
        x = k.neg(x);
    }
    if k.pow(x, (q - 1) / 2) == k.one() {
        1
    } else {
        -1
    }
}

fn dyadic_symbol(field: &BaseField, p: &PrimeIdeal, a: Zf, b: Zf) -> i32 {
    // strip even powers of the uniformizer so both valuations are 0 or 1
    let strip = |x: Zf| {
        let (v, u) = valuation(field, p, x);
        if v % 2 == 1 {
            field.mul(u, p.generator)
        } else {
            u
        }
    };
    let (a, b) = (strip(a), strip(b));
    let e = if p.ramified { 2 } else { 1 };
    let ring = LocalRing::new(field, *p, 2 * e + 3);
    let n = ring.size() as u32;
    let (ra, rb) = (ring.encode(a), ring.encode(b));
    let sq: Vec<u32> = (0..n).map(|x| ring.mul(x, x)).collect();
    let asq: Vec<u32> = sq.iter().map(|&s| ring.mul(ra, s)).collect();
    let bsq: Vec<u32> = sq.iter().map(|&s| ring.mul(rb, s)).collect();
    let squares: HashSet<u32> = sq.iter().copied().collect();
    let one = ring.one();
    // z = 1
    let bset: HashSet<u32> = bsq.iter().copied().collect();
    if asq.iter().any(|&t| bset.contains(&ring.sub(one, t))) {
        return 1;
    }
    // x = 1: z² = a + b y²
    if bsq.iter().any(|&t| squares.contains(&ring.add(ra, t))) {
        return 1;
    }
    // y = 1: z² = b + a x²
    if asq.iter().any(|&t| squares.contains(&ring.add(rb, t))) {
        return 1;
    }
    -1
}

/// Parses a field element from `"a"` or `"a b"` (rationals allowed).
pub fn parse_field_element(s: &str) -> Result<FieldElement> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    let parse = |t: &str| -> Result<num_rational::BigRational> {
        t.parse::<num_rational::BigRational>()
            .map_err(|_| Error::Config(format!("cannot parse rational '{t}'")))
    };
    match toks.as_slice() {
        [x] => Ok(FieldElement::new(parse(x)?, Zero::zero())),
        [x, y] => Ok(FieldElement::new(parse(x)?, parse(y)?)),
        _ => Err(Error::Config(format!("expected one or two coordinates, got '{s}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ideal::primes_above;

    #[test]
    fn classical_symbols() {
        let q = BaseField::rationals();
        let m1 = Zf::int(-1);
        assert_eq!(hilbert_symbol(&q, m1, m1, Place::Real(0)).unwrap(), -1);
        let two = primes_above(&q, 2)[0];
        assert_eq!(hilbert_symbol(&q, m1, m1, Place::Finite(two)).unwrap(), -1);
        for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let pp = primes_above(&q, p)[0];
            assert_eq!(hilbert_symbol(&q, m1, m1, Place::Finite(pp)).unwrap(), 1);
        }
        // (2, 3)_3 = (2/3) = -1; (-1, 3)_3 = (-1/3) = -1; (3, 5)_5 = (3/5) = -1
        let p3 = primes_above(&q, 3)[0];
        assert_eq!(hilbert_symbol(&q, Zf::int(2), Zf::int(3), Place::Finite(p3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q, m1, Zf::int(3), Place::Finite(p3)).unwrap(), -1);
        // (2, 2)_2 = 1, (-1, 2)_2 = 1, (3, 3)_2 = -1, (2, 5)_2 = -1
        for (x, y, s) in [(2, 2, 1), (-1, 2, 1), (3, 3, -1), (2, 5, -1), (-1, -3, 1)] {
            assert_eq!(hilbert_symbol(&q, Zf::int(x), Zf::int(y), Place::Finite(two)).unwrap(), s, "({x},{y})");
        }
    }

    #[test]
    fn ramification_sets() {
        let q = BaseField::rationals();
        let alg = QuaternionAlgebra::new(&q, Zf::int(-1), Zf::int(-11)).unwrap();
        assert_eq!(alg.discriminant().norm(), 11);
        let alg = QuaternionAlgebra::new(&q, Zf::int(-1), Zf::int(-1)).unwrap();
        assert_eq!(alg.discriminant().norm(), 2);
        let f = BaseField::new(5).unwrap();
        let alg = QuaternionAlgebra::new(&f, Zf::int(-1), Zf::int(-1)).unwrap();
        assert!(alg.discriminant().is_unit());
        assert!(QuaternionAlgebra::new(&q, Zf::int(1), Zf::int(-1)).is_err());
    }

    #[test]
    fn nrd_is_multiplicative() {
        let f = BaseField::new(5).unwrap();
        let alg = QuaternionAlgebra::new(&f, Zf::int(-1), Zf::new(-3, 1)).unwrap_or_else(|_| {
            QuaternionAlgebra::new(&f, Zf::int(-1), Zf::int(-1)).unwrap()
        });
        let e = |a: i64, b: i64| FieldElement::from(Zf::new(a, b));
        let x = [e(1, 2), e(-1, 0), e(3, 1), e(0, -2)];
        let y = [e(0, 1), e(2, 2), e(-1, 1), e(5, 0)];
        let lhs = alg.nrd(&alg.mul(&x, &y));
        let rhs = f.fe_mul(&alg.nrd(&x), &alg.nrd(&y));
        assert_eq!(lhs, rhs);
        let t = f.fe_add(&alg.trd(&x), &FieldElement::zero());
        let s = alg.mul(&x, &alg.conj(&x));
        assert_eq!(s[0], alg.nrd(&x));
        assert_eq!(t, f.fe_add(&x[0], &x[0]));
    }
}
