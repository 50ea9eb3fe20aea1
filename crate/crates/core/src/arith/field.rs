use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Field discriminants of the real quadratic fields accepted by
/// [`BaseField::new`]. All have narrow class number one.
pub const SUPPORTED_DISCRIMINANTS: [i64; 4] = [5, 8, 13, 17];

/// An algebraic integer `a + b·ω` in the integral basis `{1, ω}`.
///
/// Over `Q` the `b` coordinate is always zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zf {
    pub a: i64,
    pub b: i64,
}

impl Zf {
    pub const ZERO: Zf = Zf { a: 0, b: 0 };
    pub const ONE: Zf = Zf { a: 1, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        Zf { a, b }
    }

    pub const fn int(a: i64) -> Self {
        Zf { a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }
}

impl std::ops::Add for Zf {
    type Output = Zf;
    fn add(self, o: Zf) -> Zf {
        Zf::new(self.a + o.a, self.b + o.b)
    }
}

impl std::ops::Sub for Zf {
    type Output = Zf;
    fn sub(self, o: Zf) -> Zf {
        Zf::new(self.a - o.a, self.b - o.b)
    }
}

impl std::ops::Neg for Zf {
    type Output = Zf;
    fn neg(self) -> Zf {
        Zf::new(-self.a, -self.b)
    }
}

impl fmt::Display for Zf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}*w"),
            (a, b) => write!(f, "{a}{b:+}*w"),
        }
    }
}

/// An element `a + b·ω` of `F` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub a: BigRational,
    pub b: BigRational,
}

impl FieldElement {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        FieldElement { a, b }
    }

    pub fn from_int(a: i64) -> Self {
        FieldElement::new(rat(a), BigRational::zero())
    }

    pub fn zero() -> Self {
        FieldElement::from_int(0)
    }

    pub fn one() -> Self {
        FieldElement::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Converts to [`Zf`] when integral and small enough.
    pub fn to_zf(&self) -> Option<Zf> {
        if !self.is_integral() {
            return None;
        }
        let a = i64::try_from(self.a.to_integer()).ok()?;
        let b = i64::try_from(self.b.to_integer()).ok()?;
        Some(Zf::new(a, b))
    }
}

impl From<Zf> for FieldElement {
    fn from(z: Zf) -> Self {
        FieldElement::new(rat(z.a), rat(z.b))
    }
}

pub(crate) fn rat(a: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(a))
}

/// `Q` (degree 1) or a real quadratic field `Q(√d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseField {
    /// Squarefree radicand; 0 for `Q`.
    d: i64,
    degree: usize,
    disc: i64,
    /// `ω² = t·ω − m`.
    t: i64,
    m: i64,
    unit: Option<Zf>,
    label: String,
}

pub(crate) fn is_squarefree(n: i64) -> bool {
    let n = n.abs();
    let mut k = 2i64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl BaseField {
    /// Builds `Q` for `d = 0`, otherwise `Q(√d)`.
    ///
    /// `d` is read as the radicand when squarefree and as the field
    /// discriminant when it has the form `4m` with `m ≡ 2, 3 (mod 4)`
    /// squarefree, so both `2` and `8` give `Q(√2)`.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 {
            return Ok(Self::rationals());
        }
        if d < 0 || d == 1 {
            return Err(Error::Field(format!("d = {d} is not a real quadratic radicand")));
        }
        let radicand = if is_squarefree(d) {
            d
        } else if d % 4 == 0 && is_squarefree(d / 4) && matches!((d / 4) % 4, 2 | 3) {
            d / 4
        } else {
            return Err(Error::Field(format!("d = {d} is not squarefree")));
        };
        let (t, m, disc) = if radicand % 4 == 1 {
            (1, (1 - radicand) / 4, radicand)
        } else {
            (0, -radicand, 4 * radicand)
        };
        if !SUPPORTED_DISCRIMINANTS.contains(&disc) {
            return Err(Error::Field(format!(
                "Q(sqrt {radicand}) (discriminant {disc}) is not in the narrow class number one allowlist"
            )));
        }
        let mut field = BaseField {
            d: radicand,
            degree: 2,
            disc,
            t,
            m,
            unit: None,
            label: format!("2.2.{disc}.1"),
        };
        let unit = field.search_fundamental_unit();
        if field.norm(unit) != -1 {
            // h+ = 1 with h = 1 forces a unit of norm -1
            return Err(Error::Field(format!(
                "fundamental unit {unit} has norm +1; narrow class number is not one"
            )));
        }
        field.unit = Some(unit);
        Ok(field)
    }

    pub fn rationals() -> Self {
        BaseField {
            d: 0,
            degree: 1,
            disc: 1,
            t: 0,
            m: 0,
            unit: None,
            label: "1.1.1.1".to_string(),
        }
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// `(t, m)` with `ω² = t·ω − m`.
    pub fn omega_poly(&self) -> (i64, i64) {
        (self.t, self.m)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Fundamental unit `ε > 1` (first embedding); `None` over `Q`.
    pub fn fundamental_unit(&self) -> Option<Zf> {
        self.unit
    }

    pub fn omega(&self) -> Zf {
        Zf::new(0, 1)
    }

    fn search_fundamental_unit(&self) -> Zf {
        // smallest b > 0 with a + bω of norm ±1 and > 1 in the first embedding
        for b in 1i64.. {
            // a² + t·a·b + m·b² = ±1
            for s in [-1i64, 1] {
                let disc = self.t * self.t * b * b - 4 * (self.m * b * b - s);
                if disc < 0 {
                    continue;
                }
                let r = num_integer::Roots::sqrt(&disc);
                if r * r != disc {
                    continue;
                }
                for num in [-self.t * b + r, -self.t * b - r] {
                    if num % 2 == 0 {
                        let u = Zf::new(num / 2, b);
                        if self.norm(u).abs() == 1 && self.greater_than_one(u) {
                            return u;
                        }
                    }
                }
            }
        }
        unreachable!()
    }

    fn greater_than_one(&self, u: Zf) -> bool {
        self.sign_at(u - Zf::ONE, 0) == Ordering::Greater
    }

    /// Checks the stored fundamental unit: norm ±1, not ±1, and no unit
    /// strictly between 1 and ε among coordinates bounded by `bound`.
    pub fn verify_fundamental_unit(&self, bound: i64) -> bool {
        let Some(e) = self.unit else { return true };
        if self.norm(e).abs() != 1 || e == Zf::ONE || e == -Zf::ONE {
            return false;
        }
        for a in -bound..=bound {
            for b in -bound..=bound {
                let u = Zf::new(a, b);
                if self.norm(u).abs() == 1
                    && self.greater_than_one(u)
                    && self.sign_at(e - u, 0) == Ordering::Greater
                {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, x: Zf, y: Zf) -> Zf {
        Zf::new(
            x.a * y.a - self.m * x.b * y.b,
            x.a * y.b + x.b * y.a + self.t * x.b * y.b,
        )
    }

    pub fn pow(&self, x: Zf, mut e: u32) -> Zf {
        let mut r = Zf::ONE;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    pub fn scale(&self, k: i64, x: Zf) -> Zf {
        Zf::new(k * x.a, k * x.b)
    }

    /// Galois conjugate (identity over `Q`).
    pub fn conj(&self, x: Zf) -> Zf {
        Zf::new(x.a + self.t * x.b, -x.b)
    }

    /// `x*` with `x·x* = Nm(x)`: the conjugate, or `1` over `Q`.
    pub fn adjugate(&self, x: Zf) -> Zf {
        if self.degree == 1 {
            Zf::ONE
        } else {
            self.conj(x)
        }
    }

    pub fn norm(&self, x: Zf) -> i64 {
        if self.degree == 1 {
            x.a
        } else {
            x.a * x.a + self.t * x.a * x.b + self.m * x.b * x.b
        }
    }

    pub fn trace(&self, x: Zf) -> i64 {
        if self.degree == 1 {
            x.a
        } else {
            2 * x.a + self.t * x.b
        }
    }

    /// Exact division `x / y` in `Z_F`, `None` when not integral.
    pub fn div_exact(&self, x: Zf, y: Zf) -> Option<Zf> {
        let n = self.norm(y);
        if n == 0 {
            return None;
        }
        let p = self.mul(x, self.adjugate(y));
        if p.a % n == 0 && p.b % n == 0 {
            Some(Zf::new(p.a / n, p.b / n))
        } else {
            None
        }
    }

    /// Sign of `x` under real embedding `k ∈ {0, 1}`, where embedding 0
    /// sends `√d` to the positive root. Decided exactly: with
    /// `2x = u + v√D` the sign is compared through `u²` against `v²·D`.
    pub fn sign_at(&self, x: Zf, k: usize) -> Ordering {
        if self.degree == 1 {
            return x.a.cmp(&0);
        }
        let u = 2 * x.a as i128 + self.t as i128 * x.b as i128;
        let mut v = x.b as i128;
        if self.t == 0 {
            // ω = √d, 2x = 2a + 2b√d = u + (2b)√(d) and D = d
            return sign_of_sum(u, 2 * if k == 0 { v } else { -v }, self.d as i128);
        }
        if k == 1 {
            v = -v;
        }
        sign_of_sum(u, v, self.disc as i128)
    }

    pub fn is_totally_positive(&self, x: Zf) -> bool {
        (0..self.degree).all(|k| self.sign_at(x, k) == Ordering::Greater)
    }

    /// Approximate real embedding, for diagnostics only.
    pub fn embed_f64(&self, x: Zf, k: usize) -> f64 {
        if self.degree == 1 {
            return x.a as f64;
        }
        let s = (self.disc as f64).sqrt();
        let w = if k == 0 { (self.t as f64 + s) / 2.0 } else { (self.t as f64 - s) / 2.0 };
        x.a as f64 + x.b as f64 * w
    }

    /// Multiplies a totally positive `x` by the power of `ε²` of minimal
    /// trace; ties go to the lexicographically smallest coordinates.
    pub fn reduce_totally_positive(&self, x: Zf) -> Zf {
        let Some(e) = self.unit else { return x };
        let e2 = self.mul(e, e);
        let e2inv = self.mul(self.conj(e), self.conj(e)); // ε⁻² since N(ε) = -1 squared is 1
        let mut best = x;
        loop {
            let up = self.mul(best, e2);
            let down = self.mul(best, e2inv);
            let tb = self.trace(best);
            if self.trace(down) < tb {
                best = down;
            } else if self.trace(up) < tb {
                best = up;
            } else {
                break;
            }
        }
        let tb = self.trace(best);
        for c in [self.mul(best, e2), self.mul(best, e2inv)] {
            if self.trace(c) == tb && (c.a, c.b) < (best.a, best.b) {
                best = c;
            }
        }
        best
    }

    /// Normalizes a generator `g` of a nonzero ideal to the totally positive
    /// generator of minimal trace. Assumes narrow class number one.
    pub fn totally_positive_associate(&self, g: Zf) -> Zf {
        if self.degree == 1 {
            return Zf::int(g.a.abs());
        }
        let mut x = g;
        if self.norm(x) < 0 {
            x = self.mul(x, self.unit.expect("real quadratic field has a unit"));
        }
        if self.sign_at(x, 0) == Ordering::Less {
            x = -x;
        }
        debug_assert!(self.is_totally_positive(x));
        self.reduce_totally_positive(x)
    }

    // ---- rational elements ----

    pub fn fe_mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let t = rat(self.t);
        let m = rat(self.m);
        FieldElement::new(
            &x.a * &y.a - &m * &x.b * &y.b,
            &x.a * &y.b + &x.b * &y.a + &t * &x.b * &y.b,
        )
    }

    pub fn fe_add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement::new(&x.a + &y.a, &x.b + &y.b)
    }

    pub fn fe_sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement::new(&x.a - &y.a, &x.b - &y.b)
    }

    pub fn fe_conj(&self, x: &FieldElement) -> FieldElement {
        FieldElement::new(&x.a + rat(self.t) * &x.b, -x.b.clone())
    }

    pub fn fe_norm(&self, x: &FieldElement) -> BigRational {
        if self.degree == 1 {
            return x.a.clone();
        }
        &x.a * &x.a + rat(self.t) * &x.a * &x.b + rat(self.m) * &x.b * &x.b
    }

    pub fn fe_inv(&self, x: &FieldElement) -> Result<FieldElement> {
        let n = self.fe_norm(x);
        if n.is_zero() {
            return Err(Error::Zero("inverse of zero"));
        }
        let c = self.fe_conj(x);
        Ok(FieldElement::new(&c.a / &n, &c.b / &n))
    }

    pub fn fe_div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.fe_mul(x, &self.fe_inv(y)?))
    }

    /// Square root in `F` if one exists.
    pub fn fe_sqrt(&self, x: &FieldElement) -> Option<FieldElement> {
        if x.is_zero() {
            return Some(FieldElement::zero());
        }
        if self.degree == 1 {
            return rat_sqrt(&x.a).map(|r| FieldElement::new(r, BigRational::zero()));
        }
        // rewrite x = A + B√r with r the radicand
        let (big_a, big_b) = self.to_sqrt_coords(x);
        let r = rat(self.d);
        let n = &big_a * &big_a - &r * &big_b * &big_b;
        let s = rat_sqrt(&n)?;
        let two = rat(2);
        for cand in [(&big_a + &s) / &two, (&big_a - &s) / &two] {
            if cand.is_negative() {
                continue;
            }
            if let Some(p) = rat_sqrt(&cand) {
                let q = if p.is_zero() {
                    // x = r·Q², so Q² = A / r
                    match rat_sqrt(&(&big_a / &r)) {
                        Some(q) => q,
                        None => continue,
                    }
                } else {
                    &big_b / (&two * &p)
                };
                let y = self.from_sqrt_coords(&p, &q);
                if &self.fe_mul(&y, &y) == x {
                    return Some(y);
                }
            }
        }
        None
    }

    fn to_sqrt_coords(&self, x: &FieldElement) -> (BigRational, BigRational) {
        if self.t == 1 {
            // ω = (1 + √r)/2
            let half = BigRational::new(BigInt::from(1), BigInt::from(2));
            (&x.a + &x.b * &half, &x.b * &half)
        } else {
            (x.a.clone(), x.b.clone())
        }
    }

    fn from_sqrt_coords(&self, p: &BigRational, q: &BigRational) -> FieldElement {
        if self.t == 1 {
            // p + q√r = p + q(2ω − 1)
            FieldElement::new(p - q, q * rat(2))
        } else {
            FieldElement::new(p.clone(), q.clone())
        }
    }

    /// True iff `x·y` is a square in `F`.
    pub fn square_class_equal(&self, x: &FieldElement, y: &FieldElement) -> Result<bool> {
        if x.is_zero() || y.is_zero() {
            return Err(Error::Zero("square class of zero"));
        }
        Ok(self.fe_sqrt(&self.fe_mul(x, y)).is_some())
    }

    pub fn fe_sign_at(&self, x: &FieldElement, k: usize) -> Ordering {
        // clear denominators with a positive integer
        let den = x.a.denom().lcm(x.b.denom());
        let a = (&x.a * BigRational::from_integer(den.clone())).to_integer();
        let b = (&x.b * BigRational::from_integer(den)).to_integer();
        if self.degree == 1 {
            return a.sign_cmp();
        }
        let u = BigInt::from(2) * &a + BigInt::from(self.t) * &b;
        let mut v = b;
        let big_d;
        if self.t == 0 {
            v *= 2;
            big_d = BigInt::from(self.d);
        } else {
            big_d = BigInt::from(self.disc);
        }
        if k == 1 {
            v = -v;
        }
        big_sign_of_sum(&u, &v, &big_d)
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Sign of `u + v√D` for `D > 0` not a square.
fn sign_of_sum(u: i128, v: i128, d: i128) -> Ordering {
    let su = u.cmp(&0);
    let sv = v.cmp(&0);
    if sv == Ordering::Equal {
        return su;
    }
    if su == Ordering::Equal || su == sv {
        return sv;
    }
    // opposite signs: compare magnitudes
    match (u * u).cmp(&(v * v * d)) {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => Ordering::Equal,
    }
}

fn big_sign_of_sum(u: &BigInt, v: &BigInt, d: &BigInt) -> Ordering {
    let su = u.sign_cmp();
    let sv = v.sign_cmp();
    if sv == Ordering::Equal {
        return su;
    }
    if su == Ordering::Equal || su == sv {
        return sv;
    }
    match (u * u).cmp(&(v * v * d)) {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => Ordering::Equal,
    }
}

pub(crate) fn rat_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl BaseField {
    /// Squarefree integer representing the square class of a nonzero
    /// rational.
    pub fn rational_square_free_part(x: &BigRational) -> BigInt {
        let n = x.numer() * x.denom();
        let sign = if n.is_negative() { -1 } else { 1 };
        let mut m = n.abs();
        let mut out = BigInt::one();
        let mut p = BigInt::from(2);
        while &p * &p <= m {
            let mut e = 0;
            while (&m % &p).is_zero() {
                m /= &p;
                e += 1;
            }
            if e % 2 == 1 {
                out *= &p;
            }
            p += 1;
        }
        out * m * sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_field() {
        let f = BaseField::new(5).unwrap();
        assert_eq!(f.discriminant(), 5);
        assert_eq!(f.fundamental_unit(), Some(Zf::new(0, 1)));
        assert_eq!(f.norm(Zf::new(0, 1)), -1);
        assert!(f.verify_fundamental_unit(10));
        assert_eq!(f.label(), "2.2.5.1");
    }

    #[test]
    fn sqrt2_field_by_discriminant() {
        let f = BaseField::new(8).unwrap();
        assert_eq!(f.radicand(), 2);
        assert_eq!(f.discriminant(), 8);
        assert_eq!(f.fundamental_unit(), Some(Zf::new(1, 1)));
        assert_eq!(f.norm(Zf::new(1, 1)), -1);
        assert!(f.verify_fundamental_unit(10));
        assert_eq!(BaseField::new(2).unwrap(), f);
    }

    #[test]
    fn rationals() {
        let f = BaseField::new(0).unwrap();
        assert_eq!(f.degree(), 1);
        assert!(f.fundamental_unit().is_none());
    }

    #[test]
    fn rejections() {
        assert!(matches!(BaseField::new(9), Err(Error::Field(_))));
        assert!(matches!(BaseField::new(3), Err(Error::Field(m)) if m.contains("allowlist")));
        assert!(matches!(BaseField::new(12), Err(Error::Field(m)) if m.contains("allowlist")));
    }

    #[test]
    fn other_allowlisted_units() {
        let f = BaseField::new(13).unwrap();
        assert_eq!(f.fundamental_unit(), Some(Zf::new(1, 1))); // (3+√13)/2
        let f = BaseField::new(17).unwrap();
        assert_eq!(f.norm(f.fundamental_unit().unwrap()), -1);
        assert!(f.verify_fundamental_unit(10));
    }

    #[test]
    fn embeddings_signs() {
        let f = BaseField::new(5).unwrap();
        let w = f.omega();
        assert_eq!(f.sign_at(w, 0), Ordering::Greater);
        assert_eq!(f.sign_at(w, 1), Ordering::Less);
        // √5·ω = 2 + ω
        let g = f.totally_positive_associate(Zf::new(-1, 2));
        assert_eq!(g, Zf::new(2, 1));
        assert_eq!(f.totally_positive_associate(Zf::int(-2)), Zf::int(2));
    }

    #[test]
    fn square_classes() {
        let q = BaseField::rationals();
        let fe = FieldElement::from_int;
        assert!(q.square_class_equal(&fe(5), &fe(20)).unwrap());
        assert!(!q.square_class_equal(&fe(5), &fe(-5)).unwrap());
        let f = BaseField::new(5).unwrap();
        let w2 = FieldElement::from(f.mul(f.omega(), f.omega()));
        assert!(f.square_class_equal(&w2, &fe(1)).unwrap());
        let eps = FieldElement::from(f.omega());
        assert!(!f.square_class_equal(&eps, &fe(1)).unwrap());
        assert!(f.square_class_equal(&fe(5), &fe(1)).is_ok_and(|b| b));
        assert!(q.square_class_equal(&fe(0), &fe(1)).is_err());
    }
}
