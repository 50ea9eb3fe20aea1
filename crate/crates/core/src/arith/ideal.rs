use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

use super::field::{BaseField, Zf};
use crate::{Error, Result};

/// Nonzero integral ideal of `Z_F` in Hermite normal form: the Z-basis is
/// `{a, b + c·ω}` with `a, c > 0`, `0 ≤ b < a`. Over `Q` it is `(a, 0, 1)`.
///
/// Equal ideals have identical `(a, b, c)`, so equality is data equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    a: i64,
    b: i64,
    c: i64,
}

impl Ord for Ideal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.norm(), self.a, self.b, self.c).cmp(&(other.norm(), other.a, other.b, other.c))
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.norm(), self.a, self.b, self.c)
    }
}

fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

impl Ideal {
    pub fn unit() -> Self {
        Ideal { a: 1, b: 0, c: 1 }
    }

    /// `(a, b, c)` of the Hermite basis `{a, b + cω}`.
    pub fn hnf(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    /// Rebuilds from stored HNF data, checking it is an ideal of `Z_F`.
    pub fn from_hnf(field: &BaseField, a: i64, b: i64, c: i64) -> Result<Self> {
        if a <= 0 || c <= 0 || b < 0 || b >= a || (field.is_rational() && (b != 0 || c != 1)) {
            return Err(Error::Field(format!("({a},{b},{c}) is not a Hermite form")));
        }
        let id = Ideal { a, b, c };
        if !field.is_rational() {
            let w = field.omega();
            for g in id.basis(field) {
                if !id.contains(field, field.mul(g, w)) {
                    return Err(Error::Field(format!("({a},{b},{c}) is not an ideal")));
                }
            }
        }
        Ok(id)
    }

    pub fn norm(&self) -> i64 {
        self.a * self.c
    }

    pub fn is_unit(&self) -> bool {
        self.a == 1 && self.c == 1
    }

    /// Z-basis.
    pub fn basis(&self, field: &BaseField) -> Vec<Zf> {
        if field.is_rational() {
            vec![Zf::int(self.a)]
        } else {
            vec![Zf::int(self.a), Zf::new(self.b, self.c)]
        }
    }

    /// Z-span of `gens`, which must already be closed under multiplication
    /// by `Z_F` and of full rank.
    pub fn from_z_span(field: &BaseField, gens: &[Zf]) -> Result<Self> {
        if field.is_rational() {
            let a = gens.iter().fold(0i64, |g, x| g.gcd(&x.a));
            if a == 0 {
                return Err(Error::Zero("zero ideal"));
            }
            return Ok(Ideal { a, b: 0, c: 1 });
        }
        // combination with minimal ω-coordinate
        let mut c = 0i64;
        let mut v0 = Zf::ZERO;
        for &g in gens {
            let (d, x, y) = xgcd(c, g.b);
            if d != c {
                v0 = Zf::new(x * v0.a + y * g.a, d);
                c = d;
            }
        }
        if c < 0 {
            c = -c;
            v0 = -v0;
        }
        if c == 0 {
            return Err(Error::Zero("ideal of rank < 2"));
        }
        let mut a = 0i64;
        for &g in gens {
            let k = g.b / c;
            a = a.gcd(&(g.a - k * v0.a));
        }
        if a == 0 {
            return Err(Error::Zero("ideal of rank < 2"));
        }
        let b = v0.a.rem_euclid(a);
        Ok(Ideal { a, b, c })
    }

    /// Ideal generated (as `Z_F`-module) by `gens`.
    pub fn generated_by(field: &BaseField, gens: &[Zf]) -> Result<Self> {
        let mut all = Vec::with_capacity(2 * gens.len());
        for &g in gens {
            all.push(g);
            if !field.is_rational() {
                all.push(field.mul(g, field.omega()));
            }
        }
        Self::from_z_span(field, &all)
    }

    pub fn principal(field: &BaseField, g: Zf) -> Result<Self> {
        Self::generated_by(field, &[g])
    }

    pub fn rational(field: &BaseField, n: i64) -> Self {
        Self::principal(field, Zf::int(n)).expect("nonzero integer")
    }

    pub fn contains(&self, field: &BaseField, x: Zf) -> bool {
        if field.is_rational() {
            return x.a % self.a == 0;
        }
        if x.b % self.c != 0 {
            return false;
        }
        (x.a - (x.b / self.c) * self.b) % self.a == 0
    }

    /// Canonical representative of `x` modulo the ideal: `(x, y)` with
    /// `0 ≤ x < a`, `0 ≤ y < c`.
    pub fn reduce(&self, x: Zf) -> Zf {
        let y = x.b.rem_euclid(self.c);
        let k = (x.b - y) / self.c;
        let xa = (x.a - k * self.b).rem_euclid(self.a);
        Zf::new(xa, y)
    }

    pub fn contains_ideal(&self, field: &BaseField, other: &Ideal) -> bool {
        other.basis(field).into_iter().all(|g| self.contains(field, g))
    }

    pub fn mul(&self, field: &BaseField, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for x in self.basis(field) {
            for y in other.basis(field) {
                gens.push(field.mul(x, y));
            }
        }
        Self::from_z_span(field, &gens).expect("product of nonzero ideals")
    }

    pub fn pow(&self, field: &BaseField, e: u32) -> Ideal {
        (0..e).fold(Ideal::unit(), |acc, _| acc.mul(field, self))
    }

    pub fn add(&self, field: &BaseField, other: &Ideal) -> Ideal {
        let mut gens = self.basis(field);
        gens.extend(other.basis(field));
        Self::from_z_span(field, &gens).expect("sum of nonzero ideals")
    }

    pub fn is_coprime(&self, field: &BaseField, other: &Ideal) -> bool {
        self.add(field, other).is_unit()
    }

    pub fn conj(&self, field: &BaseField) -> Ideal {
        let gens: Vec<Zf> = self.basis(field).into_iter().map(|x| field.conj(x)).collect();
        Self::from_z_span(field, &gens).expect("conjugate ideal")
    }

    /// Exact quotient `self / other` when `other ⊇ self`.
    pub fn div(&self, field: &BaseField, other: &Ideal) -> Result<Ideal> {
        let fs = factor_ideal(field, self)?;
        let mut out = Ideal::unit();
        let of = factor_ideal(field, other)?;
        for (p, e) in &fs {
            let sub = of.iter().find(|(q, _)| q.ideal == p.ideal).map(|x| x.1).unwrap_or(0);
            if sub > *e {
                return Err(Error::Precondition(format!("{other} does not divide {self}")));
            }
            out = out.mul(field, &p.ideal.pow(field, e - sub));
        }
        for (q, _) in &of {
            if !fs.iter().any(|(p, _)| p.ideal == q.ideal) {
                return Err(Error::Precondition(format!("{other} does not divide {self}")));
            }
        }
        Ok(out)
    }

    /// Some generator (narrow class number one makes one exist).
    pub fn generator(&self, field: &BaseField) -> Zf {
        let n = self.norm();
        let basis = self.basis(field);
        if field.is_rational() {
            return Zf::int(self.a);
        }
        for k in 1i64.. {
            for i in -k..=k {
                for j in -k..=k {
                    if i.abs() != k && j.abs() != k {
                        continue;
                    }
                    let x = Zf::new(i * basis[0].a + j * basis[1].a, j * basis[1].b);
                    if field.norm(x).abs() == n {
                        return x;
                    }
                }
            }
        }
        unreachable!()
    }

    /// Totally positive generator of minimal trace, ties broken by smallest
    /// coordinates.
    pub fn totally_positive_generator(&self, field: &BaseField) -> Zf {
        field.totally_positive_associate(self.generator(field))
    }
}

/// A prime ideal with its rational prime, residue degree and label data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub ideal: Ideal,
    pub p: i64,
    pub f: u32,
    pub ramified: bool,
    /// Smallest `a ≥ 0` with `ω − a ∈ 𝔭`, for degree-one primes of a
    /// quadratic field.
    pub root: Option<i64>,
    /// Totally positive generator of minimal trace.
    pub generator: Zf,
}

impl PrimeIdeal {
    pub fn norm(&self) -> i64 {
        self.ideal.norm()
    }

    /// `"p"` over `Q`; `"N.a"` for degree-one primes of a quadratic field;
    /// `"N"` for inert primes.
    pub fn label(&self) -> String {
        match self.root {
            Some(a) => format!("{}.{}", self.norm(), a),
            None => format!("{}", self.norm()),
        }
    }

    pub fn sort_key(&self) -> (i64, i64) {
        (self.norm(), self.root.unwrap_or(-1))
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Primes of `Z_F` above the rational prime `p`, sorted by label.
pub fn primes_above(field: &BaseField, p: i64) -> Vec<PrimeIdeal> {
    assert!(is_prime(p), "{p} is not prime");
    let make = |ideal: Ideal, f: u32, ramified: bool, root: Option<i64>| PrimeIdeal {
        ideal,
        p,
        f,
        ramified,
        root,
        generator: ideal.totally_positive_generator(field),
    };
    if field.is_rational() {
        return vec![make(Ideal::rational(field, p), 1, false, None)];
    }
    let (t, m) = field.omega_poly();
    let roots: Vec<i64> = (0..p).filter(|&r| (r * r - t * r + m).rem_euclid(p) == 0).collect();
    let ramified = field.discriminant() % p == 0;
    if roots.is_empty() {
        return vec![make(Ideal::rational(field, p), 2, false, None)];
    }
    let mut out: Vec<PrimeIdeal> = roots
        .iter()
        .map(|&r| {
            let id = Ideal::generated_by(field, &[Zf::int(p), Zf::new(-r, 1)]).expect("prime");
            make(id, 1, ramified, Some(r))
        })
        .collect();
    if ramified {
        out.truncate(1);
    }
    out.sort();
    out
}

/// All primes with norm at most `bound`, sorted by `(norm, root)`.
pub fn primes_up_to(field: &BaseField, bound: i64) -> Vec<PrimeIdeal> {
    let mut out = Vec::new();
    for p in 2..=bound {
        if is_prime(p) {
            out.extend(primes_above(field, p).into_iter().filter(|q| q.norm() <= bound));
        }
    }
    out.sort();
    out
}

fn rational_prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            while n % k == 0 {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Prime factorization, sorted by prime label; verified by re-multiplying.
pub fn factor_ideal(field: &BaseField, n: &Ideal) -> Result<Vec<(PrimeIdeal, u32)>> {
    let mut out = Vec::new();
    for p in rational_prime_factors(n.norm()) {
        for q in primes_above(field, p) {
            let mut e = 0u32;
            let mut pk = q.ideal;
            while pk.contains_ideal(field, n) {
                e += 1;
                pk = pk.mul(field, &q.ideal);
            }
            if e > 0 {
                out.push((q, e));
            }
        }
    }
    out.sort_by_key(|x| x.0);
    let back = out.iter().fold(Ideal::unit(), |acc, (q, e)| acc.mul(field, &q.ideal.pow(field, *e)));
    if &back != n {
        return Err(Error::Verification(format!("factorization of {n} does not multiply back")));
    }
    Ok(out)
}

/// Every ideal of norm exactly `m`, sorted.
pub fn ideals_of_norm(field: &BaseField, m: i64) -> Vec<Ideal> {
    if field.is_rational() {
        return vec![Ideal::rational(field, m)];
    }
    let mut out = Vec::new();
    for c in 1..=m {
        if m % c != 0 {
            continue;
        }
        let a = m / c;
        for b in 0..a {
            if let Ok(id) = Ideal::from_hnf(field, a, b, c) {
                out.push(id);
            }
        }
    }
    out.sort();
    out
}

/// Ideals with norm in `lo..=hi`, sorted.
pub fn ideals_in_range(field: &BaseField, lo: i64, hi: i64) -> Vec<Ideal> {
    (lo.max(1)..=hi).flat_map(|m| ideals_of_norm(field, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> BaseField {
        BaseField::new(5).unwrap()
    }

    #[test]
    fn split_eleven() {
        let f = q5();
        let n = Ideal::rational(&f, 11);
        let fac = factor_ideal(&f, &n).unwrap();
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0].0.root, Some(4));
        assert_eq!(fac[1].0.root, Some(8));
        assert!(fac.iter().all(|x| x.1 == 1));
        assert_eq!(fac[0].0.label(), "11.4");
    }

    #[test]
    fn inert_two_and_unit() {
        let f = q5();
        let fac = factor_ideal(&f, &Ideal::rational(&f, 2)).unwrap();
        assert_eq!(fac.len(), 1);
        assert_eq!(fac[0].0.norm(), 4);
        assert_eq!(fac[0].0.f, 2);
        assert!(factor_ideal(&f, &Ideal::unit()).unwrap().is_empty());
    }

    #[test]
    fn prime_label_order() {
        let f = q5();
        let labels: Vec<String> = primes_up_to(&f, 11).iter().map(|p| p.label()).collect();
        assert_eq!(labels, ["4", "5.3", "9", "11.4", "11.8"]);
    }

    #[test]
    fn generators() {
        let f = q5();
        let sqrt5 = Ideal::principal(&f, Zf::new(-1, 2)).unwrap();
        assert_eq!(sqrt5.norm(), 5);
        assert_eq!(sqrt5.totally_positive_generator(&f), Zf::new(2, 1));
        assert_eq!(Ideal::rational(&f, 2).totally_positive_generator(&f), Zf::int(2));
        let q = BaseField::rationals();
        assert_eq!(Ideal::rational(&q, 7).totally_positive_generator(&q), Zf::int(7));
    }

    #[test]
    fn norm_multiplicative_and_canonical() {
        let f = q5();
        let ids = ideals_in_range(&f, 1, 60);
        for i in ids.iter().step_by(3) {
            for j in ids.iter().step_by(5) {
                let p = i.mul(&f, j);
                assert_eq!(p.norm(), i.norm() * j.norm());
                let (a, b, c) = p.hnf();
                assert_eq!(Ideal::from_hnf(&f, a, b, c).unwrap(), p);
            }
        }
    }

    #[test]
    fn zeta_counts() {
        // number of ideals of norm m via splitting types
        let f = q5();
        for m in 1..=120 {
            let mut expect = 1i64;
            let mut n = m;
            for p in rational_prime_factors(m) {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                let ps = primes_above(&f, p);
                expect *= match (ps.len(), ps[0].f) {
                    (2, _) => e + 1,
                    (1, 2) => i64::from(e % 2 == 0),
                    _ => 1,
                };
            }
            assert_eq!(ideals_of_norm(&f, m).len() as i64, expect, "norm {m}");
        }
    }
}
