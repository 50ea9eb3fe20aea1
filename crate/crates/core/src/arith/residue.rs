//! Residue rings `Z_F/N` and their local components `Z_F/𝔭^e`.

use super::field::{BaseField, Zf};
use super::ideal::{factor_ideal, Ideal, PrimeIdeal};
use crate::{Error, Result};

/// `Z_F/𝔭^e` with elements indexed by `u32` through the Hermite basis of
/// `𝔭^e`: the residue `(x, y)` with `0 ≤ x < a`, `0 ≤ y < c` has index
/// `y·a + x`.
#[derive(Clone, Debug)]
pub struct LocalRing {
    field: BaseField,
    prime: PrimeIdeal,
    exp: u32,
    modulus: Ideal,
    a: i64,
    units: Vec<bool>,
    inv: Vec<u32>,
    /// rank of each non-unit among non-units, `u32::MAX` for units
    nonunit_rank: Vec<u32>,
    nonunits: Vec<u32>,
    valuation: Vec<u32>,
}

impl LocalRing {
    pub fn new(field: &BaseField, prime: PrimeIdeal, exp: u32) -> Self {
        let modulus = prime.ideal.pow(field, exp);
        let (a, _, _) = modulus.hnf();
        let size = modulus.norm() as usize;
        let mut ring = LocalRing {
            field: field.clone(),
            prime,
            exp,
            modulus,
            a,
            units: Vec::new(),
            inv: Vec::new(),
            nonunit_rank: Vec::new(),
            nonunits: Vec::new(),
            valuation: Vec::new(),
        };
        let powers: Vec<Ideal> = (1..=exp).map(|k| prime.ideal.pow(field, k)).collect();
        ring.valuation = (0..size as u32)
            .map(|i| {
                let z = ring.decode(i);
                powers.iter().take_while(|pk| pk.contains(field, z)).count() as u32
            })
            .collect();
        ring.units = ring.valuation.iter().map(|&v| v == 0).collect();
        let mut rank = 0u32;
        ring.nonunit_rank = ring
            .units
            .iter()
            .enumerate()
            .map(|(i, &u)| {
                if u {
                    u32::MAX
                } else {
                    ring.nonunits.push(i as u32);
                    rank += 1;
                    rank - 1
                }
            })
            .collect();
        let q = prime.norm() as u64;
        let phi = size as u64 / q * (q - 1);
        ring.inv = (0..size as u32)
            .map(|i| if ring.units[i as usize] { ring.pow(i, phi - 1) } else { u32::MAX })
            .collect();
        ring
    }

    pub fn prime(&self) -> &PrimeIdeal {
        &self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn size(&self) -> usize {
        self.units.len()
    }

    pub fn encode(&self, z: Zf) -> u32 {
        let r = self.modulus.reduce(z);
        (r.b * self.a + r.a) as u32
    }

    pub fn decode(&self, i: u32) -> Zf {
        let i = i as i64;
        Zf::new(i % self.a, i / self.a)
    }

    pub fn add(&self, x: u32, y: u32) -> u32 {
        self.encode(self.decode(x) + self.decode(y))
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.encode(self.decode(x) - self.decode(y))
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.encode(self.field.mul(self.decode(x), self.decode(y)))
    }

    pub fn neg(&self, x: u32) -> u32 {
        self.encode(-self.decode(x))
    }

    pub fn pow(&self, x: u32, mut e: u64) -> u32 {
        let mut r = self.encode(Zf::ONE);
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn is_unit(&self, x: u32) -> bool {
        self.units[x as usize]
    }

    pub fn inv(&self, x: u32) -> Option<u32> {
        let v = self.inv[x as usize];
        (v != u32::MAX).then_some(v)
    }

    /// `min(v_𝔭(x), e)`.
    pub fn valuation(&self, x: u32) -> u32 {
        self.valuation[x as usize]
    }

    pub fn nonunit_count(&self) -> usize {
        self.nonunits.len()
    }

    pub fn nonunit_rank(&self, x: u32) -> Option<u32> {
        let r = self.nonunit_rank[x as usize];
        (r != u32::MAX).then_some(r)
    }

    pub fn nonunit(&self, rank: u32) -> u32 {
        self.nonunits[rank as usize]
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        self.encode(Zf::ONE)
    }
}

/// `Z_F/N` with its CRT decomposition into local components.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    field: BaseField,
    modulus: Ideal,
    locals: Vec<LocalRing>,
    idempotents: Vec<Zf>,
}

impl ResidueRing {
    pub fn new(field: &BaseField, modulus: &Ideal) -> Result<Self> {
        let fac = factor_ideal(field, modulus)?;
        let locals: Vec<LocalRing> = fac.iter().map(|(p, e)| LocalRing::new(field, *p, *e)).collect();
        let mut idempotents = Vec::with_capacity(locals.len());
        for (j, loc) in locals.iter().enumerate() {
            let others = locals
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .fold(Ideal::unit(), |acc, (_, l)| acc.mul(field, l.modulus()));
            let b = *loc.modulus();
            let basis = others.basis(field);
            let range = b.norm();
            let mut found = None;
            'search: for i in 0..range.max(1) {
                for k in 0..if basis.len() > 1 { range } else { 1 } {
                    let mut x = field.scale(i, basis[0]);
                    if basis.len() > 1 {
                        x = x + field.scale(k, basis[1]);
                    }
                    if b.contains(field, x - Zf::ONE) {
                        found = Some(modulus.reduce(x));
                        break 'search;
                    }
                }
            }
            idempotents.push(found.ok_or_else(|| Error::Verification("CRT idempotent".into()))?);
        }
        Ok(ResidueRing { field: field.clone(), modulus: *modulus, locals, idempotents })
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn locals(&self) -> &[LocalRing] {
        &self.locals
    }

    pub fn size(&self) -> i64 {
        self.modulus.norm()
    }

    pub fn reduce(&self, z: Zf) -> Zf {
        self.modulus.reduce(z)
    }

    pub fn to_local(&self, z: Zf) -> Vec<u32> {
        self.locals.iter().map(|l| l.encode(z)).collect()
    }

    pub fn from_local(&self, parts: &[u32]) -> Zf {
        let mut acc = Zf::ZERO;
        for ((l, e), &x) in self.locals.iter().zip(&self.idempotents).zip(parts) {
            acc = acc + self.field.mul(*e, l.decode(x));
        }
        self.reduce(acc)
    }

    pub fn is_unit(&self, z: Zf) -> bool {
        self.locals.iter().all(|l| l.is_unit(l.encode(z)))
    }

    pub fn mul(&self, x: Zf, y: Zf) -> Zf {
        self.reduce(self.field.mul(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ideal::ideals_in_range;

    #[test]
    fn crt_round_trip() {
        for d in [0, 5] {
            let f = BaseField::new(d).unwrap();
            for n in ideals_in_range(&f, 1, 60) {
                let r = ResidueRing::new(&f, &n).unwrap();
                let (a, _, c) = n.hnf();
                let mut seen = std::collections::HashSet::new();
                for x in 0..a {
                    for y in 0..c {
                        let z = Zf::new(x, y);
                        let parts = r.to_local(z);
                        assert_eq!(r.from_local(&parts), z);
                        seen.insert(parts);
                    }
                }
                assert_eq!(seen.len() as i64, n.norm());
            }
        }
    }

    #[test]
    fn local_inverse() {
        let f = BaseField::new(5).unwrap();
        let p = crate::arith::ideal::primes_above(&f, 2)[0];
        let r = LocalRing::new(&f, p, 2);
        assert_eq!(r.size(), 16);
        assert_eq!(r.nonunit_count(), 4);
        for x in 0..16u32 {
            if let Some(y) = r.inv(x) {
                assert_eq!(r.mul(x, y), r.one());
            }
        }
    }
}
