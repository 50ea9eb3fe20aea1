//! Explicit isomorphisms `O/𝔭^e O → M₂(Z_F/𝔭^e)` for `𝔭` not dividing the
//! discriminant, built from a rank-one idempotent and matrix units.

use std::collections::HashMap;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::ideal::factor_ideal;
use crate::arith::intmat::IMat;
use crate::arith::{Ideal, LocalRing, PrimeIdeal, Zf};
use crate::p1::LocalMat;
use crate::quat::order::QuaternionOrder;
use crate::{Error, Result};

const ATTEMPTS: usize = 2000;

#[derive(Clone, Debug)]
pub struct LocalSplitting {
    ring: LocalRing,
    /// characteristic-power integer killing the ring, for reducing coordinates
    char_mod: i64,
    images: Vec<LocalMat>,
}

/// Reduction of O-coordinates modulo a full-rank upper-triangular HNF.
fn reduce(h: &IMat, v: &mut [i64]) {
    let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for (i, row) in h.iter().enumerate() {
        let q = Integer::div_floor(&w[i], &(row[i] as i128));
        if q != 0 {
            for (x, &r) in w.iter_mut().zip(row) {
                *x -= q * r as i128;
            }
        }
    }
    for (x, y) in v.iter_mut().zip(w) {
        *x = i64::try_from(y).expect("reduced coordinate exceeds i64");
    }
}

fn sub(x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

impl LocalSplitting {
    pub fn new(order: &QuaternionOrder, prime: PrimeIdeal, exp: u32) -> Result<Self> {
        let field = order.field();
        if prime.ideal.contains_ideal(field, order.discriminant()) {
            return Err(Error::Splitting(format!("{} divides the discriminant", prime.label())));
        }
        let ring = LocalRing::new(field, prime, exp);
        let resid = LocalRing::new(field, prime, 1);
        let h = order.ideal_times_order(ring.modulus());
        let hp = order.ideal_times_order(&prime.ideal);
        let dim = order.dim();
        let one = order.one().to_vec();
        let red = |v: Vec<i64>| {
            let mut v = v;
            reduce(&h, &mut v);
            v
        };
        let is_zero_mod_p = |v: &[i64]| {
            let mut w = v.to_vec();
            reduce(&hp, &mut w);
            w.iter().all(|&c| c == 0)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ prime.norm() as u64);
        let random = |rng: &mut ChaCha8Rng| -> Vec<i64> { (0..dim).map(|_| rng.gen_range(-4..=4)).collect() };
        let quadratic_roots = |t: Zf, n: Zf| -> Vec<u32> {
            let (t, n) = (resid.encode(t), resid.encode(n));
            (0..resid.size() as u32)
                .filter(|&r| resid.add(resid.sub(resid.mul(r, r), resid.mul(t, r)), n) == 0)
                .collect()
        };
        // rank-one idempotent
        let mut idem = None;
        for _ in 0..ATTEMPTS {
            let x = random(&mut rng);
            let (t, n) = (order.trd(&x), order.nrd(&x));
            let roots = quadratic_roots(t, n);
            if roots.len() != 2 {
                continue;
            }
            let lift = |r0: u32| {
                let (t, n) = (ring.encode(t), ring.encode(n));
                let mut r = ring.encode(resid.decode(r0));
                for _ in 0..exp {
                    let f = ring.add(ring.sub(ring.mul(r, r), ring.mul(t, r)), n);
                    let df = ring.sub(ring.add(r, r), t);
                    r = ring.sub(r, ring.mul(f, ring.inv(df).expect("simple root")));
                }
                r
            };
            let (r1, r2) = (lift(roots[0]), lift(roots[1]));
            let c = ring.inv(ring.sub(r1, r2)).expect("distinct roots");
            let shifted = sub(&x, &order.scalar(ring.decode(r2)));
            let e = red(order.scale(ring.decode(c), &shifted));
            let sq = red(order.mul(&e, &e));
            if sq == e {
                idem = Some(e);
                break;
            }
        }
        let e11 = idem.ok_or_else(|| Error::Splitting("no split element found".into()))?;
        let e22 = red(sub(&one, &e11));
        let mut table: HashMap<Vec<i64>, u32> = HashMap::with_capacity(ring.size());
        for c in 0..ring.size() as u32 {
            table.insert(red(order.scale(ring.decode(c), &e11)), c);
        }
        if table.len() != ring.size() {
            return Err(Error::Splitting("idempotent is not rank one".into()));
        }
        let mut units = None;
        for _ in 0..ATTEMPTS {
            let y = random(&mut rng);
            let e12 = red(order.mul(&order.mul(&e11, &y), &e22));
            if is_zero_mod_p(&e12) {
                continue;
            }
            let z = random(&mut rng);
            let f = red(order.mul(&order.mul(&e22, &z), &e11));
            let Some(&c) = table.get(&red(order.mul(&e12, &f))) else { continue };
            let Some(ci) = ring.inv(c) else { continue };
            let e21 = red(order.scale(ring.decode(ci), &f));
            units = Some((e12, e21));
            break;
        }
        let (e12, e21) = units.ok_or_else(|| Error::Splitting("no matrix units found".into()))?;
        let coeff = |v: Vec<i64>| -> Result<u32> {
            table.get(&red(v)).copied().ok_or_else(|| Error::Splitting("corner element is not scalar".into()))
        };
        let mut images = Vec::with_capacity(dim);
        for r in 0..dim {
            let mut a = vec![0i64; dim];
            a[r] = 1;
            let ea = order.mul(&e11, &a);
            let fa = order.mul(&e12, &a);
            images.push([
                coeff(order.mul(&ea, &e11))?,
                coeff(order.mul(&ea, &e21))?,
                coeff(order.mul(&fa, &e11))?,
                coeff(order.mul(&fa, &e21))?,
            ]);
        }
        let (a, _, _) = ring.modulus().hnf();
        let s = LocalSplitting { ring, char_mod: a, images };
        s.verify(order)?;
        Ok(s)
    }

    fn verify(&self, order: &QuaternionOrder) -> Result<()> {
        let dim = order.dim();
        let r = &self.ring;
        if self.image(order.one()) != [r.one(), 0, 0, r.one()] {
            return Err(Error::Splitting("1 does not map to the identity".into()));
        }
        for i in 0..dim {
            let mut x = vec![0i64; dim];
            x[i] = 1;
            if self.det(&self.images[i]) != r.encode(order.nrd(&x)) {
                return Err(Error::Splitting("determinant differs from reduced norm".into()));
            }
            for j in 0..dim {
                let mut y = vec![0i64; dim];
                y[j] = 1;
                let lhs = self.image(&order.mul(&x, &y));
                let rhs = self.mat_mul(&self.images[i], &self.images[j]);
                if lhs != rhs {
                    return Err(Error::Splitting("map is not multiplicative".into()));
                }
            }
        }
        // surjectivity: images span M₂ over the residue field
        let k = LocalRing::new(order.field(), *r.prime(), 1);
        let rows: Vec<Vec<u32>> = self
            .images
            .iter()
            .map(|m| m.iter().map(|&x| k.encode(r.decode(x))).collect())
            .collect();
        if rank_over_field(&k, rows) != 4 {
            return Err(Error::Splitting("image does not generate M2".into()));
        }
        Ok(())
    }

    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }

    pub fn det(&self, m: &LocalMat) -> u32 {
        let r = &self.ring;
        r.sub(r.mul(m[0], m[3]), r.mul(m[1], m[2]))
    }

    pub fn mat_mul(&self, x: &LocalMat, y: &LocalMat) -> LocalMat {
        let r = &self.ring;
        let dot = |a: u32, b: u32, c: u32, d: u32| r.add(r.mul(a, b), r.mul(c, d));
        [
            dot(x[0], y[0], x[1], y[2]),
            dot(x[0], y[1], x[1], y[3]),
            dot(x[2], y[0], x[3], y[2]),
            dot(x[2], y[1], x[3], y[3]),
        ]
    }

    /// Image of an element given by O-coordinates.
    pub fn image(&self, x: &[i64]) -> LocalMat {
        let r = &self.ring;
        let mut out = [0u32; 4];
        for (&c, img) in x.iter().zip(&self.images) {
            let c = c.rem_euclid(self.char_mod);
            if c == 0 {
                continue;
            }
            let c = r.encode(Zf::int(c));
            for (o, &m) in out.iter_mut().zip(img) {
                *o = r.add(*o, r.mul(c, m));
            }
        }
        out
    }

    /// The same map reduced to a smaller exponent.
    pub fn reduced_to(&self, order: &QuaternionOrder, exp: u32) -> LocalSplitting {
        let ring = LocalRing::new(order.field(), *self.ring.prime(), exp);
        let images = self
            .images
            .iter()
            .map(|m| m.map(|x| ring.encode(self.ring.decode(x))))
            .collect();
        let (a, _, _) = ring.modulus().hnf();
        LocalSplitting { ring, char_mod: a, images }
    }
}

fn rank_over_field(k: &LocalRing, mut rows: Vec<Vec<u32>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, p);
        let inv = k.inv(rows[rank][c]).expect("field");
        let pivot: Vec<u32> = rows[rank].iter().map(|&x| k.mul(x, inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = row[c];
                for (x, &pv) in row.iter_mut().zip(&pivot) {
                    *x = k.sub(*x, k.mul(f, pv));
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// Splittings at every prime power dividing a level, in the order of
/// `factor_ideal` (the same order as the local components of `P1Index`).
#[derive(Clone, Debug)]
pub struct LevelSplitting {
    level: Ideal,
    locals: Vec<LocalSplitting>,
}

impl LevelSplitting {
    pub fn new(order: &QuaternionOrder, level: &Ideal) -> Result<Self> {
        let field = order.field();
        if !level.is_coprime(field, order.discriminant()) {
            return Err(Error::LevelCollision);
        }
        let locals = factor_ideal(field, level)?
            .into_iter()
            .map(|(p, e)| LocalSplitting::new(order, p, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(LevelSplitting { level: *level, locals })
    }

    pub fn level(&self) -> &Ideal {
        &self.level
    }

    pub fn locals(&self) -> &[LocalSplitting] {
        &self.locals
    }

    pub fn images(&self, x: &[i64]) -> Vec<LocalMat> {
        self.locals.iter().map(|s| s.image(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ideal::primes_above;
    use crate::arith::BaseField;
    use crate::quat::config::{hurwitz_config, load_algebra_config, pizer_config, ICOSIAN};

    #[test]
    fn hurwitz_mod_three_and_nine() {
        let q = BaseField::rationals();
        let (_, o) = load_algebra_config(&q, &hurwitz_config()).unwrap();
        let p3 = primes_above(&q, 3)[0];
        LocalSplitting::new(&o, p3, 1).unwrap();
        LocalSplitting::new(&o, p3, 2).unwrap();
        let two = primes_above(&q, 2)[0];
        assert!(LocalSplitting::new(&o, two, 1).is_err());
    }

    #[test]
    fn level_splittings() {
        let q = BaseField::rationals();
        let (_, o) = load_algebra_config(&q, &pizer_config(11).unwrap()).unwrap();
        let s = LevelSplitting::new(&o, &Ideal::rational(&q, 60)).unwrap();
        assert_eq!(s.locals().len(), 3);
        let f = BaseField::new(5).unwrap();
        let (_, o) = load_algebra_config(&f, ICOSIAN).unwrap();
        for p in [2, 5, 11, 31] {
            for pr in primes_above(&f, p) {
                LocalSplitting::new(&o, pr, 2).unwrap();
            }
        }
    }
}
