//! The projective line `P¹(Z_F/N)`.
//!
//! A point is a tuple of local points, one per prime power dividing `N`.
//! Locally `[a:b]` is normalized to `[1:b']` when `a` is a unit and to
//! `[a':1]` with `a' ∈ 𝔭` otherwise. Local positions put the `[1:b']` first
//! (by the index of `b'`) and then the `[a':1]` by the rank of `a'` among
//! non-units. Global positions are grouped by the divisor `gcd(a, N)` in
//! ideal order, then by the tuple of local positions.

use crate::arith::{BaseField, Ideal, LocalRing, ResidueRing, Zf};
use crate::{Error, Result};

/// A `2×2` matrix over one local ring, entries as local indices, row-major.
pub type LocalMat = [u32; 4];

#[derive(Clone, Debug)]
pub struct P1Index {
    ring: ResidueRing,
    counts: Vec<usize>,
    /// mixed-radix code of a local-position tuple to global position
    table: Vec<u32>,
    /// global position to local-position tuple
    points: Vec<Vec<u32>>,
    divisors: Vec<Ideal>,
}

fn local_count(l: &LocalRing) -> usize {
    l.size() + l.nonunit_count()
}

/// Local position of the normalized form of `[a:b]`.
pub fn local_normalize(l: &LocalRing, a: u32, b: u32) -> Option<u32> {
    if let Some(ai) = l.inv(a) {
        Some(l.mul(b, ai))
    } else if let Some(bi) = l.inv(b) {
        let a1 = l.mul(a, bi);
        Some(l.size() as u32 + l.nonunit_rank(a1).expect("non-unit"))
    } else {
        None
    }
}

/// Normalized representative `(a, b)` at a local position.
pub fn local_point(l: &LocalRing, pos: u32) -> (u32, u32) {
    let s = l.size() as u32;
    if pos < s {
        (l.one(), pos)
    } else {
        (l.nonunit(pos - s), l.one())
    }
}

/// `[a:b]·m` for a row vector acted on from the right.
pub fn local_act(l: &LocalRing, pos: u32, m: &LocalMat) -> Option<u32> {
    let (a, b) = local_point(l, pos);
    let x = l.add(l.mul(a, m[0]), l.mul(b, m[2]));
    let y = l.add(l.mul(a, m[1]), l.mul(b, m[3]));
    local_normalize(l, x, y)
}

impl P1Index {
    pub fn new(field: &BaseField, level: &Ideal) -> Result<Self> {
        let ring = ResidueRing::new(field, level)?;
        let counts: Vec<usize> = ring.locals().iter().map(local_count).collect();
        let total: usize = counts.iter().product();
        let mut tuples: Vec<(Ideal, Vec<u32>)> = Vec::with_capacity(total);
        let mut cur = vec![0u32; counts.len()];
        for _ in 0..total {
            let mut div = Ideal::unit();
            for (l, &p) in ring.locals().iter().zip(&cur) {
                let v = if (p as usize) < l.size() { 0 } else { l.valuation(local_point(l, p).0) };
                if v > 0 {
                    div = div.mul(field, &l.prime().ideal.pow(field, v));
                }
            }
            tuples.push((div, cur.clone()));
            for (c, &n) in cur.iter_mut().zip(&counts) {
                *c += 1;
                if (*c as usize) < n {
                    break;
                }
                *c = 0;
            }
        }
        tuples.sort();
        let mut table = vec![0u32; total];
        let mut points = Vec::with_capacity(total);
        let mut divisors = Vec::with_capacity(total);
        for (g, (div, t)) in tuples.into_iter().enumerate() {
            table[code(&counts, &t)] = g as u32;
            points.push(t);
            divisors.push(div);
        }
        Ok(P1Index { ring, counts, table, points, divisors })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn locals(&self) -> &[LocalRing] {
        self.ring.locals()
    }

    pub fn local_positions(&self, pos: usize) -> &[u32] {
        &self.points[pos]
    }

    pub fn divisor(&self, pos: usize) -> &Ideal {
        &self.divisors[pos]
    }

    pub fn position_of_local(&self, t: &[u32]) -> usize {
        self.table[code(&self.counts, t)] as usize
    }

    /// Position of `[a:b]`; fails if `(a, b)` is not unimodular modulo `N`.
    pub fn normalize(&self, a: Zf, b: Zf) -> Result<usize> {
        let t = self
            .locals()
            .iter()
            .map(|l| local_normalize(l, l.encode(a), l.encode(b)))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::Precondition(format!("[{a}:{b}] is not a point of P1")))?;
        Ok(self.position_of_local(&t))
    }

    /// A global representative `(a, b)` of the point at `pos`.
    pub fn representative(&self, pos: usize) -> (Zf, Zf) {
        let (xs, ys): (Vec<u32>, Vec<u32>) =
            self.locals().iter().zip(&self.points[pos]).map(|(l, &p)| local_point(l, p)).unzip();
        (self.ring.from_local(&xs), self.ring.from_local(&ys))
    }

    /// Image of the point at `pos` under a tuple of local matrices.
    pub fn act_local(&self, pos: usize, mats: &[LocalMat]) -> Option<usize> {
        let t = self
            .locals()
            .iter()
            .zip(&self.points[pos])
            .zip(mats)
            .map(|((l, &p), m)| local_act(l, p, m))
            .collect::<Option<Vec<u32>>>()?;
        Some(self.position_of_local(&t))
    }

    /// Permutation induced by a matrix over `Z_F` with unit determinant
    /// modulo `N`, acting on row vectors from the right.
    pub fn gl2_action(&self, m: [Zf; 4]) -> Result<Vec<usize>> {
        let mats: Vec<LocalMat> = self
            .locals()
            .iter()
            .map(|l| [l.encode(m[0]), l.encode(m[1]), l.encode(m[2]), l.encode(m[3])])
            .collect();
        (0..self.len())
            .map(|i| {
                self.act_local(i, &mats)
                    .ok_or_else(|| Error::Precondition("matrix is not invertible modulo the level".into()))
            })
            .collect()
    }
}

fn code(counts: &[usize], t: &[u32]) -> usize {
    let mut c = 0usize;
    for (&n, &x) in counts.iter().zip(t).rev() {
        c = c * n + x as usize;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ideal::{factor_ideal, ideals_in_range};

    fn psi(field: &BaseField, n: &Ideal) -> usize {
        factor_ideal(field, n)
            .unwrap()
            .iter()
            .map(|(p, e)| {
                let q = p.norm() as usize;
                q.pow(*e) + q.pow(*e - 1)
            })
            .product()
    }

    #[test]
    fn sizes_match_index_formula() {
        for d in [0, 5, 8] {
            let f = BaseField::new(d).unwrap();
            for n in ideals_in_range(&f, 1, 80) {
                let p1 = P1Index::new(&f, &n).unwrap();
                assert_eq!(p1.len(), psi(&f, &n), "level {n}");
            }
        }
    }

    #[test]
    fn representatives_round_trip() {
        let f = BaseField::new(5).unwrap();
        for n in ideals_in_range(&f, 1, 50) {
            let p1 = P1Index::new(&f, &n).unwrap();
            for i in 0..p1.len() {
                let (a, b) = p1.representative(i);
                assert_eq!(p1.normalize(a, b).unwrap(), i);
            }
        }
    }

    #[test]
    fn ordering_over_q() {
        let f = BaseField::rationals();
        let p1 = P1Index::new(&f, &Ideal::rational(&f, 6)).unwrap();
        // coprime divisor block first, then 2, 3, 6
        let divs: Vec<i64> = (0..p1.len()).map(|i| p1.divisor(i).norm()).collect();
        assert_eq!(divs, vec![1, 1, 1, 1, 1, 1, 2, 2, 2, 3, 3, 6]);
        assert_eq!(p1.len(), 12);
    }

    #[test]
    fn action_is_a_permutation() {
        let f = BaseField::new(5).unwrap();
        let n = ideals_in_range(&f, 20, 20)[0];
        let p1 = P1Index::new(&f, &n).unwrap();
        let perm = p1.gl2_action([Zf::new(1, 1), Zf::new(2, 0), Zf::new(0, 1), Zf::new(1, 0)]).unwrap();
        let mut s = perm.clone();
        s.sort();
        assert_eq!(s, (0..p1.len()).collect::<Vec<_>>());
    }
}
