//! Right ideals of a maximal order, their left orders and unit groups, and
//! the class set found by breadth-first search over `𝔮`-neighbors.
//!
//! Every lattice lives in O-coordinates. A left order `O_L(I) = I·Ī/n_I` is
//! rational there, so it is stored as the integer lattice `Nm(n_I)·O_L(I)`
//! together with the scale `Nm(n_I)`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::ideal::{primes_up_to, PrimeIdeal};
use crate::arith::intmat::{self, IMat};
use crate::arith::{GramLattice, Zf};
use crate::p1::{local_normalize, local_point};
use crate::par;
use crate::quat::order::QuaternionOrder;
use crate::quat::splitting::LocalSplitting;
use crate::{Error, Result};

/// Number of theta coefficients kept (`Tr nrd = 0..THETA_LEN`).
pub const THETA_LEN: usize = 16;
const MAX_DEPTH: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightIdeal {
    /// HNF rows in O-coordinates.
    pub basis: IMat,
    /// Totally positive generator of `nrd(I)`, of minimal trace.
    pub norm: Zf,
}

impl RightIdeal {
    pub fn unit(order: &QuaternionOrder) -> Self {
        let d = order.dim();
        let basis = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        RightIdeal { basis, norm: Zf::ONE }
    }

    pub fn conj_basis(&self, order: &QuaternionOrder) -> IMat {
        let rows: Vec<Vec<i64>> = self.basis.iter().map(|r| order.conj(r)).collect();
        intmat::hnf(&rows, order.dim())
    }

    /// `α·I` for `α ∈ O`.
    pub fn left_mul(&self, order: &QuaternionOrder, alpha: &[i64]) -> RightIdeal {
        let rows: Vec<Vec<i64>> = self.basis.iter().map(|r| order.mul(alpha, r)).collect();
        let f = order.field();
        RightIdeal {
            basis: intmat::hnf(&rows, order.dim()),
            norm: f.totally_positive_associate(f.mul(order.nrd(alpha), self.norm)),
        }
    }
}

/// Exact division of every entry of a lattice basis by `d`.
fn divide_rows(rows: &IMat, d: i64, what: &str) -> Result<IMat> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&x| if x % d == 0 { Ok(x / d) } else { Err(Error::Lattice(format!("{what}: not divisible by {d}"))) })
                .collect()
        })
        .collect()
}

/// Data attached to one class representative.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub ideal: RightIdeal,
    pub conj: IMat,
    /// `Nm(n_I)`
    pub left_scale: i64,
    /// rows of `Nm(n_I)·O_L(I)`
    pub left_order: IMat,
    pub left_gram: IMat,
    pub theta: Vec<u64>,
    /// `Γ = O_L(I)¹/±1`, each element scaled by `Nm(n_I)`
    pub units: Vec<Vec<i64>>,
    /// short `b ∈ I` and `I' = Ī·b/n_I`, with `nrd(b)/n_I`
    pub colon_elt: Vec<i64>,
    pub colon_ideal: IMat,
    pub colon_norm: Zf,
}

/// Left order of `I` as `(Nm(n_I), rows of Nm(n_I)·O_L(I), trace Gram)`.
pub fn left_order(order: &QuaternionOrder, ideal: &RightIdeal, conj: &IMat) -> Result<(i64, IMat, IMat)> {
    let f = order.field();
    let prod = order.product(&ideal.basis, conj);
    let adj = f.adjugate(ideal.norm);
    let scale = f.mul(ideal.norm, adj).a;
    let rows: Vec<Vec<i64>> = prod.iter().map(|r| order.scale(adj, r)).collect();
    let rows = intmat::hnf(&rows, order.dim());
    let gram = divide_rows(&order.sub_gram(&rows), scale * scale, "left order Gram")?;
    Ok((scale, rows, gram))
}

/// Representation numbers of the trace form by `Tr nrd = 0..len`.
pub fn theta_fingerprint(gram: &IMat, len: usize) -> Result<Vec<u64>> {
    let lat = GramLattice::new(gram.clone())?;
    let full = lat.representation_numbers(2 * len);
    Ok(full.into_iter().step_by(2).collect())
}

impl ClassData {
    pub fn new(order: &QuaternionOrder, ideal: RightIdeal) -> Result<Self> {
        let f = order.field();
        let conj = ideal.conj_basis(order);
        let (scale, left, gram) = left_order(order, &ideal, &conj)?;
        let theta = theta_fingerprint(&gram, THETA_LEN)?;
        let lat = GramLattice::new(gram.clone())?;
        let target = 2 * f.degree() as i64;
        let n2 = Zf::int(scale * scale);
        let units: Vec<Vec<i64>> = lat
            .short_vectors(target)
            .into_iter()
            .map(|v| intmat::vec_mat(&v, &left))
            .filter(|y| order.nrd(y) == n2)
            .collect();
        if units.is_empty() {
            return Err(Error::Verification("left order has no units".into()));
        }
        // colon shortcut
        let ilat = GramLattice::new(order.sub_gram(&ideal.basis))?;
        let (v, _) = ilat.shortest();
        let b = intmat::vec_mat(&v, &ideal.basis);
        let colon_norm = f
            .div_exact(order.nrd(&b), ideal.norm)
            .ok_or_else(|| Error::Lattice("nrd(b) not divisible by nrd(I)".into()))?;
        let adj = f.adjugate(ideal.norm);
        let rows: Vec<Vec<i64>> = conj.iter().map(|r| order.scale(adj, &order.mul(r, &b))).collect();
        let colon_ideal = intmat::hnf(&divide_rows(&rows, scale, "colon ideal")?, order.dim());
        Ok(ClassData {
            ideal,
            conj,
            left_scale: scale,
            left_order: left,
            left_gram: gram,
            theta,
            units,
            colon_elt: b,
            colon_ideal,
            colon_norm,
        })
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }
}

/// Searches the lattice with basis rows `rows` for an element of reduced
/// norm exactly `nu`.
pub fn find_element_of_norm(order: &QuaternionOrder, rows: &IMat, nu: Zf) -> Result<Option<Vec<i64>>> {
    let f = order.field();
    let lat = GramLattice::new(order.sub_gram(rows))?;
    let target = 2 * f.trace(nu);
    let mut found = None;
    lat.for_each_up_to(target, |v, val| {
        if val == target {
            let y = intmat::vec_mat(v, rows);
            if order.nrd(&y) == nu {
                found = Some(y);
                return false;
            }
        }
        true
    });
    Ok(found)
}

/// All elements (one of each `±α`) of reduced norm exactly `nu` in the
/// lattice with basis rows `rows` and Gram lattice `lat`.
pub fn elements_of_norm(order: &QuaternionOrder, rows: &IMat, lat: &GramLattice, nu: Zf) -> Vec<Vec<i64>> {
    let target = 2 * order.field().trace(nu);
    let mut out = Vec::new();
    lat.for_each_up_to(target, |v, val| {
        if val == target {
            let y = intmat::vec_mat(v, rows);
            if order.nrd(&y) == nu {
                out.push(y);
            }
        }
        true
    });
    out.sort();
    out
}

/// `I_i·Ī_k` with its Gram lattice.
#[derive(Clone, Debug)]
pub struct PairLattice {
    pub basis: IMat,
    pub lattice: GramLattice,
}

#[derive(Clone, Debug)]
pub struct IdealClassSet {
    order: QuaternionOrder,
    q: PrimeIdeal,
    classes: Vec<ClassData>,
    pairs: Vec<Vec<PairLattice>>,
}

/// Smallest prime ideal whose rational prime does not divide `avoid`.
pub fn neighbor_prime(order: &QuaternionOrder, avoid: i64) -> PrimeIdeal {
    let f = order.field();
    let avoid = avoid.abs().max(1) * order.discriminant().norm();
    let mut bound = 8;
    loop {
        if let Some(p) = primes_up_to(f, bound).into_iter().find(|p| avoid % p.p != 0) {
            return p;
        }
        bound *= 2;
    }
}

impl IdealClassSet {
    /// Class representatives by BFS over `𝔮`-neighbors, `𝔮` the smallest
    /// prime whose rational prime divides neither `avoid` nor the
    /// discriminant. Representatives then have norms coprime to `avoid`.
    pub fn compute(order: &QuaternionOrder, avoid: i64) -> Result<Self> {
        let q = neighbor_prime(order, avoid);
        let mut depth_cap = 6;
        loop {
            match Self::bfs(order, q, depth_cap)? {
                Some(classes) => {
                    let pairs = pair_lattices(order, &classes)?;
                    return Ok(IdealClassSet { order: order.clone(), q, classes, pairs });
                }
                None if depth_cap < MAX_DEPTH => depth_cap = (depth_cap * 2).min(MAX_DEPTH),
                None => return Err(Error::Enumeration("neighbor search did not close".into())),
            }
        }
    }

    /// BFS with one splitting modulo `𝔮^cap`; `None` when the search needs
    /// a deeper level.
    fn bfs(order: &QuaternionOrder, q: PrimeIdeal, cap: u32) -> Result<Option<Vec<ClassData>>> {
        let f = order.field();
        let top = LocalSplitting::new(order, q, cap)?;
        let mut classes = vec![ClassData::new(order, RightIdeal::unit(order))?];
        // positions in P¹(Z_F/𝔮^k) to examine at the current depth
        let mut frontier: Vec<u32> = (0..(q.norm() + 1) as u32).collect();
        for k in 1..=cap {
            if frontier.is_empty() {
                return Ok(Some(classes));
            }
            let split = top.reduced_to(order, k);
            let ring = split.ring();
            let norm = f.totally_positive_associate(f.pow(q.generator, k));
            let mut expand = Vec::new();
            for &pos in &frontier {
                let ideal = kernel_ideal(order, &split, pos, norm);
                let cand = ClassData::new(order, ideal)?;
                if !is_known(order, &classes, &cand)? {
                    classes.push(cand);
                    expand.push(pos);
                }
            }
            if expand.is_empty() {
                return Ok(Some(classes));
            }
            if k == cap {
                return Ok(None);
            }
            // lifts to depth k + 1 of the points that produced new classes
            let next = top.reduced_to(order, k + 1);
            let nr = next.ring();
            let pr = ring;
            let count = (nr.size() + nr.nonunit_count()) as u32;
            let wanted: std::collections::HashSet<u32> = expand.into_iter().collect();
            frontier = (0..count)
                .filter(|&p| {
                    let (a, b) = local_point(nr, p);
                    let down = local_normalize(pr, pr.encode(nr.decode(a)), pr.encode(nr.decode(b)));
                    down.is_some_and(|d| wanted.contains(&d))
                })
                .collect();
        }
        Ok(None)
    }

    pub fn order(&self) -> &QuaternionOrder {
        &self.order
    }

    pub fn neighbor_prime(&self) -> &PrimeIdeal {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ClassData] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &ClassData {
        &self.classes[i]
    }

    pub fn pair(&self, i: usize, k: usize) -> &PairLattice {
        &self.pairs[i][k]
    }

    /// `Σ 1/|Γ_i|`.
    pub fn mass(&self) -> BigRational {
        self.classes
            .iter()
            .fold(BigRational::zero(), |acc, c| acc + BigRational::new(1.into(), (c.unit_count() as i64).into()))
    }

    /// Class of a right ideal `J`: returns `k` and `α ∈ J·Ī_k` with
    /// `nrd(α)` the normalized generator of `n_J·n_k`, so that
    /// `J = (α/n_k)·I_k`.
    pub fn identify(&self, ideal: &RightIdeal) -> Result<(usize, Vec<i64>)> {
        let order = &self.order;
        let f = order.field();
        let conj = ideal.conj_basis(order);
        let (_, _, gram) = left_order(order, ideal, &conj)?;
        let theta = theta_fingerprint(&gram, THETA_LEN)?;
        for (k, c) in self.classes.iter().enumerate() {
            if c.theta != theta {
                continue;
            }
            let rows = order.product(&ideal.basis, &c.conj);
            let nu = f.totally_positive_associate(f.mul(ideal.norm, c.ideal.norm));
            if let Some(alpha) = find_element_of_norm(order, &rows, nu)? {
                return Ok((k, alpha));
            }
        }
        Err(Error::Verification("ideal matches no class representative".into()))
    }

    /// Whether two right ideals are isomorphic.
    pub fn isomorphic(order: &QuaternionOrder, a: &RightIdeal, b: &RightIdeal) -> Result<bool> {
        let ca = ClassData::new(order, a.clone())?;
        let cb = ClassData::new(order, b.clone())?;
        is_isomorphic_to(order, &ca, &cb)
    }
}

fn pair_lattices(order: &QuaternionOrder, classes: &[ClassData]) -> Result<Vec<Vec<PairLattice>>> {
    let h = classes.len();
    let flat: Vec<Result<PairLattice>> = par::map_range(h * h, |t| {
        let (i, k) = (t / h, t % h);
        let basis = order.product(&classes[i].ideal.basis, &classes[k].conj);
        let lattice = GramLattice::new(order.sub_gram(&basis))?;
        Ok(PairLattice { basis, lattice })
    });
    let mut out: Vec<Vec<PairLattice>> = Vec::with_capacity(h);
    let mut it = flat.into_iter();
    for _ in 0..h {
        out.push((0..h).map(|_| it.next().expect("h² entries")).collect::<Result<Vec<_>>>()?);
    }
    Ok(out)
}

/// `{x ∈ O : P·s(x) ≡ 0}` for the local point at `pos`.
fn kernel_ideal(order: &QuaternionOrder, split: &LocalSplitting, pos: u32, norm: Zf) -> RightIdeal {
    let dim = order.dim();
    let unit: IMat = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
    RightIdeal { basis: point_kernel(order, split, &unit, pos), norm }
}

/// HNF rows (O-coordinates) of `{x ∈ L : P·s(x) ≡ 0}` where `L` has basis
/// `rows` and `P` is the local point at `pos`.
pub fn point_kernel(order: &QuaternionOrder, split: &LocalSplitting, rows: &IMat, pos: u32) -> IMat {
    let ring = split.ring();
    let f = order.field();
    let (pa, pb) = local_point(ring, pos);
    let n = f.degree();
    let flat = |z: Zf| if n == 1 { vec![z.a] } else { vec![z.a, z.b] };
    let images: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            let m = split.image(r);
            let x = ring.add(ring.mul(pa, m[0]), ring.mul(pb, m[2]));
            let y = ring.add(ring.mul(pa, m[1]), ring.mul(pb, m[3]));
            let mut v = flat(ring.decode(x));
            v.extend(flat(ring.decode(y)));
            v
        })
        .collect();
    let ib = ring.modulus().basis(f);
    let mut modulus = Vec::new();
    for half in 0..2 {
        for g in &ib {
            let mut v = vec![0i64; 2 * n];
            v[half * n..(half + 1) * n].copy_from_slice(&flat(*g));
            modulus.push(v);
        }
    }
    let coeffs = intmat::kernel_mod(&images, &modulus);
    let out: Vec<Vec<i64>> = coeffs.iter().map(|c| intmat::vec_mat(c, rows)).collect();
    intmat::hnf(&out, order.dim())
}

fn is_known(order: &QuaternionOrder, classes: &[ClassData], cand: &ClassData) -> Result<bool> {
    for c in classes {
        if c.theta == cand.theta && is_isomorphic_to(order, cand, c)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `J ≅ I` iff `J·I'` holds an element of norm `n_J·nrd(b)/n_I`.
fn is_isomorphic_to(order: &QuaternionOrder, j: &ClassData, i: &ClassData) -> Result<bool> {
    if j.theta != i.theta {
        return Ok(false);
    }
    let f = order.field();
    let rows = order.product(&j.ideal.basis, &i.colon_ideal);
    let nu = f.totally_positive_associate(f.mul(j.ideal.norm, i.colon_norm));
    Ok(find_element_of_norm(order, &rows, nu)?.is_some())
}

/// Number of classes by left-order theta series, for diagnostics.
pub fn theta_multiset(set: &IdealClassSet) -> HashMap<Vec<u64>, usize> {
    let mut m = HashMap::new();
    for c in set.classes() {
        *m.entry(c.theta.clone()).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BaseField;
    use crate::quat::config::{hurwitz_config, lipschitz_config, load_algebra_config, pizer_config, ICOSIAN};

    #[test]
    fn unit_groups() {
        let q = BaseField::rationals();
        let (_, o) = load_algebra_config(&q, &hurwitz_config()).unwrap();
        let c = ClassData::new(&o, RightIdeal::unit(&o)).unwrap();
        assert_eq!(c.unit_count(), 12);
        assert_eq!(c.theta[0], 1);
        assert_eq!(c.theta[1], 24);
        let f = BaseField::new(5).unwrap();
        let (_, o) = load_algebra_config(&f, ICOSIAN).unwrap();
        let c = ClassData::new(&o, RightIdeal::unit(&o)).unwrap();
        assert_eq!(c.unit_count(), 60);
        let _ = lipschitz_config;
    }

    #[test]
    fn small_class_sets() {
        let q = BaseField::rationals();
        let (_, o) = load_algebra_config(&q, &hurwitz_config()).unwrap();
        assert_eq!(IdealClassSet::compute(&o, 1).unwrap().len(), 1);
        let (_, o) = load_algebra_config(&q, &pizer_config(11).unwrap()).unwrap();
        let set = IdealClassSet::compute(&o, 1).unwrap();
        let mut sizes: Vec<usize> = set.classes().iter().map(|c| c.unit_count()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 3]);
        let f = BaseField::new(5).unwrap();
        let (_, o) = load_algebra_config(&f, ICOSIAN).unwrap();
        assert_eq!(IdealClassSet::compute(&o, 1).unwrap().len(), 1);
    }
}
