//! The Brandt module `⊕ᵢ C[Γᵢ\P¹(Z_F/N)]` with Hecke operators `T_p`,
//! Atkin–Lehner operators, and the Eisenstein/cusp split.
//!
//! A basis vector is an orbit `(i, P)` of the unit group `Γᵢ` of the left
//! order of the `i`-th class acting on row vectors through the residue
//! splitting. Operators are integer matrices acting on column vectors of
//! orbit values: `(T f)(s) = Σ_t T[s][t]·f(t)`, so the constant function is
//! an eigenvector of every `T_p` with eigenvalue `Nm(p) + 1`.

use std::sync::Arc;

use crate::arith::ideal::factor_ideal;
use crate::arith::intmat::{self, IMat};
use crate::arith::{BaseField, Ideal, PrimeIdeal, Zf};
use crate::linalg::{QMat, Rat};
use crate::p1::{local_act, local_normalize, P1Index};
use crate::par;
use crate::quat::classes::{elements_of_norm, point_kernel};
use crate::quat::{IdealClassSet, LevelSplitting, QuaternionOrder, RightIdeal};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Hecke,
    AtkinLehner,
    /// Atkin–Lehner at a prime of the discriminant.
    Ramified,
}

#[derive(Clone, Debug)]
pub struct HeckeOperator {
    pub label: String,
    pub kind: OperatorKind,
    /// `p` for `T_p` and the ramified involution, `p^e` otherwise.
    pub ideal: Ideal,
    pub prime: PrimeIdeal,
    pub matrix: IMat,
}

impl HeckeOperator {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn to_qmat(&self) -> QMat {
        QMat::from_int(&self.matrix)
    }
}

#[derive(Clone, Debug)]
pub struct BrandtModule {
    classes: Arc<IdealClassSet>,
    level: Ideal,
    p1: P1Index,
    splitting: LevelSplitting,
    /// `(class, minimal position of the orbit)`
    basis: Vec<(usize, usize)>,
    stabilizers: Vec<usize>,
    orbit_sizes: Vec<usize>,
    /// `[class][position]` → basis index
    orbit_of: Vec<Vec<usize>>,
}

impl BrandtModule {
    /// Orbits of each `Γᵢ` on `P¹(Z_F/N)`. Class representatives must have
    /// norms coprime to `N`.
    pub fn new(classes: Arc<IdealClassSet>, level: &Ideal) -> Result<Self> {
        let order = classes.order();
        let f = order.field();
        let splitting = LevelSplitting::new(order, level)?;
        let p1 = P1Index::new(f, level)?;
        let mut basis = Vec::new();
        let mut stabilizers = Vec::new();
        let mut orbit_sizes = Vec::new();
        let mut orbit_of = Vec::with_capacity(classes.len());
        for (i, c) in classes.classes().iter().enumerate() {
            if !Ideal::principal(f, c.ideal.norm)?.is_coprime(f, level) {
                return Err(Error::Precondition(format!(
                    "class {i} has norm {} which is not coprime to the level",
                    c.ideal.norm
                )));
            }
            let images: Vec<_> = c.units.iter().map(|u| splitting.images(u)).collect();
            let perms: Vec<Vec<usize>> = images
                .iter()
                .map(|m| {
                    (0..p1.len())
                        .map(|pos| {
                            p1.act_local(pos, m)
                                .ok_or_else(|| Error::Verification("unit is not invertible modulo the level".into()))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            let mut of = vec![usize::MAX; p1.len()];
            for start in 0..p1.len() {
                if of[start] != usize::MAX {
                    continue;
                }
                let id = basis.len();
                of[start] = id;
                let mut stack = vec![start];
                let mut size = 1;
                while let Some(x) = stack.pop() {
                    for perm in &perms {
                        let y = perm[x];
                        if of[y] == usize::MAX {
                            of[y] = id;
                            size += 1;
                            stack.push(y);
                        }
                    }
                }
                let units = c.unit_count();
                if units % size != 0 {
                    return Err(Error::Verification(format!("orbit of size {size} under a group of order {units}")));
                }
                basis.push((i, start));
                stabilizers.push(units / size);
                orbit_sizes.push(size);
            }
            orbit_of.push(of);
        }
        Ok(BrandtModule { classes, level: *level, p1, splitting, basis, stabilizers, orbit_sizes, orbit_of })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn level(&self) -> &Ideal {
        &self.level
    }

    pub fn field(&self) -> &BaseField {
        self.classes.order().field()
    }

    pub fn order(&self) -> &QuaternionOrder {
        self.classes.order()
    }

    pub fn classes(&self) -> &IdealClassSet {
        &self.classes
    }

    pub fn p1(&self) -> &P1Index {
        &self.p1
    }

    pub fn splitting(&self) -> &LevelSplitting {
        &self.splitting
    }

    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn stabilizers(&self) -> &[usize] {
        &self.stabilizers
    }

    pub fn orbit_sizes(&self) -> &[usize] {
        &self.orbit_sizes
    }

    pub fn orbit_of(&self, class: usize, pos: usize) -> usize {
        self.orbit_of[class][pos]
    }

    fn normalized(&self, x: Zf) -> Zf {
        self.field().totally_positive_associate(x)
    }

    /// `T_p` for `p` coprime to `N·disc`. Each source orbit must reach
    /// exactly `Nm(p) + 1` neighbors; anything else is an arithmetic bug
    /// and is reported as an error.
    pub fn hecke_operator(&self, p: &PrimeIdeal) -> Result<HeckeOperator> {
        let f = self.field();
        let order = self.order();
        if !p.ideal.is_coprime(f, &self.level) || p.ideal.contains_ideal(f, order.discriminant()) {
            return Err(Error::Precondition(format!("T_{} needs a prime coprime to the level and discriminant", p.label())));
        }
        let pi = p.ideal.totally_positive_generator(f);
        let h = self.classes.len();
        let n = self.dim();
        let blocks: Vec<Result<Vec<(usize, usize, i64)>>> = par::map_range(h * h, |t| {
            let (i, k) = (t / h, t % h);
            let (ci, ck) = (self.classes.class(i), self.classes.class(k));
            let nu = self.normalized(f.mul(pi, f.mul(ci.ideal.norm, ck.ideal.norm)));
            let pair = self.classes.pair(i, k);
            let alphas = elements_of_norm(order, &pair.basis, &pair.lattice, nu);
            let images: Vec<_> = alphas.iter().map(|a| self.splitting.images(a)).collect();
            let mut counts = std::collections::BTreeMap::new();
            for (s, &(_, pos)) in self.basis.iter().enumerate().filter(|(_, b)| b.0 == i) {
                for m in &images {
                    let q = self
                        .p1
                        .act_local(pos, m)
                        .ok_or_else(|| Error::Verification("Hecke element is not invertible modulo the level".into()))?;
                    *counts.entry((s, self.orbit_of[k][q])).or_insert(0i64) += 1;
                }
            }
            let g = ck.unit_count() as i64;
            counts
                .into_iter()
                .map(|((s, t), c)| {
                    if c % g == 0 {
                        Ok((s, t, c / g))
                    } else {
                        Err(Error::Enumeration(format!("count {c} is not a multiple of |Γ_{k}| = {g}")))
                    }
                })
                .collect()
        });
        let mut matrix = vec![vec![0i64; n]; n];
        for b in blocks {
            for (s, t, c) in b? {
                matrix[s][t] += c;
            }
        }
        let degree = p.norm() + 1;
        for (s, row) in matrix.iter().enumerate() {
            let sum: i64 = row.iter().sum();
            if sum != degree {
                return Err(Error::Enumeration(format!(
                    "T_{} reaches {sum} neighbors from basis vector {s}, expected {degree}",
                    p.label()
                )));
            }
        }
        Ok(HeckeOperator {
            label: format!("T_{}", p.label()),
            kind: OperatorKind::Hecke,
            ideal: p.ideal,
            prime: *p,
            matrix,
        })
    }

    /// Hecke operators for several primes, computed concurrently.
    pub fn hecke_operators(&self, primes: &[PrimeIdeal]) -> Result<Vec<HeckeOperator>> {
        par::map(primes, |p| self.hecke_operator(p)).into_iter().collect()
    }

    /// Atkin–Lehner involution `W_{p^e}` for `p^e ∥ N`.
    ///
    /// For a source `(i, P)` let `J = {x ∈ I_i : P_p·s(x) ≡ 0 mod p^e}` and
    /// write `J = (α/n_k)·I_k`. The target is `(k, P')` with `P'_v = P_v·s(α)`
    /// away from `p` and `P'_p = Q·s(α)` for any `Q` completing `P_p` to a
    /// basis.
    pub fn atkin_lehner(&self, p: &PrimeIdeal, e: u32) -> Result<HeckeOperator> {
        let f = self.field();
        let order = self.order();
        let j = self
            .splitting
            .locals()
            .iter()
            .position(|s| s.ring().prime() == p && s.ring().exponent() == e)
            .ok_or_else(|| Error::Precondition(format!("{}^{e} does not exactly divide the level", p.label())))?;
        let local = &self.splitting.locals()[j];
        let pi_e = f.pow(p.ideal.totally_positive_generator(f), e);
        let locals = self.p1.locals();
        let n = self.dim();
        let targets: Vec<Result<usize>> = par::map_range(n, |s| {
            let (i, pos) = self.basis[s];
            let ci = self.classes.class(i);
            let lp = self.p1.local_positions(pos)[j];
            let rows = point_kernel(order, local, &ci.ideal.basis, lp);
            let ideal = RightIdeal { basis: rows, norm: self.normalized(f.mul(pi_e, ci.ideal.norm)) };
            let (k, alpha) = self.classes.identify(&ideal)?;
            let images = self.splitting.images(&alpha);
            let mut tuple = Vec::with_capacity(locals.len());
            for (v, (l, m)) in locals.iter().zip(&images).enumerate() {
                let here = self.p1.local_positions(pos)[v];
                let q = if v == j {
                    let (a, b) = if (here as usize) < l.size() { (0, l.one()) } else { (l.one(), 0) };
                    let x = l.add(l.mul(a, m[0]), l.mul(b, m[2]));
                    let y = l.add(l.mul(a, m[1]), l.mul(b, m[3]));
                    local_normalize(l, x, y)
                } else {
                    local_act(l, here, m)
                };
                tuple.push(q.ok_or_else(|| Error::Verification("Atkin-Lehner image is not a point".into()))?);
            }
            Ok(self.orbit_of[k][self.p1.position_of_local(&tuple)])
        });
        let label = if e == 1 { format!("W_{}", p.label()) } else { format!("W_{}^{e}", p.label()) };
        let ideal = p.ideal.pow(f, e);
        self.permutation_operator(label, OperatorKind::AtkinLehner, ideal, *p, targets)
    }

    /// The involution from the two-sided ideal over a prime `p` of the
    /// discriminant: `I_i·𝔓 = (α/n_k)·I_k` sends `(i, P)` to `(k, P·s(α))`.
    pub fn atkin_lehner_ramified(&self, p: &PrimeIdeal) -> Result<HeckeOperator> {
        let f = self.field();
        let order = self.order();
        if !p.ideal.contains_ideal(f, order.discriminant()) {
            return Err(Error::Precondition(format!("{} does not divide the discriminant", p.label())));
        }
        let two_sided = two_sided_prime(order, p);
        let pi = p.ideal.totally_positive_generator(f);
        let n = self.dim();
        let targets: Vec<Result<usize>> = par::map_range(n, |s| {
            let (i, pos) = self.basis[s];
            let ci = self.classes.class(i);
            let rows = order.product(&ci.ideal.basis, &two_sided);
            let ideal = RightIdeal { basis: rows, norm: self.normalized(f.mul(pi, ci.ideal.norm)) };
            let (k, alpha) = self.classes.identify(&ideal)?;
            let q = self
                .p1
                .act_local(pos, &self.splitting.images(&alpha))
                .ok_or_else(|| Error::Verification("ramified involution image is not a point".into()))?;
            Ok(self.orbit_of[k][q])
        });
        self.permutation_operator(format!("W_{}", p.label()), OperatorKind::Ramified, p.ideal, *p, targets)
    }

    fn permutation_operator(
        &self,
        label: String,
        kind: OperatorKind,
        ideal: Ideal,
        prime: PrimeIdeal,
        targets: Vec<Result<usize>>,
    ) -> Result<HeckeOperator> {
        let n = self.dim();
        let targets: Vec<usize> = targets.into_iter().collect::<Result<_>>()?;
        for (s, &t) in targets.iter().enumerate() {
            if targets[t] != s {
                return Err(Error::Verification(format!("{label} is not an involution on basis vector {s}")));
            }
        }
        let mut matrix = vec![vec![0i64; n]; n];
        for (s, &t) in targets.iter().enumerate() {
            matrix[s][t] = 1;
        }
        Ok(HeckeOperator { label, kind, ideal, prime, matrix })
    }

    /// `T·diag(stab)` is symmetric.
    pub fn is_self_adjoint(&self, m: &IMat) -> bool {
        let n = self.dim();
        let w = &self.stabilizers;
        (0..n).all(|s| (0..n).all(|t| m[s][t] * w[t] as i64 == m[t][s] * w[s] as i64))
    }

    /// Primes coprime to `N·disc`, in order, starting from the smallest.
    pub fn good_primes(&self, count: usize) -> Vec<PrimeIdeal> {
        let f = self.field();
        let bad = self.level.mul(f, self.order().discriminant());
        let mut bound = 16;
        loop {
            let ps: Vec<PrimeIdeal> = crate::arith::ideal::primes_up_to(f, bound)
                .into_iter()
                .filter(|p| p.ideal.is_coprime(f, &bad))
                .take(count)
                .collect();
            if ps.len() == count {
                return ps;
            }
            bound *= 2;
        }
    }

    /// Prime powers exactly dividing the level.
    pub fn level_factors(&self) -> Result<Vec<(PrimeIdeal, u32)>> {
        factor_ideal(self.field(), &self.level)
    }

    /// Eisenstein subspace `∩ ker(T_p − (Nm(p)+1))` and the induced action on
    /// its complement, orthogonal for the stabilizer-weighted pairing.
    pub fn eisenstein_and_cusp(&self, tests: &[HeckeOperator]) -> Result<CuspSplit> {
        let hecke: Vec<&HeckeOperator> = tests.iter().filter(|t| t.kind == OperatorKind::Hecke).collect();
        if hecke.len() < 3 {
            return Err(Error::Insufficient(format!("need at least 3 test primes, got {}", hecke.len())));
        }
        let n = self.dim();
        let mut stacked: Vec<Vec<Rat>> = Vec::new();
        for t in &hecke {
            let shift = Rat::from_integer((t.prime.norm() + 1).into());
            let m = t.to_qmat().sub(&QMat::identity(n).scale(&shift));
            stacked.extend(m.rows().iter().cloned());
        }
        let eis = QMat::from_rows(stacked, n).kernel();
        let ones = vec![Rat::from_integer(1.into()); n];
        if !eis.contains(&ones) {
            return Err(Error::Verification("constant function is not Eisenstein".into()));
        }
        // complement: {x : eᵀ·D·x = 0 for e ∈ Eis} with D = diag(1/stab)
        let weighted: Vec<Vec<Rat>> = eis
            .rows()
            .iter()
            .map(|e| {
                e.iter()
                    .zip(&self.stabilizers)
                    .map(|(x, &w)| x / Rat::from_integer((w as i64).into()))
                    .collect()
            })
            .collect();
        let cusp = QMat::from_rows(weighted, n).kernel();
        Ok(CuspSplit { eisenstein: eis, cusp })
    }
}

/// The Eisenstein subspace and a basis of its weighted complement, both as
/// row bases of subspaces of `Q^dim`.
#[derive(Clone, Debug)]
pub struct CuspSplit {
    pub eisenstein: QMat,
    pub cusp: QMat,
}

impl CuspSplit {
    pub fn cusp_dim(&self) -> usize {
        self.cusp.nrows()
    }

    pub fn eisenstein_dim(&self) -> usize {
        self.eisenstein.nrows()
    }

    /// Matrix of `op` restricted to the cusp part, in the basis `cusp`.
    pub fn restrict(&self, op: &HeckeOperator) -> Result<QMat> {
        op.to_qmat().restrict_to(&self.cusp)
    }
}

/// `{x ∈ O : trd(x·ȳ) ∈ p for all y ∈ O}`, the two-sided ideal of `O` over
/// a ramified prime `p`.
pub fn two_sided_prime(order: &QuaternionOrder, p: &PrimeIdeal) -> IMat {
    let f = order.field();
    let dim = order.dim();
    let n = f.degree();
    let flat = |z: Zf| if n == 1 { vec![z.a] } else { vec![z.a, z.b] };
    let unit = |r: usize| -> Vec<i64> { (0..dim).map(|c| i64::from(c == r)).collect() };
    let rows: Vec<Vec<i64>> = (0..dim)
        .map(|r| (0..dim).flat_map(|s| flat(order.bilinear(&unit(r), &unit(s)))).collect())
        .collect();
    let pb = p.ideal.basis(f);
    let mut modulus = Vec::new();
    for s in 0..dim {
        for g in &pb {
            let mut v = vec![0i64; dim * n];
            v[s * n..(s + 1) * n].copy_from_slice(&flat(*g));
            modulus.push(v);
        }
    }
    intmat::hnf(&intmat::kernel_mod(&rows, &modulus), dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ideal::primes_above;
    use crate::linalg::{charpoly, IntPoly};
    use crate::quat::config::{load_algebra_config, pizer_config, ICOSIAN};

    fn module(d: i64, n: i64) -> BrandtModule {
        let q = BaseField::rationals();
        let (_, o) = load_algebra_config(&q, &pizer_config(d).unwrap()).unwrap();
        let classes = Arc::new(IdealClassSet::compute(&o, n).unwrap());
        BrandtModule::new(classes, &Ideal::rational(&q, n)).unwrap()
    }

    fn prime(p: i64) -> PrimeIdeal {
        primes_above(&BaseField::rationals(), p)[0]
    }

    fn commute(a: &HeckeOperator, b: &HeckeOperator) -> bool {
        intmat::mat_mul(&a.matrix, &b.matrix) == intmat::mat_mul(&b.matrix, &a.matrix)
    }

    #[test]
    fn level_one_eleven() {
        let m = module(11, 1);
        assert_eq!(m.dim(), 2);
        let t2 = m.hecke_operator(&prime(2)).unwrap();
        let t3 = m.hecke_operator(&prime(3)).unwrap();
        assert_eq!(charpoly(&t2.matrix).unwrap(), IntPoly::from_i64(&[-6, -1, 1]));
        assert_eq!(charpoly(&t3.matrix).unwrap(), IntPoly::from_i64(&[-4, -3, 1]));
        assert!(m.is_self_adjoint(&t2.matrix) && m.is_self_adjoint(&t3.matrix));
        assert!(commute(&t2, &t3));
        let w = m.atkin_lehner_ramified(&prime(11)).unwrap();
        assert!(commute(&w, &t2));
        let tests = m.hecke_operators(&m.good_primes(3)).unwrap();
        let split = m.eisenstein_and_cusp(&tests).unwrap();
        assert_eq!((split.eisenstein_dim(), split.cusp_dim()), (1, 1));
    }

    #[test]
    fn small_levels() {
        assert_eq!(module(2, 3).dim(), 1);
        let m = module(11, 2);
        assert_eq!(m.dim(), 3);
        let tests = m.hecke_operators(&m.good_primes(3)).unwrap();
        for t in &tests {
            assert!(m.is_self_adjoint(&t.matrix), "{}", t.label);
        }
        assert_eq!(m.eisenstein_and_cusp(&tests).unwrap().cusp_dim(), 2);
        let m = module(2, 3);
        let tests = m.hecke_operators(&m.good_primes(3)).unwrap();
        assert_eq!(m.eisenstein_and_cusp(&tests).unwrap().cusp_dim(), 0);
    }

    #[test]
    fn atkin_lehner_at_level_three() {
        let m = module(11, 3);
        let w = m.atkin_lehner(&prime(3), 1).unwrap();
        for p in [2, 5, 7] {
            let t = m.hecke_operator(&prime(p)).unwrap();
            assert!(commute(&w, &t), "W_3 and T_{p}");
        }
        assert!(m.atkin_lehner(&prime(3), 2).is_err());
    }

    #[test]
    fn icosian_level_one() {
        let f = BaseField::new(5).unwrap();
        let (_, o) = load_algebra_config(&f, ICOSIAN).unwrap();
        let classes = Arc::new(IdealClassSet::compute(&o, 1).unwrap());
        let m = BrandtModule::new(classes, &Ideal::unit()).unwrap();
        assert_eq!(m.dim(), 1);
        let tests = m.hecke_operators(&m.good_primes(3)).unwrap();
        assert_eq!(m.eisenstein_and_cusp(&tests).unwrap().cusp_dim(), 0);
    }
}
