//! Splitting a space with a commuting operator family into Hecke-irreducible
//! constituents, eigensystems over the Hecke field, and the old/new split.

use std::collections::BTreeMap;

use crate::linalg::charpoly::charpoly_rational;
use crate::linalg::factor::factor;
use crate::linalg::numfield::{Elem, NumberField};
use crate::linalg::poly::IntPoly;
use crate::linalg::qmat::{rat, QMat, Rat};
use crate::{Error, Result};

/// Number of candidate primitive elements tried before giving up.
pub const PRIMITIVE_BUDGET: usize = 400;

/// A labeled operator on a fixed space, as a matrix on column vectors.
#[derive(Clone, Debug)]
pub struct LabeledOp {
    pub label: String,
    pub matrix: QMat,
}

impl LabeledOp {
    pub fn new(label: impl Into<String>, matrix: QMat) -> Self {
        LabeledOp { label: label.into(), matrix }
    }
}

/// One Hecke-irreducible block with its eigensystem.
#[derive(Clone, Debug)]
pub struct HeckeConstituent {
    /// minimal polynomial of the primitive element `θ`
    pub poly: IntPoly,
    /// row basis of the block inside the decomposed space
    pub block: QMat,
    /// `θ = Σ cⱼ·T_j` as `(label, c)`
    pub primitive: Vec<(String, i64)>,
    /// each operator as a polynomial in `θ` (power-basis coordinates)
    pub eigenvalues: BTreeMap<String, Elem>,
}

impl HeckeConstituent {
    pub fn dim(&self) -> usize {
        self.poly.degree()
    }

    pub fn field(&self) -> NumberField {
        NumberField::new(self.poly.clone())
    }
}

/// Deterministic candidate combinations: each operator alone, then
/// `T_i + c·T_j` for `c = 1, 2, …`, then three-term sums.
fn candidates(n: usize) -> Vec<Vec<(usize, i64)>> {
    let mut out: Vec<Vec<(usize, i64)>> = (0..n).map(|i| vec![(i, 1)]).collect();
    for c in [1i64, 2, -1, 3, -2, 5] {
        for i in 0..n {
            for j in i + 1..n {
                out.push(vec![(i, 1), (j, c)]);
            }
        }
    }
    for (a, b) in [(1i64, 1i64), (2, 3), (-1, 2), (3, -5)] {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    out.push(vec![(i, 1), (j, a), (k, b)]);
                }
            }
        }
    }
    out.truncate(PRIMITIVE_BUDGET);
    out
}

fn assert_commuting(ops: &[LabeledOp]) -> Result<()> {
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if !a.matrix.commutes_with(&b.matrix) {
                return Err(Error::Linalg(format!("{} and {} do not commute", a.label, b.label)));
            }
        }
    }
    Ok(())
}

/// `Σ dⱼ·Aⱼ`
fn combine(ops: &[LabeledOp], combo: &[(usize, i64)], n: usize) -> QMat {
    combo.iter().fold(QMat::zeros(n, n), |acc, &(i, c)| acc.add(&ops[i].matrix.scale(&rat(c))))
}

/// Decomposes `Q^n` under a commuting family into irreducible constituents
/// with multiplicity one.
pub fn decompose(ops: &[LabeledOp]) -> Result<Vec<HeckeConstituent>> {
    let n = ops.first().map_or(0, |o| o.matrix.nrows());
    if n == 0 {
        return Ok(Vec::new());
    }
    assert_commuting(ops)?;
    for combo in candidates(ops.len()) {
        let t = combine(ops, &combo, n);
        let chi = charpoly_rational(&t)?;
        if !chi.is_squarefree() {
            continue;
        }
        let primitive: Vec<(String, i64)> = combo.iter().map(|&(i, c)| (ops[i].label.clone(), c)).collect();
        let mut out = Vec::new();
        for (g, _) in factor(&chi)? {
            let block = t.eval_poly(&g.to_rat()).kernel();
            if block.nrows() != g.degree() {
                return Err(Error::Linalg(format!("block of {g} has dimension {}", block.nrows())));
            }
            out.push(eigensystem(ops, &t, block, g, primitive.clone())?);
        }
        return Ok(out);
    }
    let dump: Vec<String> = ops
        .iter()
        .map(|o| format!("{}: {}", o.label, charpoly_rational(&o.matrix).map(|p| p.to_string()).unwrap_or_default()))
        .collect();
    Err(Error::Linalg(format!("no primitive element within {PRIMITIVE_BUDGET} candidates; family {}", dump.join("; "))))
}

/// Expresses every operator on the block `ker g(t)` as a polynomial in `t`.
fn eigensystem(ops: &[LabeledOp], t: &QMat, block: QMat, g: IntPoly, primitive: Vec<(String, i64)>) -> Result<HeckeConstituent> {
    let d = g.degree();
    let tb = t.restrict_to(&block)?;
    if charpoly_rational(&tb)? != g {
        return Err(Error::Linalg("restricted primitive element has the wrong minimal polynomial".into()));
    }
    let mut powers = vec![QMat::identity(d)];
    for _ in 1..d {
        let next = powers.last().expect("nonempty").mul(&tb);
        powers.push(next);
    }
    let flat = |m: &QMat| -> Vec<Rat> { m.rows().iter().flatten().cloned().collect() };
    let basis = QMat::from_rows(powers.iter().map(flat).collect(), d * d);
    let mut eigenvalues = BTreeMap::new();
    for op in ops {
        let ob = op.matrix.restrict_to(&block)?;
        let coords = basis
            .coordinates(&flat(&ob))
            .ok_or_else(|| Error::Linalg(format!("{} is not a polynomial in the primitive element", op.label)))?;
        eigenvalues.insert(op.label.clone(), coords);
    }
    Ok(HeckeConstituent { poly: g, block, primitive, eigenvalues })
}

/// The old subspace and the operators induced on the new quotient.
#[derive(Clone, Debug)]
pub struct OldNew {
    pub old: QMat,
    pub new_ops: Vec<LabeledOp>,
}

impl OldNew {
    pub fn new_dim(&self) -> usize {
        self.new_ops.first().map_or(0, |o| o.matrix.nrows())
    }
}

/// Cuts the space down to the eigensystems of the lower levels: for integer
/// combinations `S` of the shared Hecke labels, keeps `⊕ ker g(S)` over the
/// irreducible factors `g` of the characteristic polynomial of `S | lower`,
/// until the dimension reaches `expected_old`; then passes to the quotient.
pub fn old_new_split(space: &[LabeledOp], lower: &[LabeledOp], dim: usize, expected_old: usize) -> Result<OldNew> {
    let lower_dim = lower.first().map_or(0, |o| o.matrix.nrows());
    let mut old = QMat::identity(dim);
    if lower_dim == 0 {
        old = QMat::zeros(0, dim);
    } else {
        let shared: Vec<(&QMat, &QMat)> = space
            .iter()
            .filter_map(|op| lower.iter().find(|l| l.label == op.label).map(|l| (&op.matrix, &l.matrix)))
            .collect();
        for k in 0..shared.len() + 2 {
            if old.nrows() == expected_old {
                break;
            }
            let mut here = QMat::zeros(dim, dim);
            let mut below = QMat::zeros(lower_dim, lower_dim);
            for (i, (h, b)) in shared.iter().enumerate() {
                let c = rat(1 + ((i as i64 + 1) * (2 * k as i64 + 1)) % 13);
                here = here.add(&h.scale(&c));
                below = below.add(&b.scale(&c));
            }
            // the candidate space stays invariant, so work on the restriction
            let local = if k == 0 { here } else { here.restrict_to(&old)? };
            let mut rows = Vec::new();
            for (g, _) in factor(&charpoly_rational(&below)?)? {
                rows.extend(local.eval_poly(&g.to_rat()).kernel().rows().iter().cloned());
            }
            old = QMat::from_rows(rows, old.nrows()).mul(&old);
        }
    }
    if old.nrows() != expected_old {
        return Err(Error::Linalg(format!(
            "old space has dimension {} after all shared operators, expected {expected_old}",
            old.nrows()
        )));
    }
    let new_ops = space
        .iter()
        .map(|op| Ok(LabeledOp::new(op.label.clone(), op.matrix.quotient_action(&old)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(OldNew { old, new_ops })
}

/// `a_T` as an element of the Hecke field of the constituent.
pub fn eigenvalue<'a>(c: &'a HeckeConstituent, label: &str) -> Option<&'a Elem> {
    c.eigenvalues.get(label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(m: &[&[i64]]) -> QMat {
        QMat::from_int(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn diagonal_family() {
        let ops = vec![LabeledOp::new("T", q(&[&[1, 0], &[0, 2]]))];
        let cs = decompose(&ops).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].poly, IntPoly::linear(2));
        assert_eq!(cs[1].poly, IntPoly::linear(1));
        assert_eq!(cs[0].eigenvalues["T"], vec![rat(2)]);
    }

    #[test]
    fn swap_splits_rationally() {
        let ops = vec![LabeledOp::new("T", q(&[&[0, 1], &[1, 0]]))];
        let cs = decompose(&ops).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.dim() == 1));
    }

    #[test]
    fn quadratic_constituent() {
        // companion matrix of x² − x − 1 and its square
        let t = q(&[&[0, 1], &[1, 1]]);
        let ops = vec![LabeledOp::new("A", t.clone()), LabeledOp::new("B", t.mul(&t))];
        let cs = decompose(&ops).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].poly, IntPoly::from_i64(&[-1, -1, 1]));
        // B = θ² = θ + 1
        assert_eq!(cs[0].eigenvalues["B"], vec![rat(1), rat(1)]);
    }

    #[test]
    fn old_new_trivial_cases() {
        let ops = vec![LabeledOp::new("T_2", q(&[&[1, 0], &[0, -2]]))];
        let on = old_new_split(&ops, &[], 2, 0).unwrap();
        assert_eq!(on.new_dim(), 2);
        // two copies of a one-dimensional space with eigenvalue −2
        let lower = vec![LabeledOp::new("T_2", q(&[&[-2]]))];
        let doubled = vec![LabeledOp::new("T_2", q(&[&[-2, 0], &[0, -2]]))];
        let on = old_new_split(&doubled, &lower, 2, 2).unwrap();
        assert_eq!(on.new_dim(), 0);
    }

    #[test]
    fn old_space_needs_whole_eigensystems() {
        // lower forms (1, 3) and (2, 4); the new form (1, 4) mixes them
        let lower = vec![LabeledOp::new("T_a", q(&[&[1, 0], &[0, 2]])), LabeledOp::new("T_b", q(&[&[3, 0], &[0, 4]]))];
        let space = vec![LabeledOp::new("T_a", q(&[&[1, 0], &[0, 1]])), LabeledOp::new("T_b", q(&[&[3, 0], &[0, 4]]))];
        let on = old_new_split(&space, &lower, 2, 1).unwrap();
        assert_eq!(on.old.nrows(), 1);
        assert_eq!(on.new_ops[1].matrix, q(&[&[4]]));
    }
}
