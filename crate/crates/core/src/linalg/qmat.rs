//! Dense matrices over `Q`. Subspaces are carried as row bases; operators
//! act on column vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    ncols: usize,
    rows: Vec<Vec<Rat>>,
}

/// Scales a rational vector to a primitive integer vector with positive
/// leading nonzero entry.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    ints.into_iter().map(|x| if sign { -(x / &g) } else { x / &g }).collect()
}

/// Fraction-free reduced echelon form of integer rows: pivots by increasing
/// column, every pivot column zero outside its pivot row, rows primitive.
fn echelon(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let piv = rows[r].clone();
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let a = rows[i][c].clone();
            let g = a.gcd(&piv[c]);
            let (ma, mp) = (&piv[c] / &g, &a / &g);
            let row = &mut rows[i];
            for (x, y) in row.iter_mut().zip(&piv) {
                *x = &*x * &ma - y * &mp;
            }
            let cont = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !cont.is_zero() && !cont.is_one() {
                for x in row.iter_mut() {
                    *x /= &cont;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    for row in rows.iter_mut() {
        let cont = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let neg = row.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        for x in row.iter_mut() {
            *x /= &cont;
            if neg {
                *x = -&*x;
            }
        }
    }
    (rows, pivots)
}

impl QMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        QMat { ncols, rows: vec![vec![Rat::zero(); ncols]; nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>, ncols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ncols));
        QMat { ncols, rows }
    }

    pub fn from_int(m: &[Vec<i64>]) -> Self {
        let ncols = m.first().map_or(0, |r| r.len());
        QMat { ncols, rows: m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rat) {
        self.rows[i][j] = x;
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    /// Integer entries, if every entry is integral and fits.
    pub fn to_int(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect())
            .collect()
    }

    pub fn transpose(&self) -> QMat {
        let rows = (0..self.ncols).map(|j| self.rows.iter().map(|r| r[j].clone()).collect()).collect();
        QMat { ncols: self.nrows(), rows }
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.ncols, other.nrows(), "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = vec![Rat::zero(); other.ncols];
                for (a, orow) in r.iter().zip(&other.rows) {
                    if a.is_zero() {
                        continue;
                    }
                    for (o, b) in out.iter_mut().zip(orow) {
                        if !b.is_zero() {
                            *o += a * b;
                        }
                    }
                }
                out
            })
            .collect();
        QMat { ncols: other.ncols, rows }
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        self.rows.iter().map(|r| r.iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, other: &QMat) -> QMat {
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        QMat { ncols: self.ncols, rows }
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        QMat { ncols: self.ncols, rows }
    }

    pub fn scale(&self, c: &Rat) -> QMat {
        QMat { ncols: self.ncols, rows: self.rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() }
    }

    /// Rows cleared of denominators, one integer row per rational row.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().map(|r| primitive_integer(r)).collect()
    }

    /// Reduced echelon row basis of the row space (primitive integer rows).
    pub fn row_space(&self) -> QMat {
        let (rows, _) = echelon(self.integer_rows(), self.ncols);
        QMat { ncols: self.ncols, rows: rows.into_iter().map(|r| r.into_iter().map(Rat::from_integer).collect()).collect() }
    }

    pub fn rank(&self) -> usize {
        echelon(self.integer_rows(), self.ncols).1.len()
    }

    /// Row basis of `{x : M·x = 0}`, one primitive integer vector per free
    /// column.
    pub fn kernel(&self) -> QMat {
        let n = self.ncols;
        let (rows, pivots) = echelon(self.integer_rows(), n);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); n];
                v[f] = Rat::one();
                for (row, &pc) in rows.iter().zip(&pivots) {
                    v[pc] = -Rat::new(row[f].clone(), row[pc].clone());
                }
                primitive_integer(&v).into_iter().map(Rat::from_integer).collect()
            })
            .collect();
        QMat { ncols: n, rows: basis }
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        QMat { ncols: self.ncols, rows }.rank() == self.rank()
    }

    /// Intersection of two row spaces.
    pub fn intersect(&self, other: &QMat) -> QMat {
        if self.nrows() == 0 || other.nrows() == 0 {
            return QMat::zeros(0, self.ncols);
        }
        // x·A = y·B  ⇔  (x, -y) in the left kernel of [A; B]
        let stacked: Vec<Vec<Rat>> = self.rows.iter().chain(other.rows.iter()).cloned().collect();
        let left = QMat { ncols: self.ncols, rows: stacked }.transpose().kernel();
        let a = self.nrows();
        let rows: Vec<Vec<Rat>> = left
            .rows
            .iter()
            .map(|c| {
                let mut out = vec![Rat::zero(); self.ncols];
                for (x, r) in c[..a].iter().zip(&self.rows) {
                    for (o, y) in out.iter_mut().zip(r) {
                        *o += x * y;
                    }
                }
                out
            })
            .collect();
        QMat { ncols: self.ncols, rows }.row_space()
    }

    /// Solves `X·self = b` for a row vector `X` when `self` has independent
    /// rows and `b` is in the row space.
    pub fn coordinates(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        let k = self.nrows();
        // augmented system on the transpose
        let mut aug: Vec<Vec<Rat>> = (0..self.ncols)
            .map(|j| {
                let mut r: Vec<Rat> = self.rows.iter().map(|row| row[j].clone()).collect();
                r.push(b[j].clone());
                r
            })
            .collect();
        let mut row = 0;
        let mut pivcols = Vec::new();
        for c in 0..k {
            let Some(p) = (row..aug.len()).find(|&i| !aug[i][c].is_zero()) else { return None };
            aug.swap(row, p);
            let inv = aug[row][c].recip();
            for x in aug[row].iter_mut() {
                *x *= &inv;
            }
            let piv = aug[row].clone();
            for (i, r) in aug.iter_mut().enumerate() {
                if i != row && !r[c].is_zero() {
                    let f = r[c].clone();
                    for (x, y) in r.iter_mut().zip(&piv) {
                        *x -= &f * y;
                    }
                }
            }
            pivcols.push(c);
            row += 1;
        }
        if aug[row..].iter().any(|r| !r[k].is_zero()) {
            return None;
        }
        Some(aug[..k].iter().map(|r| r[k].clone()).collect())
    }

    /// Matrix `A` of this operator restricted to the invariant subspace with
    /// row basis `basis`: `M·b_j = Σ_i A[i][j]·b_i`.
    pub fn restrict_to(&self, basis: &QMat) -> Result<QMat> {
        let k = basis.nrows();
        let mut a = QMat::zeros(k, k);
        for (j, b) in basis.rows.iter().enumerate() {
            let img = self.mul_vec(b);
            let c = basis
                .coordinates(&img)
                .ok_or_else(|| Error::Linalg("subspace is not invariant under the operator".into()))?;
            for (i, x) in c.into_iter().enumerate() {
                a.rows[i][j] = x;
            }
        }
        Ok(a)
    }

    /// Matrix of the induced action on `Q^n / W` for an invariant subspace
    /// with row basis `w`, in the basis of standard vectors at the non-pivot
    /// columns of `w`.
    pub fn quotient_action(&self, w: &QMat) -> Result<QMat> {
        let n = self.ncols;
        let (rows, pivots) = echelon(w.integer_rows(), n);
        let echelon_w: Vec<Vec<Rat>> = rows.into_iter().map(|r| r.into_iter().map(Rat::from_integer).collect()).collect();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let reduce = |mut v: Vec<Rat>| -> Vec<Rat> {
            for (r, &pc) in echelon_w.iter().zip(&pivots) {
                if !v[pc].is_zero() {
                    let f = &v[pc] / &r[pc];
                    for (x, y) in v.iter_mut().zip(r) {
                        *x -= &f * y;
                    }
                }
            }
            v
        };
        for r in &echelon_w {
            let img = reduce(self.mul_vec(r));
            if img.iter().any(|x| !x.is_zero()) {
                return Err(Error::Linalg("subspace is not invariant under the operator".into()));
            }
        }
        let q = free.len();
        let mut a = QMat::zeros(q, q);
        for (j, &fj) in free.iter().enumerate() {
            let mut e = vec![Rat::zero(); n];
            e[fj] = Rat::one();
            let img = reduce(self.mul_vec(&e));
            for (i, &fi) in free.iter().enumerate() {
                a.rows[i][j] = img[fi].clone();
            }
        }
        Ok(a)
    }

    /// `p(M)` for coefficients in increasing degree.
    pub fn eval_poly(&self, coeffs: &[Rat]) -> QMat {
        let n = self.nrows();
        let mut acc = QMat::zeros(n, n);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                acc.rows[i][i] += c;
            }
        }
        acc
    }

    pub fn commutes_with(&self, other: &QMat) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn trace(&self) -> Rat {
        (0..self.nrows()).map(|i| self.rows[i][i].clone()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(m: &[&[i64]]) -> QMat {
        QMat::from_int(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn kernel_and_rank() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.nrows(), 1);
        assert!(m.mul_vec(&k.rows()[0]).iter().all(Zero::is_zero));
        assert_eq!(QMat::identity(3).kernel().nrows(), 0);
    }

    #[test]
    fn restriction_and_quotient() {
        // upper triangular: span(e0) invariant
        let m = q(&[&[2, 1], &[0, 3]]);
        let w = q(&[&[1, 0]]);
        assert_eq!(m.restrict_to(&w).unwrap(), q(&[&[2]]));
        assert_eq!(m.quotient_action(&w).unwrap(), q(&[&[3]]));
        assert!(m.restrict_to(&q(&[&[0, 1]])).is_err());
    }

    #[test]
    fn intersections() {
        let a = q(&[&[1, 0, 0], &[0, 1, 0]]);
        let b = q(&[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.intersect(&b), q(&[&[0, 1, 0]]));
    }
}
