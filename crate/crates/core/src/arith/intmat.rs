//! Small dense integer matrices: Hermite forms and kernels of lattice maps.
//! Rows are vectors; elimination runs in `i128` and falls back to bignums.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

pub type IMat = Vec<Vec<i64>>;

/// Row Hermite normal form: echelon rows with positive pivots, entries above
/// each pivot reduced into `[0, pivot)`, zero rows dropped.
pub fn hnf(rows: &[Vec<i64>], ncols: usize) -> IMat {
    hnf_wide(rows, ncols)
        .into_iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("HNF entry exceeds i64")).collect())
        .collect()
}

/// Hermite form in `i128`, redone over `BigInt` if an intermediate overflows.
fn hnf_wide(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<BigInt>> {
    let narrow: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    if let Some(h) = hnf_checked(narrow, ncols) {
        return h.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    }
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    hnf_checked(big, ncols).expect("bignum arithmetic cannot overflow")
}

trait Entry: Integer + Signed + Clone + CheckedAdd + CheckedMul + CheckedSub {}
impl<T: Integer + Signed + Clone + CheckedAdd + CheckedMul + CheckedSub> Entry for T {}

/// `x·a + y·b` entrywise.
fn combine<T: Entry>(x: &T, a: &[T], y: &T, b: &[T]) -> Option<Vec<T>> {
    a.iter().zip(b).map(|(p, q)| x.checked_mul(p)?.checked_add(&y.checked_mul(q)?)).collect()
}

fn hnf_checked<T: Entry>(rows: Vec<Vec<T>>, ncols: usize) -> Option<Vec<Vec<T>>> {
    let mut piv: Vec<Option<Vec<T>>> = vec![None; ncols];
    for mut v in rows {
        debug_assert_eq!(v.len(), ncols);
        let mut col = 0;
        while col < ncols {
            if v[col].is_zero() {
                col += 1;
                continue;
            }
            match piv[col].take() {
                None => {
                    if v[col].is_negative() {
                        v.iter_mut().for_each(|x| *x = -x.clone());
                    }
                    // keep the tail small against later pivots
                    reduce_tail(&mut v, &piv, col)?;
                    piv[col] = Some(v);
                    break;
                }
                Some(r) => {
                    let e = r[col].extended_gcd(&v[col]);
                    let (rc, vc) = (r[col].clone() / e.gcd.clone(), v[col].clone() / e.gcd);
                    let mut nr = combine(&e.x, &r, &e.y, &v)?;
                    let mut nv = combine(&rc, &v, &-vc, &r)?;
                    if nr[col].is_negative() {
                        nr.iter_mut().for_each(|t| *t = -t.clone());
                    }
                    reduce_tail(&mut nr, &piv, col)?;
                    reduce_tail(&mut nv, &piv, col)?;
                    piv[col] = Some(nr);
                    v = nv;
                    col += 1;
                }
            }
        }
    }
    // back-reduce above pivots
    for j in 0..ncols {
        let Some(pj) = piv[j].clone() else { continue };
        for i in 0..j {
            if let Some(ri) = piv[i].as_mut() {
                let q = ri[j].div_floor(&pj[j]);
                if !q.is_zero() {
                    *ri = combine(&T::one(), ri, &-q, &pj)?;
                }
            }
        }
    }
    Some(piv.into_iter().flatten().collect())
}

fn reduce_tail<T: Entry>(v: &mut Vec<T>, piv: &[Option<Vec<T>>], from: usize) -> Option<()> {
    for j in from + 1..v.len() {
        if let Some(p) = &piv[j] {
            let q = v[j].div_floor(&p[j]);
            if !q.is_zero() {
                *v = combine(&T::one(), v, &-q, p)?;
            }
        }
    }
    Some(())
}

/// Basis of `{x ∈ Z^m : x·A ∈ Λ}` where `A` is `m × k` and `Λ ⊆ Z^k` is
/// spanned by the rows of `modulus` (possibly empty for the plain kernel).
pub fn kernel_mod(a: &[Vec<i64>], modulus: &[Vec<i64>]) -> IMat {
    let m = a.len();
    let k = a.first().map_or_else(|| modulus.first().map_or(0, |r| r.len()), |r| r.len());
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(m + modulus.len());
    for (i, r) in a.iter().enumerate() {
        let mut v = r.clone();
        v.extend((0..m).map(|j| i64::from(i == j)));
        rows.push(v);
    }
    for r in modulus {
        let mut v = r.clone();
        v.extend(std::iter::repeat_n(0, m));
        rows.push(v);
    }
    hnf_wide(&rows, k + m)
        .into_iter()
        .filter(|r| r[..k].iter().all(|x| x.is_zero()))
        .map(|r| r[k..].iter().map(|x| x.to_i64().expect("kernel entry exceeds i64")).collect())
        .collect()
}

/// `x · M` for a row vector `x`.
pub fn vec_mat(x: &[i64], m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.first().map_or(0, |r| r.len());
    let mut out = vec![0i64; n];
    for (xi, row) in x.iter().zip(m) {
        if *xi == 0 {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o += xi * r;
        }
    }
    out
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IMat {
    a.iter().map(|r| vec_mat(r, b)).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}
