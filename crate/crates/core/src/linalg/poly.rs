//! Polynomials with integer coefficients, stored in increasing degree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::qmat::Rat;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x - r`
    pub fn linear(r: i64) -> Self {
        Self::from_i64(&[-r, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }

    /// Divided by its content, with positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn max_abs(&self) -> BigInt {
        self.coeffs.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + Rat::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        (0..e).fold(IntPoly::one(), |acc, _| acc.mul(self))
    }

    /// Exact quotient over `Z`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dl = d.lc();
        let dd = d.degree();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, r) = top.div_rem(&dl);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &qk * c;
            }
            q[k] = qk;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder `lc(d)^k·self mod d`.
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        let dd = d.degree();
        let dl = d.lc();
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let rl = r.lc();
            let mut next = r.scale(&dl);
            for (j, c) in d.coeffs.iter().enumerate() {
                next.coeffs[shift + j] -= &rl * c;
            }
            r = IntPoly::new(next.coeffs);
        }
        r
    }

    /// Primitive gcd over `Q` (positive leading coefficient).
    pub fn gcd(&self, o: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive(), o.primitive());
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// Squarefree decomposition `self = c·∏ fᵢ^i` as `(fᵢ, i)` with
    /// nonconstant primitive `fᵢ`.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let f = self.primitive();
        if f.degree() == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut g = f.gcd(&f.derivative());
        let mut w = rational_quotient(&f, &g);
        let mut i = 1;
        while w.degree() > 0 {
            let y = w.gcd(&g);
            let z = rational_quotient(&w, &y);
            if z.degree() > 0 {
                out.push((z, i));
            }
            i += 1;
            g = rational_quotient(&g, &y);
            w = y;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree() == 0 || self.gcd(&self.derivative()).degree() == 0
    }

    /// Coefficients as rationals.
    pub fn to_rat(&self) -> Vec<Rat> {
        self.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect()
    }

    /// Polynomial from rational coefficients scaled to be primitive.
    pub fn from_rat_primitive(c: &[Rat]) -> IntPoly {
        IntPoly::new(crate::linalg::qmat::primitive_integer(c)).primitive()
    }

    /// Polynomial with exactly these rational coefficients, if integral.
    pub fn from_rat_exact(c: &[Rat]) -> Result<IntPoly> {
        c.iter()
            .map(|x| if x.is_integer() { Ok(x.to_integer()) } else { Err(Error::Linalg(format!("non-integral coefficient {x}"))) })
            .collect::<Result<Vec<_>>>()
            .map(IntPoly::new)
    }

    /// Number of distinct real roots, by a Sturm sequence.
    pub fn count_real_roots(&self) -> usize {
        let seq = self.sturm_sequence();
        let at = |pos: bool| {
            let signs: Vec<i32> = seq
                .iter()
                .filter(|p| !p.is_zero())
                .map(|p| {
                    let lc = p.lc();
                    let s = if lc.is_negative() { -1 } else { 1 };
                    if !pos && p.degree() % 2 == 1 {
                        -s
                    } else {
                        s
                    }
                })
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        at(false) - at(true)
    }

    fn sturm_sequence(&self) -> Vec<IntPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            let (a, b) = (&seq[n - 2], &seq[n - 1]);
            if b.is_zero() || b.degree() == 0 {
                break;
            }
            // negated remainder with a positive scale factor
            let scale = b.lc().abs().pow((a.degree() - b.degree() + 1) as u32);
            let r = a.scale(&scale).pseudo_rem_signed(b);
            if r.is_zero() {
                break;
            }
            let c = r.content();
            seq.push(IntPoly::new(r.coeffs.iter().map(|x| -(x / &c)).collect()));
        }
        seq
    }

    /// Remainder of a division by `d` where `self` is already scaled so the
    /// division is exact over `Z`.
    fn pseudo_rem_signed(&self, d: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        let dd = d.degree();
        let dl = d.lc();
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let (q, rem) = r.lc().div_rem(&dl);
            if !rem.is_zero() {
                return self.pseudo_rem(d);
            }
            let mut c = r.coeffs.clone();
            for (j, x) in d.coeffs.iter().enumerate() {
                c[shift + j] -= &q * x;
            }
            r = IntPoly::new(c);
        }
        r
    }

    /// Whether every root is real (squarefree part checked by Sturm).
    pub fn all_roots_real(&self) -> bool {
        self.squarefree_decomposition().iter().all(|(f, _)| f.count_real_roots() == f.degree())
    }

    /// Real roots, ascending, to double precision (the polynomial must have
    /// only real roots; each squarefree factor is isolated by Sturm counts
    /// and refined by bisection).
    pub fn real_roots(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (f, m) in self.squarefree_decomposition() {
            let roots = f.isolate_real_roots();
            for r in roots {
                for _ in 0..m {
                    out.push(r);
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        out
    }

    fn isolate_real_roots(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        let seq = self.sturm_sequence();
        let sign_changes = |x: &Rat| {
            let signs: Vec<i32> = seq
                .iter()
                .map(|p| {
                    let v = p.eval_rat(x);
                    if v.is_zero() {
                        0
                    } else if v.is_negative() {
                        -1
                    } else {
                        1
                    }
                })
                .filter(|&s| s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        // Cauchy bound
        let lc = self.lc().abs();
        let m = self.coeffs[..self.degree()].iter().map(|x| x.abs()).max().unwrap_or_default();
        let bound = Rat::from_integer(BigInt::one() + (m + &lc - BigInt::one()) / &lc);
        let mut stack = vec![(-bound.clone(), bound)];
        let mut roots = Vec::new();
        let eps = Rat::new(BigInt::one(), BigInt::from(1u64 << 52));
        while let Some((lo, hi)) = stack.pop() {
            let n = sign_changes(&lo) as i64 - sign_changes(&hi) as i64;
            if n <= 0 {
                continue;
            }
            let width = &hi - &lo;
            if n == 1 && width < &eps * (Rat::one() + lo.abs()) {
                roots.push(((&lo + &hi) / Rat::from_integer(2.into())).to_f64().unwrap_or(f64::NAN));
                continue;
            }
            // midpoint nudged off exact roots so endpoints never vanish
            let mut mid = (&lo + &hi) / Rat::from_integer(2.into());
            let mut k = 1u32;
            while self.eval_rat(&mid).is_zero() {
                mid = &lo + &width * Rat::new(BigInt::from((1u64 << (k + 1)) + 1), BigInt::from(1u64 << (k + 2)));
                k += 1;
            }
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        roots.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        roots
    }
}

/// `a/b` over `Q` scaled to a primitive integer polynomial (zero if `a` is
/// zero). Panics unless `b` divides `a` over `Q`.
fn rational_quotient(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return IntPoly::zero();
    }
    let scale = b.lc().pow((a.degree() + 1 - b.degree().min(a.degree())) as u32);
    a.scale(&scale).div_exact(b).expect("rational divisibility").primitive()
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_arith() {
        let f = IntPoly::from_i64(&[-1, -1, 1]);
        assert_eq!(f.to_string(), "x^2 - x - 1");
        assert_eq!(IntPoly::from_i64(&[3, 0, -2]).to_string(), "-2*x^2 + 3");
        let g = f.mul(&IntPoly::linear(3));
        assert_eq!(g.div_exact(&f), Some(IntPoly::linear(3)));
        assert_eq!(g.div_exact(&IntPoly::linear(2)), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = IntPoly::from_i64(&[-1, -1, 1]);
        let g = f.pow(2).mul(&IntPoly::linear(3));
        let d = g.squarefree_decomposition();
        assert_eq!(d, vec![(IntPoly::linear(3), 1), (f.clone(), 2)]);
        assert!(!g.is_squarefree());
        assert_eq!(g.gcd(&f), f);
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(IntPoly::from_i64(&[-1, -1, 1]).count_real_roots(), 2);
        assert_eq!(IntPoly::from_i64(&[1, 0, 1]).count_real_roots(), 0);
        let r = IntPoly::from_i64(&[-1, -1, 1]).real_roots();
        assert!((r[1] - 1.618033988749895).abs() < 1e-12);
        let r = IntPoly::linear(2).mul(&IntPoly::linear(-3)).real_roots();
        assert_eq!(r.len(), 2);
        assert!((r[0] + 3.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }
}
