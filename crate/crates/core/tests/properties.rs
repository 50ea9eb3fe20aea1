//! Property tests for the algebraic invariants the pipeline relies on.

use std::collections::BTreeMap;

use hmf::analysis::HeckeFieldStats;
use hmf::arith::intmat::{det, hnf, kernel_mod, vec_mat};
use hmf::arith::Ideal;
use hmf::brandt::OperatorKind;
use hmf::db::{FieldConfig, Pipeline};
use hmf::linalg::{charpoly_rational, old_new_split, rat, IntPoly, LabeledOp, QMat};
use proptest::prelude::*;

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, cols), rows)
}

/// `P·D·P⁻¹` with `P` unit lower triangular, so the result is integral.
fn conjugate(diag: &[i64], shear: &[i64]) -> QMat {
    let n = diag.len();
    let mut nil = QMat::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in 0..i {
            nil.set(i, j, rat(shear[k % shear.len()]));
            k += 1;
        }
    }
    let p = QMat::identity(n).add(&nil);
    // (I + N)⁻¹ = Σ (−N)^k
    let mut inv = QMat::identity(n);
    let mut term = QMat::identity(n);
    for _ in 1..n {
        term = term.mul(&nil).scale(&rat(-1));
        inv = inv.add(&term);
    }
    let mut d = QMat::zeros(n, n);
    for (i, &x) in diag.iter().enumerate() {
        d.set(i, i, rat(x));
    }
    p.mul(&d).mul(&inv)
}

fn diagonal(diag: &[i64]) -> QMat {
    conjugate(diag, &[0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_idempotent_and_keeps_the_lattice(m in small_matrix(4, 3)) {
        let h = hnf(&m, 3);
        prop_assert_eq!(hnf(&h, 3), h.clone());
        // every input row lies in the span of the Hermite rows
        for r in &m {
            let mut both = h.clone();
            both.push(r.clone());
            prop_assert_eq!(hnf(&both, 3), h.clone());
        }
        if h.len() == 3 {
            let d = det(&h);
            prop_assert!(d > 0);
            // lattice index is the gcd of the maximal minors
            let mut g = 0i128;
            for skip in 0..m.len() {
                let minor: Vec<Vec<i64>> = m.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r.clone()).collect();
                g = num_integer::Integer::gcd(&g, &det(&minor));
            }
            prop_assert_eq!(d, g);
        }
    }

    #[test]
    fn kernel_mod_lands_in_the_modulus(a in small_matrix(4, 2), m in 1i64..12) {
        let modulus = vec![vec![m, 0], vec![0, m]];
        let k = kernel_mod(&a, &modulus);
        // the kernel contains mZ^4 so it has full rank
        prop_assert_eq!(k.len(), 4);
        for x in &k {
            let y = vec_mat(x, &a);
            prop_assert!(y.iter().all(|c| c % m == 0));
        }
    }

    #[test]
    fn squarefree_decomposition_multiplies_back(roots in prop::collection::vec(-4i64..=4, 1..6)) {
        let p = roots.iter().fold(IntPoly::one(), |acc, &r| acc.mul(&IntPoly::linear(r)));
        let parts = p.squarefree_decomposition();
        let back = parts.iter().fold(IntPoly::one(), |acc, (g, e)| acc.mul(&g.pow(*e)));
        prop_assert_eq!(back.primitive(), p.primitive());
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        let radical = parts.iter().fold(IntPoly::one(), |acc, (g, _)| acc.mul(g));
        prop_assert_eq!(radical.degree(), distinct.len());
    }

    #[test]
    fn stats_merge_is_associative(
        parts in prop::collection::vec(
            (prop::collection::btree_map((0usize..2, -20i64..20), 1usize..4, 0..4), 0usize..3, 0usize..3),
            3,
        )
    ) {
        let stats: Vec<HeckeFieldStats> = parts
            .iter()
            .map(|(counts, real, imaginary)| {
                let counts: BTreeMap<(String, i64), usize> =
                    counts.iter().map(|((f, d), c)| ((format!("field{f}"), *d), *c)).collect();
                let max = counts.keys().map(|(f, d)| (f.clone(), (*d, 1))).collect();
                HeckeFieldStats { counts, max, real: *real, imaginary: *imaginary }
            })
            .collect();
        let left = stats[0].clone().merge(stats[1].clone()).merge(stats[2].clone());
        let right = stats[0].clone().merge(stats[1].clone().merge(stats[2].clone()));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.total(), stats.iter().map(HeckeFieldStats::total).sum::<usize>());
        let swapped = stats[1].clone().merge(stats[0].clone());
        prop_assert_eq!(swapped.counts, stats[0].clone().merge(stats[1].clone()).counts);
    }

    /// Lower eigensystems appear with multiplicities; new ones share single
    /// eigenvalues with them but never a whole system.
    #[test]
    fn old_new_split_recovers_whole_eigensystems(
        lower in prop::collection::btree_set((-3i64..=3, -3i64..=3), 1..4),
        mult in prop::collection::vec(1usize..3, 4),
        fresh in prop::collection::btree_set((-3i64..=3, -3i64..=3), 0..4),
        shear in prop::collection::vec(-2i64..=2, 1..6),
    ) {
        let lower: Vec<(i64, i64)> = lower.into_iter().collect();
        let fresh: Vec<(i64, i64)> = fresh.into_iter().filter(|v| !lower.contains(v)).collect();
        let mut systems = Vec::new();
        for (i, v) in lower.iter().enumerate() {
            systems.extend(std::iter::repeat_n(*v, mult[i]));
        }
        let expected_old = systems.len();
        systems.extend(fresh.iter().copied());
        let ops = |sys: &[(i64, i64)], conj: bool| -> Vec<LabeledOp> {
            let a: Vec<i64> = sys.iter().map(|v| v.0).collect();
            let b: Vec<i64> = sys.iter().map(|v| v.1).collect();
            let m = |d: &[i64]| if conj { conjugate(d, &shear) } else { diagonal(d) };
            vec![LabeledOp::new("T_a", m(&a)), LabeledOp::new("T_b", m(&b))]
        };
        let split = old_new_split(&ops(&systems, true), &ops(&lower, false), systems.len(), expected_old).unwrap();
        prop_assert_eq!(split.new_dim(), fresh.len());
        if !fresh.is_empty() {
            let want = fresh.iter().fold(IntPoly::one(), |acc, v| acc.mul(&IntPoly::linear(v.0)));
            prop_assert_eq!(charpoly_rational(&split.new_ops[0].matrix).unwrap(), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn brandt_operators_satisfy_the_hecke_identities(d in prop::sample::select(vec![2i64, 3, 5, 7, 11, 13]), m in 1i64..=12) {
        prop_assume!(m % d != 0);
        let cfg = FieldConfig::pizer(d).unwrap();
        let pipe = Pipeline::new(&cfg, 13);
        let level = Ideal::rational(pipe.field(), m);
        let module = pipe.module(&level).unwrap();
        let good: Vec<_> = pipe.primes().iter().filter(|p| (d * m) % p.norm() != 0).copied().collect();
        let mut ops = module.hecke_operators(&good).unwrap();
        for t in &ops {
            prop_assert!(module.is_self_adjoint(&t.matrix));
            prop_assert!(t.matrix.iter().all(|r| r.iter().sum::<i64>() == t.prime.norm() + 1));
        }
        ops.extend(pipe.atkin_lehner_operators(&module).unwrap());
        for (i, x) in ops.iter().enumerate() {
            for y in &ops[i + 1..] {
                prop_assert!(x.to_qmat().commutes_with(&y.to_qmat()), "{} and {}", x.label, y.label);
            }
            if x.kind != OperatorKind::Hecke {
                let w = x.to_qmat();
                prop_assert_eq!(w.mul(&w), QMat::identity(module.dim()));
            }
        }
    }
}
