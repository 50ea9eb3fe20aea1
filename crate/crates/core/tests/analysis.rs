use hmf::analysis::record::{hnf_data, NewformRecord};
use hmf::analysis::{
    conjugate_record, detect_base_change, detect_cm, hecke_field_stats, lfunction_coefficients, BaseChangeVerdict,
    CmVerdict,
};
use hmf::arith::ideal::{primes_above, primes_up_to};
use hmf::arith::{BaseField, Ideal};
use hmf::linalg::rat;
use num_bigint::BigInt;

/// `p + 1 − #E(F_p)` for `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.
fn point_count_ap(c: [i64; 5], p: i64) -> i64 {
    let [a1, a2, a3, a4, a6] = c;
    let mut affine = 0;
    for x in 0..p {
        for y in 0..p {
            let lhs = (y * y + a1 * x * y + a3 * y).rem_euclid(p);
            let rhs = (x * x * x + a2 * x * x + a4 * x + a6).rem_euclid(p);
            if lhs == rhs {
                affine += 1;
            }
        }
    }
    p - affine
}

const E11: [i64; 5] = [0, -1, 1, -10, -20];
const E32: [i64; 5] = [0, 0, 0, -1, 0];

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

fn rational_record(bound: i64, level: i64, bad: &[i64], ap: impl Fn(i64) -> i64) -> NewformRecord {
    let q = BaseField::rationals();
    let primes: Vec<i64> = (2..=bound).filter(|&p| is_prime(p)).collect();
    NewformRecord {
        field: q.label().to_string(),
        level: hnf_data(&Ideal::rational(&q, level)),
        disc: hnf_data(&Ideal::unit()),
        index: 0,
        heckefield: vec![BigInt::from(0), BigInt::from(1)],
        denominator: BigInt::from(1),
        al: Vec::new(),
        primes: primes.iter().map(|p| p.to_string()).collect(),
        eigenvalues: primes.iter().map(|&p| if bad.contains(&p) { vec![] } else { vec![BigInt::from(ap(p))] }).collect(),
        cm: CmVerdict::Untested,
        base_change: BaseChangeVerdict::None,
        prime_bound: bound,
    }
}

fn form_11a() -> NewformRecord {
    let mut r = rational_record(50, 11, &[11], |p| point_count_ap(E11, p));
    // split multiplicative reduction: a_11 = 1, so w_11 = −1
    r.al = vec![("11".into(), -1)];
    r
}

#[test]
fn oracle_sanity() {
    let a: Vec<i64> = [2, 3, 5, 7].iter().map(|&p| point_count_ap(E11, p)).collect();
    assert_eq!(a, vec![-2, -1, 1, -2]);
}

#[test]
fn cm_verdicts() {
    let q = BaseField::rationals();
    assert_eq!(detect_cm(&q, &form_11a()).unwrap(), CmVerdict::NotCm);

    let cm = rational_record(60, 32, &[2], |p| point_count_ap(E32, p));
    let inert = (3..=60).filter(|&p| is_prime(p) && p % 4 == 3).count();
    assert_eq!(detect_cm(&q, &cm).unwrap(), CmVerdict::Candidate { disc: -4, evidence: inert });

    let zeros = rational_record(50, 1, &[], |_| 0);
    assert_eq!(detect_cm(&q, &zeros).unwrap(), CmVerdict::Untested);

    let short = rational_record(20, 11, &[11], |p| point_count_ap(E11, p));
    assert!(detect_cm(&q, &short).is_err());
}

#[test]
fn cm_verdict_is_frozen_once_refuted() {
    let q = BaseField::rationals();
    for bound in [31, 40, 60, 80] {
        let mut r = rational_record(bound, 11, &[11], |p| point_count_ap(E11, p));
        r.al = vec![("11".into(), -1)];
        assert_eq!(detect_cm(&q, &r).unwrap(), CmVerdict::NotCm);
    }
}

#[test]
fn l_coefficients_over_q() {
    let q = BaseField::rationals();
    let l = lfunction_coefficients(&q, &form_11a(), 30).unwrap();
    assert_eq!(l.conductor, 11);
    assert_eq!(l.gamma_exponent, 1);
    assert_eq!(l.coefficient(1).unwrap(), &vec![rat(1)]);
    assert_eq!(l.coefficient(4).unwrap(), &vec![rat(2)]);
    assert_eq!(l.coefficient(6).unwrap(), &vec![rat(2)]);
    assert_eq!(l.coefficient(11).unwrap(), &vec![rat(1)]);
    assert_eq!(l.coefficient(22).unwrap(), &vec![rat(-2)]);
    assert!(l.unavailable().is_empty());
    // coefficients past the tabulated primes are an error
    assert!(lfunction_coefficients(&q, &form_11a(), 60).is_err());
}

#[test]
fn l_multiplicativity_exhaustive() {
    let q = BaseField::rationals();
    let l = lfunction_coefficients(&q, &form_11a(), 50).unwrap();
    for m in 1..=50usize {
        for n in 1..=50 / m {
            if num_integer::gcd(m, n) == 1 {
                let k = hmf::linalg::NumberField::rationals();
                let prod = k.mul(l.coefficient(m).unwrap(), l.coefficient(n).unwrap());
                assert_eq!(&prod, l.coefficient(m * n).unwrap(), "a_{m}·a_{n}");
            }
        }
    }
}

/// Base change of 11a to Q(√5): split primes copy `a_p`, inert primes get
/// `a_p² − 2p`.
fn base_change_11a(f: &BaseField, level: Ideal) -> NewformRecord {
    let primes = primes_up_to(f, 50);
    let eig = primes
        .iter()
        .map(|p| {
            if p.p == 11 {
                return vec![];
            }
            let a = point_count_ap(E11, p.p);
            vec![BigInt::from(if p.f == 1 { a } else { a * a - 2 * p.p })]
        })
        .collect();
    NewformRecord {
        field: f.label().to_string(),
        level: hnf_data(&level),
        disc: hnf_data(&Ideal::unit()),
        index: 0,
        heckefield: vec![BigInt::from(0), BigInt::from(1)],
        denominator: BigInt::from(1),
        al: primes_above(f, 11).iter().map(|p| (p.label(), -1)).collect(),
        primes: primes.iter().map(|p| p.label()).collect(),
        eigenvalues: eig,
        cm: CmVerdict::Untested,
        base_change: BaseChangeVerdict::None,
        prime_bound: 50,
    }
}

#[test]
fn base_change_detection() {
    let f = BaseField::new(5).unwrap();
    let db = vec![rational_record(50, 11, &[11], |p| point_count_ap(E11, p))];
    let bc = base_change_11a(&f, Ideal::rational(&f, 11));
    let checked = primes_up_to(&f, 50).iter().filter(|p| p.p != 11 && !p.ramified).count();
    assert_eq!(
        detect_base_change(&f, &bc, Some(&db)).unwrap(),
        BaseChangeVerdict::Matched { form: db[0].label(), evidence: checked }
    );
    assert_eq!(detect_base_change(&f, &bc, None).unwrap(), BaseChangeVerdict::Stage1);
    // σ-involution consistency
    let conj = conjugate_record(&f, &bc).unwrap();
    assert_eq!(detect_base_change(&f, &conj, Some(&db)).unwrap(), detect_base_change(&f, &bc, Some(&db)).unwrap());

    // one split pair disagrees
    let mut broken = bc.clone();
    let i = broken.primes.iter().position(|l| l.starts_with("19.")).unwrap();
    broken.eigenvalues[i][0] += 1;
    assert_eq!(detect_base_change(&f, &broken, Some(&db)).unwrap(), BaseChangeVerdict::Not);
    let conj = conjugate_record(&f, &broken).unwrap();
    assert_eq!(detect_base_change(&f, &conj, Some(&db)).unwrap(), BaseChangeVerdict::Not);

    // σ(N) ≠ N
    let p11 = primes_above(&f, 11)[0].ideal;
    let lop = base_change_11a(&f, p11);
    assert_eq!(detect_base_change(&f, &lop, Some(&db)).unwrap(), BaseChangeVerdict::Not);
}

#[test]
fn conductor_over_golden_field() {
    let f = BaseField::new(5).unwrap();
    let p31 = primes_above(&f, 31)[0];
    let mut r = base_change_11a(&f, p31.ideal);
    r.al = vec![(p31.label(), 1)];
    for (l, e) in r.primes.iter().zip(r.eigenvalues.iter_mut()) {
        if l.starts_with("11.") {
            e.push(BigInt::from(0));
        }
        if *l == p31.label() {
            e.clear();
        }
    }
    let l = lfunction_coefficients(&f, &r, 40).unwrap();
    assert_eq!(l.conductor, 775);
    assert_eq!(l.gamma_exponent, 2);
    // both ideals of norm 31 contribute
    assert_eq!(l.coefficient(31).unwrap()[0], rat(-1 + point_count_ap(E11, 31)));
}

#[test]
fn hecke_field_histogram() {
    assert_eq!(hecke_field_stats(&[]).total(), 0);
    let mut r = form_11a();
    r.heckefield = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
    let rs = vec![r.clone(), r.clone(), form_11a()];
    let s = hecke_field_stats(&rs);
    assert_eq!(s.total(), 2);
    assert_eq!(s.counts[&("1.1.1.1".to_string(), 5)], 2);
    assert!(s.to_csv().starts_with("field_label,disc_E,count\n1.1.1.1,5,2"));
    assert_eq!(s.real, 2);
}
