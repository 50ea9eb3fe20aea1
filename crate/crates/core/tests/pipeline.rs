use hmf::analysis::CmVerdict;
use hmf::arith::{BaseField, Ideal};
use hmf::db::{build_database, read_database, write_database, FieldConfig};
use hmf::linalg::rat;
use num_bigint::BigInt;

#[test]
fn eleven_mini_database() {
    let cfg = FieldConfig::pizer(11).unwrap();
    let out = build_database(&cfg, 1, 4, 20).unwrap();
    let dims: Vec<(i64, usize, usize)> = out.levels.iter().map(|l| (l.level.norm(), l.cusp_dim, l.new_dim())).collect();
    assert_eq!(dims, vec![(1, 1, 1), (2, 2, 0), (3, 3, 1), (4, 4, 1)]);
    let levels: Vec<i64> = out.records.iter().map(|r| r.level[0]).collect();
    assert_eq!(levels, vec![1, 3, 4]);
    let r = &out.records[0];
    assert_eq!(r.eigenvalue("2").unwrap()[0], rat(-2));
    assert_eq!(r.eigenvalues[4], Vec::<BigInt>::new());
    // 11a has split multiplicative reduction: a_11 = 1
    assert_eq!(r.al, vec![("11".to_string(), -1)]);
    // seven eigenvalues are too few for a verdict
    assert_eq!(r.cm, CmVerdict::Untested);
    let r33 = &out.records[1];
    assert_eq!(r33.eigenvalue("2").unwrap()[0], rat(1));
    let text = write_database(&out.records);
    assert_eq!(read_database(&text).unwrap(), out.records);
    print!("{}", out.report);
}

#[test]
fn empty_range() {
    let cfg = FieldConfig::pizer(11).unwrap();
    let out = build_database(&cfg, 5, 4, 20).unwrap();
    assert!(out.records.is_empty() && out.levels.is_empty());
    assert!(out.report.contains("records 0"));
}

#[test]
fn config_files() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let c = FieldConfig::load(std::path::Path::new(&format!("{dir}/q_d11.cfg"))).unwrap();
    assert_eq!(c.order.discriminant(), &Ideal::rational(&BaseField::rationals(), 11));
    let c = FieldConfig::load(std::path::Path::new(&format!("{dir}/q5_icosian.cfg"))).unwrap();
    assert_eq!(c.field.label(), "2.2.5.1");
    assert!(FieldConfig::parse("field = 5\nalgebra = pizer 11\n", None).is_err());
    assert!(FieldConfig::parse("field = 0\n", None).is_err());
}

#[test]
fn golden_field_to_norm_forty() {
    let cfg = FieldConfig::icosian().unwrap();
    let out = build_database(&cfg, 1, 40, 50).unwrap();
    print!("{}", out.report);
    let first = out.levels.iter().find(|l| l.cusp_dim > 0).unwrap();
    assert_eq!((first.level.norm(), first.cusp_dim), (31, 1));
    // both primes of norm 31 are levels
    assert_eq!(out.levels.iter().filter(|l| l.level.norm() == 31).count(), 2);
    for l in &out.levels {
        assert_eq!(l.constituents.iter().map(|c| c.dim()).sum::<usize>(), l.new_dim());
    }
}
