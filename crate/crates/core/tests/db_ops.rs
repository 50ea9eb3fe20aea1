use hmf::db::query::{to_csv, to_table};
use hmf::db::{build_database, crosscheck_pnew, spot_check, FieldConfig, Query};
use hmf::linalg::IntPoly;
use hmf::Error;

fn filters(fs: &[&str]) -> Vec<String> {
    fs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn crosscheck_thirty_three() {
    let rep = crosscheck_pnew(33, 3, 11, 50).unwrap();
    assert!(rep.passed(), "{}", rep.render());
    assert_eq!(rep.via_p.len(), 1);
    let (dim, polys) = &rep.via_p[0];
    assert_eq!(*dim, 1);
    let at = |l: &str| polys[rep.primes.iter().position(|p| p == l).unwrap()].clone();
    // 33a: a_2 = 1, a_5 = −2, a_7 = 4, a_13 = −2
    assert_eq!(at("2"), IntPoly::linear(1));
    assert_eq!(at("5"), IntPoly::linear(-2));
    assert_eq!(at("7"), IntPoly::linear(4));
    assert_eq!(at("13"), IntPoly::linear(-2));
}

#[test]
fn crosscheck_twenty_two_is_empty() {
    let rep = crosscheck_pnew(22, 2, 11, 30).unwrap();
    assert!(rep.passed() && rep.via_p.is_empty() && rep.via_q.is_empty());
}

#[test]
fn crosscheck_preconditions() {
    assert!(matches!(crosscheck_pnew(33, 3, 3, 30), Err(Error::Precondition(_))));
    assert!(matches!(crosscheck_pnew(33, 5, 11, 30), Err(Error::Precondition(_))));
    assert!(matches!(crosscheck_pnew(99, 3, 11, 30), Err(Error::Precondition(_))));
}

#[test]
fn queries_and_spot_checks() {
    let cfg = FieldConfig::pizer(11).unwrap();
    let db = build_database(&cfg, 1, 6, 40).unwrap().records;
    assert_eq!(Query::parse(&[]).unwrap().run(&db).len(), db.len());
    let one = Query::parse(&filters(&["dim=1", "norm=1"])).unwrap().run(&db);
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].level[0], 1);
    assert!(Query::parse(&filters(&["norm=100..200"])).unwrap().run(&db).is_empty());
    assert!(Query::parse(&filters(&["color=red"])).is_err());
    assert!(Query::parse(&filters(&["cm=maybe"])).is_err());
    let not_cm = Query::parse(&filters(&["cm=not"])).unwrap().run(&db);
    assert!(!not_cm.is_empty());
    let csv = to_csv(&one);
    assert!(csv.starts_with("label,level,dim,heckefield,AL,cm,bc\n1.1.1.1-11-1.0.1-0,11,1,0 1,11:-1,not,na"), "{csv}");
    assert_eq!(to_table(&one).lines().count(), 2);

    let checks = spot_check(&cfg, &db, 8, 7).unwrap();
    assert_eq!(checks.len(), 8);
    assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    // a corrupted eigenvalue is caught
    let mut bad = db[0].clone();
    for v in bad.eigenvalues.iter_mut().filter(|v| !v.is_empty()) {
        v[0] += 1;
    }
    assert!(spot_check(&cfg, &[bad], 3, 1).unwrap().iter().all(|c| !c.passed));
}
