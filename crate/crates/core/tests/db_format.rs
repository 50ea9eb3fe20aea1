use hmf::analysis::{BaseChangeVerdict, CmVerdict, NewformRecord};
use hmf::db::{parse, read_database, serialize, write_database};
use hmf::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

fn label() -> impl Strategy<Value = String> {
    prop_oneof![
        (2i64..500).prop_map(|p| p.to_string()),
        (2i64..500, 0i64..50).prop_map(|(n, a)| format!("{n}.{a}")),
    ]
}

fn big() -> impl Strategy<Value = BigInt> {
    prop_oneof![any::<i64>().prop_map(BigInt::from), (any::<i64>(), any::<i64>()).prop_map(|(a, b)| BigInt::from(a) * b)]
}

fn cm() -> impl Strategy<Value = CmVerdict> {
    prop_oneof![
        Just(CmVerdict::NotCm),
        Just(CmVerdict::Untested),
        (-500i64..-2, 0usize..40).prop_map(|(disc, evidence)| CmVerdict::Candidate { disc, evidence }),
    ]
}

fn bc() -> impl Strategy<Value = BaseChangeVerdict> {
    prop_oneof![
        Just(BaseChangeVerdict::None),
        Just(BaseChangeVerdict::Not),
        Just(BaseChangeVerdict::Stage1),
        Just(BaseChangeVerdict::Unmatched),
        (1i64..100, 0usize..30).prop_map(|(n, evidence)| BaseChangeVerdict::Matched {
            form: format!("1.1.1.1-11-{n}.0.1-0"),
            evidence
        }),
    ]
}

prop_compose! {
    fn record()(dim in 1usize..4, np in 0usize..12)(
        field in prop_oneof![Just("1.1.1.1".to_string()), Just("2.2.5.1".to_string())],
        level in prop::array::uniform4(0i64..1000),
        disc in prop::array::uniform4(0i64..50),
        index in 0usize..10,
        poly in prop::collection::vec(big(), dim),
        den in 1i64..1000,
        al in prop::collection::vec((label(), prop_oneof![Just(1i8), Just(-1i8)]), 0..3),
        primes in prop::collection::vec(label(), np),
        eig in prop::collection::vec(prop::option::of(prop::collection::vec(big(), dim)), np),
        cm in cm(),
        bc in bc(),
        bound in 0i64..1000,
    ) -> NewformRecord {
        let mut heckefield = poly;
        heckefield.push(BigInt::from(1));
        NewformRecord {
            field, level, disc, index, heckefield,
            denominator: BigInt::from(den),
            al, primes,
            eigenvalues: eig.into_iter().map(Option::unwrap_or_default).collect(),
            cm, base_change: bc, prime_bound: bound,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn round_trip(r in record()) {
        let line = serialize(&r);
        prop_assert!(line.is_ascii());
        prop_assert_eq!(parse(&line).unwrap(), r);
    }

    #[test]
    fn database_round_trip(rs in prop::collection::vec(record(), 0..8)) {
        let text = write_database(&rs);
        prop_assert_eq!(read_database(&text).unwrap(), rs.clone());
        prop_assert_eq!(write_database(&read_database(&text).unwrap()), text);
    }
}

#[test]
fn rational_eigenvalue_is_a_singleton() {
    let r = NewformRecord {
        field: "1.1.1.1".into(),
        level: [1, 1, 0, 1],
        disc: [11, 11, 0, 1],
        index: 0,
        heckefield: vec![BigInt::from(0), BigInt::from(1)],
        denominator: BigInt::from(1),
        al: vec![("11".into(), -1)],
        primes: vec!["2".into(), "3".into(), "11".into()],
        eigenvalues: vec![vec![BigInt::from(-2)], vec![BigInt::from(-1)], vec![]],
        cm: CmVerdict::NotCm,
        base_change: BaseChangeVerdict::None,
        prime_bound: 11,
    };
    let line = serialize(&r);
    assert!(line.contains("eigenvalues=[[-2],[-1],[]]"), "{line}");
    assert_eq!(parse(&line).unwrap(), r);
}

#[test]
fn malformed_lines_report_positions() {
    let good = "field=1.1.1.1;disc=[11,11,0,1];level=[1,1,0,1];index=0;dim=1;heckefield=[0,1];den=1;AL=[];primes=[2];eigenvalues=[[-2]];cm=NOT;bc=NA;bound=2";
    assert!(parse(good).is_ok());
    let cases = [
        (good.replace("level=[1,1,0,1]", "level=[1,1,0]"), "level"),
        (good.replace("dim=1", "dim=2"), "dim"),
        (good.replace("cm=NOT", "cm=MAYBE"), "cm"),
        (good.replace("[[-2]]", "[[-2x]]"), "eigenvalues"),
        (good.replace("den=1", "denominator=1"), "den"),
        (format!("{good};extra=1"), "bound"),
    ];
    for (line, near) in cases {
        match parse(&line) {
            Err(Error::Parse { pos, .. }) => assert!(pos >= line.find(near).unwrap(), "{line}: {pos}"),
            other => panic!("{line}: {other:?}"),
        }
    }
    let db = format!("{good}\nfield=oops\n");
    let Err(Error::Parse { msg, .. }) = read_database(&db) else { panic!() };
    assert!(msg.starts_with("line 2"));
}
