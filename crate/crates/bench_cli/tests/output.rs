use bench_cli::output::{csv_bytes, fmt17, Value};
use proptest::prelude::*;

#[test]
fn seventeen_significant_digits() {
    assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
    assert_eq!(fmt17(28.6), "2.8600000000000001e1");
    assert_eq!(fmt17(0.0), "0.0000000000000000e0");
    assert_eq!(fmt17(f64::NAN), "NaN");
}

#[test]
fn csv_dialect() {
    let head = vec!["p".to_string(), "value".into(), "note".into()];
    let rows = vec![vec![Value::Int(1), Value::Num(0.5), Value::Text("a,b".into())], vec![Value::Int(2), Value::Missing, "ok".into()]];
    let text = String::from_utf8(csv_bytes(&head, &rows).unwrap()).unwrap();
    assert_eq!(text, "p,value,note\n1,5.0000000000000000e-1,\"a,b\"\n2,x,ok\n");
    assert!(!text.contains('\r'));
}

proptest! {
    #[test]
    fn fmt17_round_trips(v in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        prop_assert_eq!(fmt17(v).parse::<f64>().unwrap(), v);
    }
}
