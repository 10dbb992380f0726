mod common;

use periodfix::{cancel, l_hat_n_minus, n_w, pole_order_at_one, Completion, LExpr, RepRef};
use proptest::prelude::*;
use serde_json::Value;

use common::{datum_strategy, expr};

fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_f64(),
        Value::Array(a) => a.iter().any(has_float),
        Value::Object(o) => o.values().any(has_float),
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cancel_is_idempotent(e in expr()) {
        let once = cancel(&e);
        prop_assert_eq!(cancel(&once), once);
    }

    #[test]
    fn cancel_preserves_pole_order(e in expr()) {
        prop_assert_eq!(pole_order_at_one(&cancel(&e)), pole_order_at_one(&e));
    }

    #[test]
    fn quotient_by_itself_is_one(e in expr()) {
        prop_assume!(!e.is_zero());
        let q = LExpr::product([e.clone(), e.inverse().unwrap()]);
        prop_assert!(cancel(&q).is_one(), "{}", cancel(&q).to_latex());
    }

    #[test]
    fn cancel_ignores_factor_order(a in expr(), b in expr()) {
        prop_assert_eq!(cancel(&(a.clone() * b.clone())), cancel(&(b * a)));
    }

    #[test]
    fn json_round_trip_without_floats(e in expr()) {
        let v = e.to_json();
        prop_assert!(!has_float(&v));
        prop_assert_eq!(LExpr::parse(&v.to_string()).unwrap(), e);
    }

    #[test]
    fn dual_canonicalisation(label in "[a-c]", dualized in any::<bool>()) {
        let dual = format!("{label}*");
        let r = RepRef::new(label.clone(), dual.clone(), dualized);
        prop_assert_eq!(r.clone(), RepRef::new(dual, label, !dualized));
        prop_assert_eq!(r.contragredient().contragredient(), r.clone());
        let c = r.contragredient();
        prop_assert_eq!(c.effective_id(), r.contragredient_id());
    }

    #[test]
    fn telescoping(d in datum_strategy(5, 2, 10), seed in any::<u64>()) {
        let k = d.k();
        let mut sigma: Vec<usize> = (0..k).collect();
        let mut s = seed;
        for i in (1..k).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            sigma.swap(i, (s >> 33) as usize % (i + 1));
        }
        let bp = periodfix::BlockPermutation::from_order(d.composition(), sigma.clone()).unwrap();
        let lhs = cancel(&(n_w(&d, &bp).unwrap() * l_hat_n_minus(&d, &Completion::Complete)));
        prop_assert_eq!(lhs, cancel(&l_hat_n_minus(&d.permuted(&sigma), &Completion::Complete)));
    }
}
