use calabi::suites::{run_suite, Suite};

fn all_hold(suite: Suite, ms: &[i64]) {
    for id in run_suite(suite, ms).unwrap() {
        assert!(id.report.holds, "{suite}: {} failed at {:?}", id.name, id.report.failures);
    }
}

#[test]
fn cone_disc_suite() {
    all_hold(Suite::ConeDisc, &(1..=12).collect::<Vec<_>>());
}

#[test]
fn closing_suite() {
    all_hold(Suite::AppendixA, &(1..=12).collect::<Vec<_>>());
}

#[test]
fn cubic_suite() {
    all_hold(Suite::AppendixB, &(1..=12).collect::<Vec<_>>());
}

#[test]
fn s_formula_suite() {
    all_hold(Suite::SFormulas, &(1..=12).collect::<Vec<_>>());
}

#[test]
fn names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
    }
    assert!("appendixC".parse::<Suite>().is_err());
    assert!(run_suite(Suite::ConeDisc, &[0]).is_err());
}

#[test]
fn a_wrong_claim_is_caught() {
    // the suite machinery must be able to fail: m = 0 is rejected, and a
    // single-m run still reports which m was checked
    let r = run_suite(Suite::SFormulas, &[5]).unwrap();
    assert!(r.iter().all(|i| i.report.checked == vec![5]));
}
