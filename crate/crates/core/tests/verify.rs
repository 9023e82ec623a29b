use calabi::ansatz::{profile_from_local, Profile};
use calabi::exact::{int, rat};
use calabi::verify::{interior_window, point_in, verify_profile, weyl_plus_expected};

fn points(pr: &Profile) -> Vec<calabi::curvlab::Point> {
    let w = interior_window(pr).unwrap();
    [(rat(1, 3), rat(1, 2)), (rat(2, 7), rat(1, 5)), (rat(5, 6), rat(3, 4))]
        .iter()
        .map(|(u, t)| point_in(&w, u, t))
        .collect()
}

#[test]
fn taub_bolt_passes_everything() {
    let pr = profile_from_local(1, &int(1), &int(6)).unwrap();
    assert_eq!(interior_window(&pr).unwrap(), (int(1), int(3)));
    let v = verify_profile(&pr, &points(&pr)).unwrap();
    assert!(v.passed(), "{:?}", v.checks);
    assert_eq!(v.einstein_constant, int(0));
    assert_eq!(v.checks.len(), 8);
}

#[test]
fn non_bach_flat_profile_reports_nonzero_bach() {
    let pr = Profile { m: 2, a: int(1), q0: rat(1, 4), q1: rat(-1, 2), q3: int(1), q4: int(-1) };
    assert!(!pr.is_bach_flat());
    let v = verify_profile(&pr, &points(&pr)).unwrap();
    assert!(v.passed(), "{:?}", v.checks);
    assert!(v.checks.iter().all(|c| c.name != "conformal_einstein"));
}

#[test]
fn expected_spectrum_is_traceless() {
    let p = weyl_plus_expected(&rat(7, 2));
    assert_eq!(p.coeff(2), int(0));
    assert_eq!(p.eval(&rat(7, 12)), int(0));
}

#[test]
fn empty_point_list_is_a_usage_error() {
    let pr = profile_from_local(1, &int(1), &int(6)).unwrap();
    assert_eq!(verify_profile(&pr, &[]).unwrap_err().exit_code(), 2);
}
