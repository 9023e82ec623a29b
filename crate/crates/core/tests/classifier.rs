use calabi::ansatz::{profile_from_cone, profile_from_local, profile_from_y};
use calabi::classifier::*;
use calabi::exact::{int, rat};
use calabi::{Field, Rat, Surd};
use proptest::prelude::*;

#[test]
fn scalar_flat_is_quartic() {
    for m in 1..=6 {
        let c = classify(&profile_from_local(m, &int(1), &int(0)).unwrap()).unwrap();
        assert_eq!(c.kind, Kind::CompleteQuarticGrowth);
        assert_eq!(c.p_degree, 2);
        assert!(c.roots.is_empty());
    }
}

#[test]
fn cone_from_local_data() {
    let c = classify(&profile_from_local(1, &int(1), &int(4)).unwrap()).unwrap();
    assert_eq!(c.kind, Kind::ConeAngleCompactification);
    let b = c.b.unwrap();
    let sqrt3 = 3f64.sqrt();
    assert!((b.to_f64() - (1.0 + sqrt3)).abs() < 1e-15);
    assert_eq!(b.multiplicity, 1);
    let w = c.weight.unwrap();
    assert!(w.contains((1.0 + sqrt3) / 2.0));
    assert!((w.approx() - (1.0 + sqrt3) / 2.0).abs() < 1e-15);
    let ang = c.angle_over_2pi.unwrap();
    assert!((ang.approx() - (sqrt3 - 1.0)).abs() < 1e-15);

    // the same profile over Q(√3) gets an exact weight
    let cs = classify(&profile_from_y(1, &int(1), &Surd::from(int(4))).unwrap()).unwrap();
    assert_eq!(cs.kind, Kind::ConeAngleCompactification);
}

#[test]
fn taub_bolt_has_finite_volume() {
    let c = classify(&profile_from_local(1, &int(1), &int(6)).unwrap()).unwrap();
    assert_eq!(c.kind, Kind::CompleteFiniteVolume);
    let b = c.b.unwrap();
    assert_eq!(b.exact(), Some(&int(3)));
    assert_eq!(b.multiplicity, 2);
    assert!(c.weight.is_none());
}

#[test]
fn kahler_einstein_is_exponential() {
    for m in 3..=7u32 {
        let y = int(-4 * (m as i64 - 2));
        let c = classify(&profile_from_local(m, &int(1), &y).unwrap()).unwrap();
        assert_eq!(c.kind, Kind::CompleteExponentialGrowth, "m = {m}");
    }
}

#[test]
fn convexity_failure_is_reported() {
    // p = (r − 1)(r − 2), negative between its roots
    let pr = calabi::ansatz::Profile { m: 1, a: int(1), q0: int(-2), q1: int(3), q3: int(0), q4: int(0) };
    assert!(matches!(classify(&pr), Err(calabi::Error::Convexity(_))));
}

#[test]
fn cone_round_trip_is_exact() {
    for (m, x, w) in [(1, int(3), rat(12, 11)), (1, int(2), int(1)), (3, rat(7, 2), rat(5, 4)), (5, int(9), int(2))] {
        let cp = profile_from_cone(m, &int(1), &x, w.clone()).unwrap();
        let c = classify(&cp.base).unwrap();
        assert_eq!(c.kind, Kind::ConeAngleCompactification);
        assert_eq!(c.b.unwrap().exact(), Some(&x));
        assert_eq!(c.weight.unwrap().exact(), Some(&w));
    }
}

#[test]
fn atlas_examples() {
    let r = atlas_region(3, &int(0)).unwrap();
    assert_eq!(r.location, Location::At(Boundary::ScalarFlat));
    assert_eq!(r.space, Space::TotalSpace);
    assert_eq!(r.metric_type, MetricType::ScalarFlat);
    assert_eq!(r.einstein_scalar_sign, Sign::NotApplicable);

    let r = atlas_region(3, &int(-4)).unwrap();
    assert_eq!(r.location, Location::At(Boundary::KahlerEinstein));
    // y₂ = −4 as well when m = 3
    assert_eq!(r.coincident, vec![Boundary::Y2]);
    assert_eq!(r.metric_type, MetricType::KahlerEinstein);

    let r = atlas_region(4, &int(-1)).unwrap();
    assert_eq!(r.space, Space::Hirzebruch);
    assert_eq!(r.metric_type, MetricType::ConeAngle);
    // y₃ lies in (−1, 0) for m = 4
    assert_eq!(r.location, Location::Between(Some(Boundary::KahlerEinstein), Some(Boundary::Y3)));
    // computed from the Einstein constant; the tabulated sign is the opposite
    assert_eq!(r.einstein_scalar_sign, Sign::Negative);

    let r = atlas_region(4, &int(-12)).unwrap();
    assert_eq!(r.location, Location::At(Boundary::RicciFlat));
    assert_eq!(r.einstein_scalar_sign, Sign::Zero);
    assert!(atlas_region(2, &int(0)).is_err());
}

#[test]
fn v_special_values() {
    for m in 3..=12u32 {
        let v = v_poly(m);
        for y in [-12 * m as i64, -6 * (m as i64 - 2), 0] {
            assert_eq!(v.eval(&int(y)), int(256));
        }
    }
}

#[test]
fn atlas_ordering() {
    assert!(!atlas_ordering_holds(3).unwrap());
    for m in 4..=12 {
        assert!(atlas_ordering_holds(m).unwrap(), "m = {m}");
    }
}

/// 12 rationals strictly inside (lo, hi).
fn grid(lo: &Rat, hi: &Rat) -> Vec<Rat> {
    (1..=12).map(|i| lo + (hi - lo) * rat(i, 13)).collect()
}

#[test]
fn atlas_agrees_with_classification() {
    let tol = rat(1, 1_000_000_000);
    for m in 3..=6u32 {
        let bs = atlas_boundaries(m, &tol).unwrap();
        let val = |b: Boundary| bs.iter().find(|x| x.0 == b).unwrap().1.clone();
        let mi = m as i64;
        let ke = int(-4 * (mi - 2));
        let y3 = val(Boundary::Y3);
        let y1 = val(Boundary::Y1);
        let y2 = val(Boundary::Y2);
        let mut regions = vec![
            (ke.clone(), y3.lo.clone(), Kind::ConeAngleCompactification),
            (y3.hi.clone(), int(0), Kind::ConeAngleCompactification),
            (y1.hi.clone() - int(200), y1.lo.clone(), Kind::IncompleteEnd),
            (y1.hi.clone(), int(-12 * mi), Kind::IncompleteEnd),
            (int(-12 * mi), int(-6 * (mi - 2)), Kind::IncompleteEnd),
            (int(-6 * (mi - 2)), y2.lo.clone(), Kind::IncompleteEnd),
            (int(0), int(100), Kind::IncompleteEnd),
        ];
        if y2.hi < ke {
            regions.push((y2.hi.clone(), ke.clone(), Kind::IncompleteEnd));
        }
        for (lo, hi, kind) in regions {
            for y in grid(&lo, &hi) {
                let c = classify(&profile_from_local(m, &int(1), &y).unwrap()).unwrap();
                assert_eq!(c.kind, kind, "m = {m}, y = {y}");
                assert_eq!(expected_kind(&atlas_region_in(m, &y, &bs).unwrap()), kind, "m = {m}, y = {y}");
            }
        }
    }
}

#[test]
fn hitchin_thorpe_examples() {
    assert!(hitchin_thorpe(1.0));
    assert!(hitchin_thorpe(2.0));
    assert!(hitchin_thorpe(5.0));
    assert!(!hitchin_thorpe(5.01));
    assert!(!hitchin_thorpe(0.0));
    assert!(hitchin_thorpe_exact(&int(5)));
    assert!(!hitchin_thorpe_exact(&rat(501, 100)));
    assert!(hitchin_thorpe_exact(&rat(1, 1000)));
}

fn pos_rat() -> impl Strategy<Value = Rat> {
    (1i64..200, 1i64..30).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_is_scale_invariant(m in 1u32..=6, y in (-300i64..300, 1i64..20), l in pos_rat()) {
        let y = rat(y.0, y.1);
        let p1 = profile_from_local(m, &int(1), &y);
        let p2 = profile_from_local(m, &l, &(&y / &l));
        let (c1, c2) = (classify(&p1.unwrap()), classify(&p2.unwrap()));
        match (c1, c2) {
            (Ok(c1), Ok(c2)) => {
                prop_assert_eq!(c1.kind, c2.kind);
                if let (Some(w1), Some(w2)) = (c1.weight, c2.weight) {
                    prop_assert!((w1.approx() - w2.approx()).abs() < 1e-12);
                }
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "scale changed the outcome"),
        }
    }

    #[test]
    fn hitchin_thorpe_float_matches_exact(n in 1i64..800) {
        let b = rat(n, 100);
        prop_assert_eq!(hitchin_thorpe(b.approx()), hitchin_thorpe_exact(&b));
    }
}
