use calabi::exact::{decimal, int, parse_rat, parse_tolerance, rat, to_f64};
use calabi::identity::{identity_check, k, t};
use calabi::roots::{all_real_roots, real_roots_above, real_roots_between, simplest_between};
use calabi::{Error, Field, Poly, Rat, Surd};
use proptest::prelude::*;

fn p(c: &[i64]) -> Poly {
    Poly::from_ints(c)
}

#[test]
fn roots_of_factored_quadratic() {
    let r = real_roots_above(&(&p(&[-1, 1]) * &p(&[2, 1])), &int(0)).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].exact(), Some(&int(1)));
    assert_eq!(r[0].multiplicity, 1);
}

#[test]
fn taub_bolt_roots_with_multiplicity() {
    let f = (&(&p(&[1, 1]) * &p(&[-1, 1])) * &p(&[9, -6, 1])).scale(&rat(1, 8));
    let r = real_roots_above(&f, &int(0)).unwrap();
    let got: Vec<_> = r.iter().map(|x| (x.exact().cloned(), x.multiplicity)).collect();
    assert_eq!(got, vec![(Some(int(1)), 1), (Some(int(3)), 2)]);
}

#[test]
fn no_roots_above_one() {
    // t + m − 1 at m = 3
    assert!(real_roots_above(&p(&[2, 1]), &int(1)).unwrap().is_empty());
}

#[test]
fn zero_polynomial_is_rejected() {
    assert_eq!(real_roots_above(&Poly::<Rat>::zero(), &int(0)), Err(Error::ZeroPolynomial));
}

#[test]
fn irrational_roots_are_bracketed() {
    // t² − 2t − 2, roots 1 ± √3
    let r = all_real_roots(&p(&[-2, -2, 1]), &rat(1, 1_000_000)).unwrap();
    assert_eq!(r.len(), 2);
    assert!((r[1].to_f64() - (1.0 + 3f64.sqrt())).abs() < 1e-6);
    assert!(r[1].width() <= rat(1, 1_000_000));
    assert!(r[0].exact().is_none());
}

#[test]
fn bounded_search() {
    let f = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[-3, 1]);
    let r = real_roots_between(&f, Some(&int(1)), Some(&int(3)), &rat(1, 100)).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].exact(), Some(&int(2)));
}

#[test]
fn roots_over_quadratic_field() {
    // (t − √2)(t + √2)(t − 1) = t³ − t² − 2t + 2 with coefficients in Q(√2) form
    let s2 = Surd::sqrt(&int(2)).unwrap();
    let f: Poly<Surd> = &Poly::new(vec![-s2.clone(), Surd::one()]) * &Poly::from_ints(&[-1, 1]);
    let r = real_roots_above(&f, &int(0)).unwrap();
    assert_eq!(r.len(), 2);
    assert_eq!(r[0].exact(), Some(&int(1)));
    assert!((r[1].to_f64() - 2f64.sqrt()).abs() < 1e-25);
}

use num::One;

#[test]
fn discriminant_examples() {
    assert_eq!(p(&[1, 0, 1]).discriminant().unwrap(), int(-4));
    assert_eq!(p(&[-3, 2, 1]).discriminant().unwrap(), int(16));
    assert_eq!(p(&[1]).discriminant(), Err(Error::DegreeTooSmall(0)));
    assert_eq!(p(&[1, 1]).discriminant(), Err(Error::DegreeTooSmall(1)));
    assert_eq!(Poly::<Rat>::zero().discriminant(), Err(Error::ZeroPolynomial));
    // cubic t³ + a t + b: −4a³ − 27b²
    assert_eq!(p(&[5, -2, 0, 1]).discriminant().unwrap(), int(-4 * -8 - 27 * 25));
}

#[test]
fn simplest_rational() {
    assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
    assert_eq!(simplest_between(&rat(-4, 10), &rat(-3, 10)), rat(-1, 3));
    assert_eq!(simplest_between(&rat(-1, 10), &rat(3, 10)), int(0));
    assert_eq!(simplest_between(&rat(7, 2), &rat(7, 2)), rat(7, 2));
    assert_eq!(simplest_between(&rat(31, 10), &rat(41, 10)), int(4));
}

#[test]
fn parsing_and_printing() {
    assert_eq!(parse_rat("12/11").unwrap(), rat(12, 11));
    assert_eq!(parse_rat("-2.5e-3").unwrap(), rat(-1, 400));
    assert_eq!(parse_rat("2.062").unwrap(), rat(1031, 500));
    assert_eq!(parse_rat(" 7 ").unwrap(), int(7));
    assert!(parse_rat("1/0").is_err());
    assert!(parse_rat("abc").is_err());
    assert!(parse_rat("").is_err());
    assert_eq!(rat(12, 11).to_string(), "12/11");
    assert_eq!(rat(-6, 3).to_string(), "-2");
    assert_eq!(decimal(&rat(2, 3), 5), "0.66667");
    assert_eq!(decimal(&rat(-1, 8), 2), "-0.13");
    assert_eq!(parse_tolerance("40").unwrap(), Rat::new(1.into(), num::pow(num::BigInt::from(10), 40)));
    assert_eq!(parse_tolerance("1/1000").unwrap(), rat(1, 1000));
    assert!(parse_tolerance("2").is_ok());
    assert!(parse_tolerance("0").is_err());
    assert!(parse_tolerance("3/2").is_err());
}

fn v(m: i64) -> Poly {
    p(&[256, 72 * m * (m - 2), 6 * (3 * m - 2), 1])
}

#[test]
fn v_special_values() {
    for m in 3..=8 {
        let vm = v(m);
        for y in [-12 * m, -6 * (m - 2), 0] {
            assert_eq!(vm.eval(&int(y)), int(256));
        }
        assert_eq!(vm.eval(&int(-4 * (m - 2))), int(-64 * m * m * (m - 3)));
    }
    // the same claims as polynomial identities in m, via composition
    let rep = identity_check(|m| v(m).compose(&k(-12 * m)), |_| k(256), 3..=8);
    assert!(rep.holds);
}

#[test]
fn cubic_discriminant_formula() {
    // 96m·ṕ in τ = t − 1: y(y+4(m−2))τ³ + 2y(y−8)τ² + 24m(4−y)τ + 96m²
    let cubic = |m: i64, y: &Rat| -> Poly {
        let mm = int(m);
        Poly::new(vec![
            int(96) * &mm * &mm,
            int(24) * &mm * (int(4) - y),
            int(2) * y * (y - int(8)),
            y * (y + int(4 * (m - 2))),
        ])
    };
    for m in 3..=8 {
        for y in [rat(-7, 3), int(5), rat(1, 9), int(-40), rat(-33, 2)] {
            let direct = cubic(m, &y).discriminant().unwrap();
            let mm = int(m);
            // the factor is y, not y³; both have the same sign so the region table is unaffected
            let formula = int(-768) * &mm * &mm
                * y.clone()
                * (&y + int(6 * (m - 2)))
                * (&y + int(12) * &mm)
                * v(m).eval(&y);
            assert_eq!(direct, formula, "m = {m}, y = {y}");
        }
    }
    // at m = 3, y = −4 the discriminant vanishes
    assert_eq!(cubic(3, &int(-4)).discriminant().unwrap(), int(0));
}

#[test]
fn cone_discriminant_bracket_at_m2() {
    let m = 2;
    let q4 = p(&[(m + 2) * (m + 2), -4 * m * (m + 2), -2 * (3 * m * m + 4), -4 * m * (m - 2), (m - 2) * (m - 2)]);
    assert_eq!(q4, p(&[16, -32, -32]));
    assert!(real_roots_above(&q4, &int(1)).unwrap().is_empty());
    assert!(q4.eval(&int(2)) < int(0));
}

/// Appendix A closing identity: which sign of the constant term makes it hold.
#[test]
fn closing_identity_sign() {
    let x = t;
    let a_cal = |m: i64| p(&[-1, 3 * (m + 1), 3 * (m - 1), 1]).pow(2);
    let b_cal = |m: i64| {
        (&p(&[1, 1]) * &p(&[-1, 1]).pow(3)).scale(&int(3)) - p(&[2, 7, 18, 7, 2]).scale(&int(m))
    };
    let c_cal = |_m: i64| p(&[9, 18, 9]);
    let e = |m: i64| p(&[m + 1, 2 * (m - 1), 1]);
    let lhs = |m: i64| {
        let x2 = &x() + &k(2);
        &(&(&(&x2 * &x2) * &a_cal(m)) + &(&(&x2 * &e(m)) * &b_cal(m)).scale(&int(2)))
            + &(&(&e(m) * &e(m)) * &c_cal(m))
    };
    let minus = |m: i64| (&p(&[-1, -3, 3, 1]) * &p(&[m - 1, 1])).pow(2);
    let plus = |m: i64| (&p(&[1, -3, 3, 1]) * &p(&[m - 1, 1])).pow(2);
    assert!(identity_check(lhs, minus, 1..=12).holds);
    let rep = identity_check(lhs, plus, 1..=12);
    assert!(!rep.holds);
    assert_eq!(rep.failures.len(), 12);
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-20i64..20, 1..7).prop_map(|c| p(&c))
}

fn arb_rooted() -> impl Strategy<Value = Poly> {
    // products of small linear and irreducible quadratic factors, with repetition
    prop::collection::vec((-6i64..6, 1i64..4, 0u8..3), 1..5).prop_map(|fs| {
        fs.iter().fold(p(&[1]), |acc, &(n, d, kind)| match kind {
            0 => &acc * &p(&[-n, d]),
            1 => &acc * &p(&[n * n + 1, 0, 1]),
            _ => &acc * &p(&[-n, 0, d]),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refined_roots_are_accurate(f in arb_rooted()) {
        let roots = all_real_roots(&f, &calabi::exact::default_tolerance()).unwrap();
        let total: u32 = roots.iter().map(|r| r.multiplicity).sum();
        prop_assert!(total as usize <= f.degree().unwrap());
        let scale = f.coeffs().iter().map(|c| to_f64(&c.magnitude())).fold(0.0, f64::max);
        for r in &roots {
            prop_assert!(r.width() <= calabi::exact::default_tolerance());
            let val = to_f64(&f.eval(&r.mid()).magnitude());
            prop_assert!(val < 1e-20 * scale.max(1.0), "residual {val}");
        }
        for w in roots.windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
    }

    #[test]
    fn isolation_is_deterministic(f in arb_rooted()) {
        let tol = rat(1, 1_000_000_000);
        prop_assert_eq!(all_real_roots(&f, &tol).unwrap(), all_real_roots(&f, &tol).unwrap());
    }

    #[test]
    fn discriminant_vanishes_iff_repeated_root(f in arb_poly()) {
        prop_assume!(f.degree().unwrap_or(0) >= 2);
        let repeated = f.gcd(&f.derivative()).degree().unwrap_or(0) > 0;
        prop_assert_eq!(f.discriminant().unwrap() == int(0), repeated);
        let real_repeat = all_real_roots(&f, &rat(1, 1000)).unwrap().iter().any(|r| r.multiplicity > 1);
        if real_repeat {
            prop_assert_eq!(f.discriminant().unwrap(), int(0));
        }
    }

    #[test]
    fn division_and_yun_are_consistent(f in arb_rooted(), g in arb_poly()) {
        prop_assume!(!g.is_zero());
        let (q, r) = f.div_rem(&g);
        prop_assert_eq!(&(&q * &g) + &r, f.clone());
        let rebuilt = f.yun().iter().fold(p(&[1]), |acc, (h, k)| &acc * &h.pow(*k));
        prop_assert_eq!(rebuilt, f.monic());
    }

    #[test]
    fn shift_matches_composition(f in arb_poly(), s in -10i64..10) {
        prop_assert_eq!(f.shift(&int(s)), f.compose(&p(&[s, 1])));
    }

    #[test]
    fn rational_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rat(&r.to_string()).unwrap(), r);
    }
}

#[test]
fn surd_signs_are_exact() {
    let s3 = Surd::sqrt(&int(3)).unwrap();
    let x = s3.clone() - Surd::from(rat(1732050807, 1_000_000_000));
    assert_eq!(x.sign(), 1);
    let y = s3.clone() - Surd::from(rat(1732050808, 1_000_000_000));
    assert_eq!(y.sign(), -1);
    assert_eq!((s3.clone() * s3.clone()).as_rat(), Some(int(3)));
    let w = (Surd::one() + s3.clone()) / Surd::from(int(2));
    assert_eq!(w.inv(), s3 - Surd::one());
    let (lo, hi) = Surd::sqrt(&int(2)).unwrap().enclose(&rat(1, 1_000_000));
    assert!(&hi - &lo <= rat(1, 1_000_000));
    assert!(&lo * &lo <= int(2));
}
