use calabi::exact::{int, rat};
use calabi::jet::Jet;
use calabi::{Poly, Rat};
use proptest::prelude::*;

fn x(order: usize, at: Rat) -> Jet {
    Jet::var(order, 0, at)
}

fn y(order: usize, at: Rat) -> Jet {
    Jet::var(order, 1, at)
}

#[test]
fn product_expands() {
    // (x + y)² about (1, 2): 9 + 6dx + 6dy + dx² + 2dxdy + dy²
    let s = &x(3, int(1)) + &y(3, int(2));
    let sq = &s * &s;
    assert_eq!(sq.value(), &int(9));
    assert_eq!(sq.coeff(1, 0), &int(6));
    assert_eq!(sq.coeff(1, 1), &int(2));
    assert_eq!(sq.coeff(0, 2), &int(1));
    assert_eq!(sq.coeff(3, 0), &int(0));
    assert_eq!(sq.deriv(2, 0), int(2));
}

#[test]
fn geometric_series() {
    let r = x(5, int(1)).recip().unwrap();
    for n in 0..=5 {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(r.coeff(n, 0), &int(sign));
    }
    // d⁴/dx⁴ of 1/x at 1 is 24
    assert_eq!(r.deriv(4, 0), int(24));
    assert!(x(2, int(0)).recip().is_err());
}

#[test]
fn partial_drops_an_order() {
    // x³y about (2, 3)
    let j = &(&x(4, int(2)) * &x(4, int(2))) * &(&x(4, int(2)) * &y(4, int(3)));
    let dx = j.partial(0);
    assert_eq!(dx.order(), 3);
    assert_eq!(dx.value(), &int(36));
    assert_eq!(dx.deriv(0, 1), int(12));
    assert_eq!(j.partial(1).value(), &int(8));
    assert_eq!(j.deriv(3, 1), int(6));
}

#[test]
fn poly_of_a_jet() {
    let p = Poly::from_ints(&[1, 0, -3, 2]);
    let j = Jet::eval_poly(&p, &x(3, rat(1, 2)));
    assert_eq!(j.value(), &p.eval(&rat(1, 2)));
    assert_eq!(j.deriv(1, 0), p.derivative().eval(&rat(1, 2)));
    assert_eq!(j.deriv(2, 0), p.derivative().derivative().eval(&rat(1, 2)));
    assert_eq!(j.deriv(3, 0), int(12));
}

#[test]
fn truncation_follows_the_shorter_operand() {
    let a = x(4, int(1));
    let b = y(2, int(1));
    assert_eq!((&a * &b).order(), 2);
    assert_eq!((&a + &b).order(), 2);
    assert_eq!(a.truncate(1).order(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reciprocal_inverts(c in prop::collection::vec(-9i64..10, 10), v in 1i64..20) {
        let mut j = Jet::constant(3, int(v));
        let (xv, yv) = (x(3, int(0)), y(3, int(0)));
        let monos = [xv.clone(), yv.clone(), &xv * &yv, &xv * &xv, &yv * &yv, &(&xv * &xv) * &yv];
        for (k, m) in monos.iter().enumerate() {
            j = &j + &m.scale(&int(c[k]));
        }
        let one = &j * &j.recip().unwrap();
        prop_assert_eq!(one, Jet::constant(3, int(1)));
        prop_assert_eq!(j.powi(-2).unwrap(), (&j * &j).recip().unwrap());
    }

    #[test]
    fn leibniz(a in -20i64..20, b in -20i64..20) {
        let u = Jet::eval_poly(&Poly::from_ints(&[a, 1, b]), &(&x(3, int(1)) + &y(3, int(2))));
        let v = &x(3, int(1)) * &y(3, int(2));
        let lhs = (&u * &v).partial(0);
        let rhs = &(&u.partial(0) * &v) + &(&u * &v.partial(0));
        prop_assert_eq!(lhs, rhs);
    }
}
