//! Named exact identity suites, run for every m in a range.

use std::fmt;
use std::str::FromStr;

use crate::ansatz::{einstein_constant_y_form, profile_from_y};
use crate::classifier::v_poly;
use crate::conesolver::{disc_identity, q4_bracket};
use crate::convexity::{appendix_a, closing_combination, r1_r2_combination};
use crate::error::{Error, Result};
use crate::exact::{int, rat, Rat};
use crate::identity::{identity_check, k, t, IdentityReport};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ConeDisc,
    AppendixA,
    AppendixB,
    SFormulas,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::ConeDisc, Suite::AppendixA, Suite::AppendixB, Suite::SFormulas];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::ConeDisc => "coneDisc",
            Suite::AppendixA => "appendixA",
            Suite::AppendixB => "appendixB",
            Suite::SFormulas => "sFormulas",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown suite {s:?}; expected coneDisc, appendixA, appendixB or sFormulas")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedIdentity {
    pub name: &'static str,
    pub report: IdentityReport,
}

fn named(name: &'static str, report: IdentityReport) -> NamedIdentity {
    NamedIdentity { name, report }
}

/// A pointwise check recorded as a constant identity: the failure carries lhs − rhs.
fn pointwise<I, F>(ms: I, f: F) -> IdentityReport
where
    I: IntoIterator<Item = i64>,
    F: Fn(i64) -> Rat,
{
    identity_check(|m| Poly::constant(f(m)), |_| Poly::zero(), ms)
}

pub fn run_suite(suite: Suite, ms: &[i64]) -> Result<Vec<NamedIdentity>> {
    if ms.iter().any(|&m| m < 1) {
        return Err(Error::Parameter("m must be positive".into()));
    }
    let ms = ms.to_vec();
    let it = || ms.iter().copied();
    Ok(match suite {
        Suite::ConeDisc => vec![
            named("discriminant = m^2 (x^2+4x+1)^2 Q4", disc_identity(it())),
            named(
                "Q4 at m = 2 is 16 - 32x - 32x^2",
                identity_check(|_| q4_bracket(2), |_| Poly::from_ints(&[16, -32, -32]), [2]),
            ),
        ],
        Suite::AppendixA => vec![
            named(
                "closing combination = (x^3+3x^2-3x-1)^2 (x+m-1)^2",
                identity_check(
                    |m| closing_combination(m as u32),
                    |m| (&Poly::from_ints(&[-1, -3, 3, 1]) * &Poly::from_ints(&[m - 1, 1])).pow(2),
                    it(),
                ),
            ),
            named(
                "(2x^2+5x-1) S1 + 3(x+1) S2 = 2(x-1)^2 (x+m-1)(x^2+4x+1)",
                identity_check(
                    |m| r1_r2_combination(m as u32),
                    |m| {
                        (&(&Poly::from_ints(&[1, -2, 1]) * &Poly::from_ints(&[m - 1, 1])) * &Poly::from_ints(&[1, 4, 1]))
                            .scale(&int(2))
                    },
                    it(),
                ),
            ),
            named(
                "alpha^2 - 4 beta = (A p^2 + 2mxBp + m^2x^2C) / D^2 on a grid",
                pointwise(it(), |m| {
                    let mut worst = int(0);
                    for x in [rat(3, 2), int(3), rat(17, 4)] {
                        for w in [rat(1, 3), int(1), rat(12, 11), int(5)] {
                            if let Ok(aq) = appendix_a(m as u32, &int(1), &x, &w) {
                                let d = &aq.disc - &aq.disc_formula;
                                if d != int(0) {
                                    worst = d;
                                }
                            }
                        }
                    }
                    worst
                }),
            ),
        ],
        Suite::AppendixB => {
            let y = t();
            let cubic = |m: i64| -> [Poly; 4] {
                [
                    k(96 * m * m),
                    (&k(4) - &y).scale(&int(24 * m)),
                    (&y * &(&y - &k(8))).scale(&int(2)),
                    &y * &(&y + &k(4 * (m - 2))),
                ]
            };
            vec![
                named(
                    "disc of 96m p(1+tau)/tau = -768 m^2 y (y+6(m-2)) (y+12m) v(y)",
                    identity_check(
                        |m| {
                            let [d, c, b, a] = cubic(m);
                            let t1 = &(&b * &b) * &(&c * &c);
                            let t2 = (&a * &c.pow(3)).scale(&int(4));
                            let t3 = (&b.pow(3) * &d).scale(&int(4));
                            let t4 = (&(&a * &a) * &(&d * &d)).scale(&int(27));
                            let t5 = (&(&a * &b) * &(&c * &d)).scale(&int(18));
                            &(&(&(&t1 - &t2) - &t3) - &t4) + &t5
                        },
                        |m| {
                            let f = &(&y * &(&y + &k(6 * (m - 2)))) * &(&y + &k(12 * m));
                            (&f * &v_poly(m as u32)).scale(&int(-768 * m * m))
                        },
                        it(),
                    ),
                ),
                named(
                    "cubic matches 96m p(1+tau)/tau of the profile",
                    pointwise(it(), |m| {
                        let mut worst = int(0);
                        for yv in [rat(-7, 3), int(5), int(-40)] {
                            let pr = profile_from_y(m as u32, &int(1), &yv).unwrap();
                            // p(1) = 0, so p(1+tau)/tau is the cubic
                            let shifted = pr.p_tilde().shift(&int(1)).scale(&int(96 * m));
                            if shifted.coeff(0) != int(0) {
                                return shifted.coeff(0);
                            }
                            let lhs = Poly::new(shifted.coeffs()[1..].to_vec());
                            let rhs = Poly::new(cubic(m).iter().map(|c| c.eval(&yv)).collect());
                            let d = &lhs - &rhs;
                            if !d.is_zero() {
                                worst = d.leading();
                            }
                        }
                        worst
                    }),
                ),
                named(
                    "v(-12m) = v(-6(m-2)) = v(0) = 256",
                    identity_check(
                        |m| {
                            let v = v_poly(m as u32);
                            Poly::new(vec![v.eval(&int(-12 * m)), v.eval(&int(-6 * (m - 2))), v.eval(&int(0))])
                        },
                        |_| Poly::from_ints(&[256, 256, 256]),
                        it(),
                    ),
                ),
                named(
                    "v(-4(m-2)) = -64 m^2 (m-3)",
                    identity_check(
                        |m| Poly::constant(v_poly(m as u32).eval(&int(-4 * (m - 2)))),
                        |m| k(-64 * m * m * (m - 3)),
                        it(),
                    ),
                ),
            ]
        }
        Suite::SFormulas => {
            // local coefficients at a = 1 as polynomials in y
            let y = t();
            let q = |m: i64| -> [Poly; 4] {
                let mf = rat(1, m);
                [
                    (&(&y + &k(8 * m - 8)) * &(&y + &k(12 * m))).scale(&(&mf / int(96))),
                    (&(&y + &k(4 * m - 8)) * &(&y + &k(12 * m))).scale(&(-&mf / int(48))),
                    (&y * &(&y + &k(8 * (m - 1)))).scale(&(&mf / int(8))),
                    (&y * &(&y + &k(4 * (m - 2)))).scale(&(-&mf / int(4))),
                ]
            };
            vec![
                named(
                    "scal(a) = 2 q3 + q4 a = y",
                    identity_check(|m| { let [_, _, q3, q4] = q(m); &q3.scale(&int(2)) + &q4 }, |_| y.clone(), it()),
                ),
                named(
                    "Bach-flat: q3 q1 = q4 q0",
                    identity_check(|m| { let [q0, q1, q3, q4] = q(m); &(&q3 * &q1) - &(&q4 * &q0) }, |_| Poly::zero(), it()),
                ),
                named(
                    "p(a) = 0 and p'(a) = m a",
                    identity_check(
                        |m| {
                            let [q0, q1, q3, q4] = q(m);
                            let p0 = &(&(&(&k(1) - &q0) - &q1) - &q3.scale(&rat(1, 6))) - &q4.scale(&rat(1, 24));
                            let p1 = &(&(&k(2) - &q1) - &q3.scale(&rat(1, 2))) - &q4.scale(&rat(1, 6));
                            &p0 + &(&p1 - &k(m)).scale(&int(2))
                        },
                        |_| Poly::zero(),
                        it(),
                    ),
                ),
                named(
                    "S = 12 q4^2 q1 + 8 q3^3 + 48 q3 q4 = -2 y^2 (y + 6(m-2))",
                    identity_check(
                        |m| {
                            let [_, q1, q3, q4] = q(m);
                            &(&(&(&q4 * &q4) * &q1).scale(&int(12)) + &q3.pow(3).scale(&int(8)))
                                + &(&q3 * &q4).scale(&int(48))
                        },
                        |m| (&(&y * &y) * &(&y + &k(6 * (m - 2)))).scale(&int(-2)),
                        it(),
                    ),
                ),
                named(
                    "profile_from_y agrees with the polynomial coefficients",
                    pointwise(it(), |m| {
                        let mut worst = int(0);
                        for yv in [rat(-9, 2), int(0), int(6), rat(13, 7)] {
                            let pr = profile_from_y(m as u32, &int(1), &yv).unwrap();
                            let [q0, q1, q3, q4] = q(m).map(|c| c.eval(&yv));
                            for d in [&pr.q0 - q0.clone(), &pr.q1 - q1.clone(), &pr.q3 - q3.clone(), &pr.q4 - q4.clone()] {
                                if d != int(0) {
                                    worst = d;
                                }
                            }
                            let e = einstein_constant_y_form(m as u32, &int(1), &yv);
                            let s = int(-2) * &yv * &yv * (&yv + int(6 * (m - 2)));
                            if e != s {
                                worst = e - s;
                            }
                        }
                        worst
                    }),
                ),
            ]
        }
    })
}
