//! Acceptance criteria, one PASS/FAIL line each. Run with `cargo test --test acceptance`.
//!
//! Tolerances are pinned here. A criterion whose failure is exactly a known gap
//! between the stated target and the exact mathematics still prints FAIL, marked
//! "known gap"; only other failures make the binary exit non-zero.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use calabi::ansatz::{einstein_constant, profile_from_cone, profile_from_local, profile_from_y, Profile};
use calabi::classifier::{
    atlas_boundaries, atlas_ordering_holds, atlas_region_in, classify, expected_kind, hitchin_thorpe,
    hitchin_thorpe_exact, Kind,
};
use calabi::conesolver::{
    admissibility, cone_quadratic, limit_profile_minus, limit_profile_plus, m1_disc_quartic, m1_double_weight,
    m1_x0, q4_bracket, weight_asymptotics,
};
use calabi::convexity::certify_positive;
use calabi::curvlab::{beyond_factor_inverse, beyond_limit, conformal_einstein_residual, Point};
use calabi::exact::{default_tolerance, int, rat, to_f64, Rat};
use calabi::geoprobe::{growth_exponent, Model};
use calabi::roots::{real_roots_above, simplest_between};
use calabi::suites::{run_suite, Suite};
use calabi::verify::{interior_window, point_in, verify_profile};
use calabi::{Field, Poly};

const SEED: u64 = 20240611;
/// Growth exponents and rates.
const GROWTH_TOL: f64 = 0.1;
/// The m = 1 double weight against its printed approximation.
const DOUBLE_WEIGHT_TOL: f64 = 1e-2;
/// x²·|remainder| of the weight expansions at x = 10², 10³.
const ASYMPTOTIC_C: f64 = 1e3;

struct Outcome {
    pass: bool,
    /// The failure is the known one and nothing else went wrong.
    known_gap: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, known_gap: false, detail: detail.into() }
}

fn rand_rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rat {
    let d = rng.gen_range(1..=den);
    Rat::new(rng.gen_range(lo * d..=hi * d).into(), d.into())
}

fn unit(rng: &mut ChaCha8Rng) -> Rat {
    let d: i64 = rng.gen_range(2..=48);
    Rat::new(rng.gen_range(1..d).into(), d.into())
}

fn random_points(pr: &Profile, n: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let w = interior_window(pr).unwrap();
    (0..n).map(|_| point_in(&w, &unit(rng), &unit(rng))).collect()
}

// 1
fn bach_flat_identity(rng: &mut ChaCha8Rng) -> Outcome {
    let mut bad = 0;
    for _ in 0..100 {
        let m = rng.gen_range(1..=8u32);
        let mut a = rand_rat(rng, 0, 10, 16);
        if a <= int(0) {
            a = rat(1, 17);
        }
        let s = rand_rat(rng, -20, 20, 16);
        let pr = profile_from_local(m, &a, &s).unwrap();
        if &pr.q3 * &pr.q1 != &pr.q4 * &pr.q0 {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{} of 100 random profiles violate q3 q1 = q4 q0", bad))
}

// 2
fn taub_bolt(rng: &mut ChaCha8Rng) -> Outcome {
    let pr = profile_from_local(1, &int(1), &int(6)).unwrap();
    let q_ok = (pr.q0.clone(), pr.q1.clone(), pr.q3.clone(), pr.q4.clone()) == (rat(9, 8), rat(-3, 4), rat(9, 2), int(-3));
    let scal_ok = pr.scalar_curvature().poly() == Poly::from_ints(&[9, -3]);
    let e = einstein_constant(&pr).unwrap();
    let s_ok = e.from_q == int(0) && e.from_y == int(0);
    let c = classify(&pr).unwrap();
    let b = c.b.as_ref();
    let kind_ok = c.kind == Kind::CompleteFiniteVolume
        && b.is_some_and(|b| b.exact() == Some(&int(3)) && b.multiplicity == 2);
    let pts = random_points(&pr, 10, rng);
    let ce = conformal_einstein_residual(&pr, &pts).unwrap();
    let res_ok = ce.max_residual == int(0);
    let g = growth_exponent(&pr, true).unwrap();
    let exp = match g.model {
        Model::Polynomial { exponent } => exponent,
        _ => f64::NAN,
    };
    let growth_ok = (exp - 3.0).abs() <= GROWTH_TOL;
    outcome(
        q_ok && scal_ok && s_ok && kind_ok && res_ok && growth_ok,
        format!(
            "q {q_ok}, scal {scal_ok}, S = 0 both ways {s_ok}, {} {kind_ok}, residual {} at 10 points, conformal exponent {exp:.4}",
            c.kind, ce.max_residual
        ),
    )
}

// 3
fn cone_anchors() -> Outcome {
    let q = cone_quadratic(1, &int(3)).unwrap();
    let w = q.weights();
    let weight_ok = w.len() == 1 && w[0].value.as_rat() == Some(rat(12, 11));
    let ad = admissibility(1, &int(3), &rat(12, 11)).unwrap();
    let ad_ok = ad.r1 == rat(6, 11) && ad.d == rat(15, 11);
    let quartic_ok = m1_disc_quartic() == Poly::from_ints(&[9, -12, -14, 4, 1]);
    let x0 = m1_x0(&default_tolerance()).unwrap();
    let x0_ok = x0.lo > rat(260, 100) && x0.hi < rat(262, 100);
    let (_, dw) = m1_double_weight().unwrap();
    let dw = to_f64(&dw);
    let dw_ok = (dw - 2.062).abs() <= DOUBLE_WEIGHT_TOL;
    outcome(
        weight_ok && ad_ok && quartic_ok && x0_ok && dw_ok,
        format!(
            "weight 12/11 {weight_ok}, r1 = {} d = {}, x0 = {}, double weight {dw:.4}",
            ad.r1,
            ad.d,
            x0.decimal()
        ),
    )
}

// 4
fn m2_nonexistence(rng: &mut ChaCha8Rng) -> Outcome {
    let q4 = q4_bracket(2);
    let form_ok = q4 == Poly::from_ints(&[16, -32, -32]);
    let no_roots = real_roots_above(&q4, &int(1)).unwrap().is_empty();
    let neg_at_2 = q4.eval(&int(2)) < int(0);
    let mut with_weights = 0;
    for _ in 0..20 {
        let mut x = rand_rat(rng, 1, 100, 32);
        if x <= int(1) {
            x = rat(33, 32);
        }
        if !cone_quadratic(2, &x).unwrap().weights().is_empty() {
            with_weights += 1;
        }
    }
    outcome(
        form_ok && no_roots && neg_at_2 && with_weights == 0,
        format!(
            "bracket {form_ok}, no root above 1 {no_roots}, Q4(2) = {}, {with_weights} of 20 x with weights",
            q4.eval(&int(2))
        ),
    )
}

// 5
fn curvature_identities(rng: &mut ChaCha8Rng) -> Outcome {
    let mut profiles = Vec::new();
    for (m, a, s) in [(1, int(1), int(6)), (2, int(1), int(0)), (3, int(1), int(-4)), (3, rat(3, 2), int(5)), (5, int(2), rat(-7, 3))] {
        profiles.push(profile_from_local(m, &a, &s).unwrap());
    }
    for m in 1..=5u32 {
        // off the Bach-flat locus
        profiles.push(Profile { m, a: int(1), q0: rat(1, 4), q1: rat(-1, 2), q3: int(m as i64), q4: rat(-1, 2) });
    }
    let mut failed = Vec::new();
    let mut points = 0;
    for (i, pr) in profiles.iter().enumerate() {
        let n = if i < 5 { 3 } else { 2 };
        points += n;
        let v = verify_profile(pr, &random_points(pr, n, rng)).unwrap();
        for c in v.checks.iter().filter(|c| !c.pass) {
            failed.push(format!("profile {i}: {} ({})", c.name, c.detail));
        }
    }
    let ok = failed.is_empty();
    let detail = if ok {
        format!("{points} points over {} profiles, all exact checks hold", profiles.len())
    } else {
        failed.join("; ")
    };
    outcome(ok, detail)
}

// 6
fn classification_grid() -> Outcome {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    let mut order_fails = Vec::new();
    for m in 3..=6u32 {
        if !atlas_ordering_holds(m).unwrap() {
            order_fails.push(m);
        }
        let bs = atlas_boundaries(m, &default_tolerance()).unwrap();
        // open regions between consecutive boundaries, plus the two unbounded ones
        let mut edges = vec![bs[0].1.lo.clone() - int(100)];
        for (_, r) in &bs {
            edges.push(r.mid());
        }
        edges.push(int(100));
        let mut ys = Vec::new();
        for w in edges.windows(2) {
            let (lo, hi) = (&w[0] + rat(1, 10_000), &w[1] - rat(1, 10_000));
            if lo >= hi {
                continue;
            }
            let step = (&hi - &lo) / int(50);
            for k in 0..50 {
                let a = &lo + &step * int(k);
                ys.push(simplest_between(&a, &(&a + &step)));
            }
        }
        // rational boundary rows
        for y in [-12 * m as i64, -6 * (m as i64 - 2), -4 * (m as i64 - 2), 0] {
            ys.push(int(y));
        }
        for y in ys {
            let region = atlas_region_in(m, &y, &bs).unwrap();
            let kind = classify(&profile_from_y(m, &int(1), &y).unwrap()).unwrap().kind;
            checked += 1;
            if kind != expected_kind(&region) {
                mismatches.push(format!("m={m} y={y}: {kind} vs {}", expected_kind(&region)));
            }
        }
    }
    let ok = order_fails.is_empty() && mismatches.is_empty();
    let mut o = outcome(
        ok,
        format!(
            "{checked} (m, y) pairs, {} mismatches{}; strict root ordering fails for m in {order_fails:?} (y2 = -4(m-2) = -4 at m = 3)",
            mismatches.len(),
            mismatches.first().map(|s| format!(" (first: {s})")).unwrap_or_default()
        ),
    );
    // v(-4(m-2)) = -64 m^2 (m-3) vanishes at m = 3, so y2 < -4(m-2) cannot be strict there
    o.known_gap = mismatches.is_empty() && order_fails == [3];
    o
}

// 7
fn limit_families() -> Outcome {
    let m = 3i64;
    let plus = Poly::from_ints(&[-1, 1]) * Poly::from_ints(&[m - 1, 1]);
    let minus = (Poly::from_ints(&[-1, 1]) * Poly::from_ints(&[m + 1, m + 1, m - 2])).scale(&rat(1, 3));
    let plus_ok = limit_profile_plus(3).unwrap() == plus;
    let minus_ok = limit_profile_minus(3).unwrap() == minus;
    let a = weight_asymptotics(3, &[int(100), int(1000)]).unwrap();
    let c_ok = a.c_minus == rat(3 * m, m - 2);
    let lead_ok = (a.rows[1].p_plus - 1.5).abs() < 1e-2 && (a.rows[1].p_minus * 1000.0 - 9.0).abs() < 1e-1;
    let rem_ok = a.bound_plus <= ASYMPTOTIC_C && a.bound_minus <= ASYMPTOTIC_C;
    outcome(
        plus_ok && minus_ok && c_ok && lead_ok && rem_ok,
        format!(
            "limit profiles {plus_ok}/{minus_ok}, p- ~ {}/x, x^2 remainders {:.3} / {:.3} (C = {ASYMPTOTIC_C})",
            a.c_minus, a.bound_plus, a.bound_minus
        ),
    )
}

// 8
fn convexity() -> Outcome {
    let mut certified = 0;
    let mut failed = Vec::new();
    for m in [1u32, 3, 4, 5] {
        for k in 0..20i64 {
            let x = if m == 1 { int(3) + rat(k, 2) } else { int(20 * (k + 1)) };
            for w in cone_quadratic(m, &x).unwrap().weights() {
                let cp = profile_from_cone(m, &int(1), &x, w.value.clone()).unwrap();
                match certify_positive(&cp) {
                    Ok(c) if c.positive => certified += 1,
                    _ => failed.push(format!("m={m} x={x} {}", w.branch)),
                }
            }
        }
    }
    let ms: Vec<i64> = (1..=8).collect();
    let suite = run_suite(Suite::AppendixA, &ms).unwrap();
    let suite_ok = suite.iter().all(|i| i.report.holds);
    outcome(
        failed.is_empty() && certified > 0 && suite_ok,
        format!(
            "{certified} cone profiles certified positive, {} failures; closing identity with (x^3+3x^2-3x-1)^2 (x+m-1)^2 exact for m = 1..8: {suite_ok}",
            failed.len()
        ),
    )
}

// 9
fn growth() -> Outcome {
    let poly_exp = |g: &Model| match *g {
        Model::Polynomial { exponent } => exponent,
        _ => f64::NAN,
    };
    let sf = growth_exponent(&profile_from_y(2, &int(1), &int(0)).unwrap(), false).unwrap();
    let e_sf = poly_exp(&sf.model);
    let ke = growth_exponent(&profile_from_y(3, &int(1), &int(-4)).unwrap(), false).unwrap();
    let rate = match ke.model {
        Model::Exponential { rate } => rate,
        _ => f64::NAN,
    };
    let tb = growth_exponent(&profile_from_local(1, &int(1), &int(6)).unwrap(), true).unwrap();
    let e_tb = poly_exp(&tb.model);
    let parts = vec![(e_sf - 4.0).abs() <= GROWTH_TOL, (rate - 2.0).abs() <= GROWTH_TOL, (e_tb - 3.0).abs() <= GROWTH_TOL];
    let mark = |b: bool| if b { "ok" } else { "MISS" };
    let mut o = outcome(
            parts.iter().all(|&b| b),
            format!(
                "scalar-flat m=2 exponent {e_sf:.4} [{}]; Kahler-Einstein m=3 rate {rate:.4} vs target 2 [{}]; Taub-bolt conformal exponent {e_tb:.4} [{}]",
                mark(parts[0]),
                mark(parts[1]),
                mark(parts[2])
            ),
    );
    // log V against distance has slope 2 sqrt(2k) for leading coefficient k = (m-2)/3, not 2
    o.known_gap = parts[0] && parts[2] && !parts[1];
    o
}

// 10
fn beyond(rng: &mut ChaCha8Rng) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (m, a) in [(1u32, int(1)), (3, int(1)), (4, int(1)), (5, int(1)), (4, rat(5, 2))] {
        let pr = profile_from_local(m, &a, &int(0)).unwrap();
        let (lo, mut hi) = interior_window(&pr).unwrap();
        if m > 2 {
            let pole = rat(2 * (m as i64 - 1), m as i64 - 2) * &a;
            hi = hi.min(pole);
        }
        let w = (lo, hi);
        let pts: Vec<Point> = (0..3).map(|_| point_in(&w, &unit(rng), &unit(rng))).collect();
        let b = beyond_limit(m, &a, &pts).unwrap();
        let s = if m == 1 { int(12) / &a } else { -(int(12) * int(m as i64 - 2)) / &a };
        let s_ok = b.scal.iter().all(|x| *x == s);
        let res_ok = b.max_residual == int(0);
        let pole_ok = match &b.pole_ratio {
            Some(k) => {
                *k == rat(2 * (m as i64 - 1), m as i64 - 2) && beyond_factor_inverse(m, &a).eval(&(k * &a)) == int(0)
            }
            None => m <= 2,
        };
        ok &= s_ok && res_ok && pole_ok;
        notes.push(format!("m={m} a={a}: S={} res={}", b.scal[0], b.max_residual));
    }
    outcome(ok, notes.join(", "))
}

// 11
fn hitchin_thorpe_check() -> Outcome {
    let inside = (1..=500).all(|k| hitchin_thorpe_exact(&rat(k, 100)) && hitchin_thorpe(k as f64 / 100.0));
    let outside = (1..=500).all(|k| !hitchin_thorpe_exact(&(int(5) + rat(k, 100))) && !hitchin_thorpe(5.0 + k as f64 / 100.0));
    let mut angles = 0;
    let mut bad = 0;
    for k in 0..40i64 {
        let x = rat(27, 10) + rat(k, 3);
        for w in cone_quadratic(1, &x).unwrap().weights() {
            let beta = w.value.inv().approx();
            angles += 1;
            if !(beta > 0.0 && beta < 2.0) {
                bad += 1;
            }
        }
    }
    outcome(
        inside && outside && angles > 0 && bad == 0,
        format!("(0, 5] true {inside}, (5, 10] false {outside}, {angles} m=1 solver angles with {bad} outside (0, 4 pi)"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let criteria: Vec<(&str, &str, Box<dyn Fn(&mut ChaCha8Rng) -> Outcome>)> = vec![
        ("1", "Bach-flat identity, exact", Box::new(bach_flat_identity)),
        ("2", "Taub-bolt chain, exact", Box::new(taub_bolt)),
        ("3", "cone solver anchor values", Box::new(|_| cone_anchors())),
        ("4", "m = 2 nonexistence", Box::new(m2_nonexistence)),
        ("5", "exact curvature identities", Box::new(curvature_identities)),
        ("6", "globalization classification grid", Box::new(|_| classification_grid())),
        ("7", "cone-angle limit families", Box::new(|_| limit_families())),
        ("8", "convexity certification", Box::new(|_| convexity())),
        ("9", "growth exponents", Box::new(|_| growth())),
        ("10", "limits beyond the Einstein range", Box::new(beyond)),
        ("11", "Hitchin-Thorpe", Box::new(|_| hitchin_thorpe_check())),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (id, name, f) in &criteria {
        let t = Instant::now();
        let o = f(&mut rng);
        let tag = match (o.pass, o.known_gap) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known gap)",
            (false, false) => "FAIL",
        };
        println!("{tag} {id:>2} {name} [{:.1}s]: {}", t.elapsed().as_secs_f64(), o.detail);
        if o.pass {
            passed += 1;
        } else if !o.known_gap {
            unexpected += 1;
        }
    }
    let results = &criteria;
    println!("acceptance: {passed}/{} PASS in {:.1}s", results.len(), start.elapsed().as_secs_f64());
    if unexpected > 0 {
        println!("acceptance: {unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
