mod common;

use common::{convex_fn, positive, q, rational};
use logconvex::numerics::{BigReal, LogValue, Precision, Rational};
use logconvex::piecewise::{integral_log, maximal_function, ratio_transform, segment_integral_log, PiecewiseLogLinear};
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

const P: Precision = Precision::DEFAULT;

fn f64_of(q: &Rational) -> f64 {
    q.to_f64().unwrap()
}

/// Double-exponential quadrature of `e^{mx+b}`, refined to a relative target.
fn oracle(m: f64, b: f64, x1: f64, x2: f64) -> f64 {
    let f = |x: f64| (m * x + b).exp();
    let rough = quadrature::integrate(f, x1, x2, 1e-6).integral;
    quadrature::integrate(f, x1, x2, rough.abs() * 1e-15).integral
}

fn real(q: &Rational) -> BigReal {
    BigReal::from_rational(q.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn segment_matches_quadrature(
        m in rational(-4, 4, 16),
        b in rational(-30, 30, 8),
        x1 in rational(0, 40, 4),
        len in positive(20, 16),
        tail in any::<bool>(),
    ) {
        let tail = tail && m.is_negative();
        let x2 = &x1 + &len;
        let hi = real(&x2);
        let got = segment_integral_log(&m, &real(&b), &real(&x1), if tail { None } else { Some(&hi) }, P).unwrap();
        let got = got.exp(P);
        let (mf, bf, a) = (f64_of(&m), f64_of(&b), f64_of(&x1));
        let end = if tail { a + 45.0 / mf.abs() } else { f64_of(&x2) };
        let want = oracle(mf, bf, a, end);
        let rel = (got.mid_f64() - want).abs() / want;
        prop_assert!(rel < 1e-10, "m={m} b={b} [{a}, {end}] got {} want {want}", got.mid_f64());
    }

    #[test]
    fn continuity_is_exact(f in convex_fn()) {
        let pieces = f.pieces();
        for w in pieces.windows(2) {
            prop_assert_eq!(w[0].value_at(&w[1].lo), w[1].value_at(&w[1].lo));
        }
    }

    #[test]
    fn transform_is_consistent(f in convex_fn(), r in positive(6, 6), x in rational(0, 60, 8)) {
        let g = ratio_transform(&f, &r).unwrap();
        let x = real(&x);
        let want = &f.eval_exact(&x).unwrap().mul_rational(&r) - &f.eval_exact(&x.mul_rational(&r)).unwrap();
        prop_assert_eq!(g.eval_exact(&x).unwrap(), want.clone());
        prop_assert!(g.eval_log(&x).unwrap().contains(&want));
    }

    #[test]
    fn supporting_line_bounds_transform(f in convex_fn(), r in positive(6, 6)) {
        let g = ratio_transform(&f, &r).unwrap();
        let one = Rational::from_integer(1.into());
        let mut points: Vec<BigReal> = g.breakpoints().cloned().collect();
        points.extend(f.breakpoints().cloned());
        points.push(BigReal::zero());
        for p in f.pieces() {
            let cap = p.intercept.mul_rational(&(&r - &one));
            for x in &points {
                let inside = *x >= p.lo && p.hi.as_ref().is_none_or(|h| x <= h);
                if inside {
                    prop_assert!(g.eval_exact(x).unwrap() <= cap, "x = {x}");
                }
            }
        }
    }

    #[test]
    fn maximal_function_on_convex(f in convex_fn(), a in prop::collection::vec(positive(80, 8), 10)) {
        for a in a {
            let a = real(&a);
            let res = maximal_function(&f, &a).unwrap();
            prop_assert_eq!(&res.argmax, &a);
            let want = &f.eval_exact(&a).unwrap() - &f.eval_exact(&a.mul_rational(&q(2, 1))).unwrap();
            prop_assert!(res.log_value.contains(&want));
        }
    }

    #[test]
    fn shifting_intercepts_shifts_the_log(f in convex_fn(), c in rational(-50, 50, 7), x in positive(50, 3)) {
        let c = real(&c);
        let hi = real(&x);
        let base = integral_log(&f, &BigReal::zero(), Some(&hi), P).unwrap();
        let moved = integral_log(&f.shifted(&c), &BigReal::zero(), Some(&hi), P).unwrap();
        match (base, moved) {
            (LogValue::Finite(a), LogValue::Finite(b)) => {
                prop_assert!(b.overlaps(&a.add_real(&c)));
                let lo_gap = b.lo() - a.lo();
                let hi_gap = b.hi() - a.hi();
                let slack = &a.width() + &b.width();
                prop_assert!((&lo_gap - &c).abs() <= slack && (&hi_gap - &c).abs() <= slack);
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }
}

#[test]
fn two_piece_examples() {
    let f = PiecewiseLogLinear::from_slopes(
        BigReal::zero(),
        &[q(-1, 1), q(-1, 2)],
        &[BigReal::from_int(2)],
        logconvex::piecewise::Convexity::Convex,
    )
    .unwrap();
    assert_eq!(f.eval_exact(&BigReal::from_int(2)).unwrap(), BigReal::from_int(-2));
    let res = maximal_function(&f, &BigReal::from_int(2)).unwrap();
    assert_eq!(res.argmax, BigReal::from_int(2));
    assert!(res.log_value.contains(&BigReal::one()));
    // ∫_0^∞ h = (1 - e^-2) + 2 e^-2 = 1 + e^-2
    let total = integral_log(&f, &BigReal::zero(), None, P).unwrap().exp(P);
    assert!((total.mid_f64() - (1.0 + (-2f64).exp())).abs() < 1e-15);
}
