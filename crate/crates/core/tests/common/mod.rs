#![allow(dead_code)]

use logconvex::numerics::{BigReal, Rational};
use logconvex::piecewise::{Convexity, PiecewiseLogLinear};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational(lo: i64, hi: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den).prop_flat_map(move |d| (lo * d..=hi * d).prop_map(move |n| q(n, d)))
}

pub fn positive(hi: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den).prop_flat_map(move |d| (1..=hi * d).prop_map(move |n| q(n, d)))
}

/// Convex `F` with sorted distinct slopes and breakpoints at cumulative gaps.
pub fn build(b0: Rational, mut slopes: Vec<Rational>, gaps: &[Rational]) -> PiecewiseLogLinear {
    slopes.sort();
    slopes.dedup();
    let mut at = Rational::from_integer(0.into());
    let mut breaks = Vec::new();
    for g in gaps.iter().take(slopes.len() - 1) {
        at += g;
        breaks.push(BigReal::from_rational(at.clone()));
    }
    PiecewiseLogLinear::from_slopes(BigReal::from_rational(b0), &slopes, &breaks, Convexity::Convex)
        .expect("sorted slopes give a convex function")
}

fn with_slopes(slope: BoxedStrategy<Rational>) -> impl Strategy<Value = PiecewiseLogLinear> {
    (
        rational(-6, 6, 4),
        prop::collection::vec(slope, 1..6),
        prop::collection::vec(positive(12, 4), 6),
    )
        .prop_map(|(b0, slopes, gaps)| build(b0, slopes, &gaps))
}

pub fn convex_fn() -> impl Strategy<Value = PiecewiseLogLinear> {
    with_slopes(rational(-5, 3, 8).boxed())
}

/// Every slope `<= 0`.
pub fn decreasing_fn() -> impl Strategy<Value = PiecewiseLogLinear> {
    with_slopes(rational(-5, 0, 8).boxed())
}

/// At least one positive slope.
pub fn increasing_fn() -> impl Strategy<Value = PiecewiseLogLinear> {
    (
        rational(-6, 6, 4),
        prop::collection::vec(rational(-5, 3, 8), 0..5),
        positive(3, 8),
        prop::collection::vec(positive(12, 4), 6),
    )
        .prop_map(|(b0, mut slopes, up, gaps)| {
            slopes.push(up);
            build(b0, slopes, &gaps)
        })
}
