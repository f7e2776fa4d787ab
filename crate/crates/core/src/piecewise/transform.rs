use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{Convexity, PiecewiseError, PiecewiseLogLinear};
use crate::numerics::{BigReal, IntervalReal, Rational};

/// `g_r` with `log g_r(x) = r f(x) - f(r x)`, computed exactly.
pub fn ratio_transform(f: &PiecewiseLogLinear, r: &Rational) -> Result<PiecewiseLogLinear, PiecewiseError> {
    if !r.is_positive() {
        return Err(PiecewiseError::Domain(format!("r = {r}")));
    }
    let mut points: Vec<BigReal> = f.pieces().iter().map(|p| p.lo.clone()).collect();
    if !r.is_one() {
        points.extend(f.breakpoints().map(|a| a.div_rational(r)));
    }
    points.sort();
    points.dedup();

    let mut parts: Vec<(Rational, BigReal, BigReal)> = Vec::with_capacity(points.len());
    for x in points {
        let inner = &f.pieces()[f.piece_index(&x)?];
        let outer = &f.pieces()[f.piece_index(&x.mul_rational(r))?];
        let slope = r * (&inner.slope - &outer.slope);
        let intercept = &inner.intercept.mul_rational(r) - &outer.intercept;
        if let Some((s, b, _)) = parts.last() {
            if *s == slope && *b == intercept {
                continue;
            }
        }
        parts.push((slope, intercept, x));
    }
    PiecewiseLogLinear::new(parts, Convexity::None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Attainment {
    AtPoint,
    SupremumAtInfinity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalResult {
    /// Enclosure of `ln H_h(a)`.
    pub log_value: IntervalReal,
    /// Smallest maximizing `b`.
    pub argmax: BigReal,
    pub attained: Attainment,
}

/// `ln H_h(a) = max_{b >= a} f(b) - f(a + b)`.
///
/// The objective is linear between the candidates and constant past the
/// last one, so the maximum over the candidates is exact.
pub fn maximal_function(f: &PiecewiseLogLinear, a: &BigReal) -> Result<MaximalResult, PiecewiseError> {
    if !a.is_positive() {
        return Err(PiecewiseError::Domain(a.to_string()));
    }
    let mut candidates = vec![a.clone()];
    for k in f.breakpoints() {
        if k >= a {
            candidates.push(k.clone());
        }
        let shifted = k - a;
        if &shifted >= a {
            candidates.push(shifted);
        }
    }
    candidates.sort();
    candidates.dedup();

    let mut best: Option<(BigReal, BigReal)> = None;
    for b in candidates {
        let phi = &f.eval_exact(&b)? - &f.eval_exact(&(&b + a))?;
        if best.as_ref().map_or(true, |(v, _)| phi > *v) {
            best = Some((phi, b));
        }
    }
    let (value, argmax) = best.expect("a is always a candidate");
    Ok(MaximalResult { log_value: IntervalReal::point(value), argmax, attained: Attainment::AtPoint })
}
