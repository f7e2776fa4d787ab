use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{ConstructionError, ConstructionReport};
use crate::numerics::{certified_compare, quotient, BigReal, IntervalReal, LogValue, Precision, Rational, Verdict};
use crate::piecewise::{integral_log, rational_text, PiecewiseLogLinear};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralBound {
    /// `-1/m_0 + sum_{n=1}^{N} 2^-n`.
    pub bound: BigReal,
    /// Enclosure of `ln ∫_0^∞ h`.
    pub log_integral: LogValue,
    pub integral: IntervalReal,
    /// `integral` against `bound`.
    pub verdict: Verdict,
}

pub(super) fn integral_bound_of(
    f: &PiecewiseLogLinear,
    m0: &Rational,
    depth: usize,
    prec: Precision,
) -> Result<IntegralBound, ConstructionError> {
    let tail: Rational = (1..=depth as i64).map(|n| Rational::new(1.into(), num_traits::pow(2.into(), n as usize))).sum();
    let bound = BigReal::from_rational(-m0.recip() + tail);
    let log_integral = integral_log(f, &BigReal::zero(), None, prec)?;
    let integral = log_integral.exp(prec);
    let verdict = certified_compare(&integral, &IntervalReal::point(bound.clone()));
    Ok(IntegralBound { bound, log_integral, integral, verdict })
}

/// The chain bound on `∫_0^∞ h` with the exact enclosure beside it.
pub fn integral_upper_bound(report: &ConstructionReport, prec: Precision) -> Result<IntegralBound, ConstructionError> {
    integral_bound_of(&report.function, &report.levels[0].slope, report.depth, prec)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelContribution {
    pub n: usize,
    /// Window where `x` and `r x` both lie in piece `n`.
    pub lo: BigReal,
    pub hi: BigReal,
    /// Enclosure of `ln c_n`.
    pub log_value: LogValue,
    /// Certified lower bound on `c_n`.
    pub lower: BigReal,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceCertificate {
    #[serde(with = "rational_text")]
    pub r: Rational,
    /// Per-level growth required: `1 / (2 max(r, 1))`.
    #[serde(with = "rational_text")]
    pub threshold: Rational,
    pub start: usize,
    pub contributions: Vec<LevelContribution>,
    /// Running sums of the `lower` bounds.
    pub partial_sums: Vec<BigReal>,
    /// First level from which every later level passes.
    pub threshold_index: usize,
}

/// Lower bounds `c_n` on `∫ h^r(x)/h(rx)` over the window of piece `n`
/// where the ratio is the constant `e^{(r-1) b_n}`, for `n_0 <= n < N`.
pub fn divergence_certificate(
    report: &ConstructionReport,
    r: &Rational,
    n0: usize,
    prec: Precision,
) -> Result<DivergenceCertificate, ConstructionError> {
    if !r.is_positive() {
        return Err(ConstructionError::Argument(format!("r = {r} must be positive")));
    }
    let min_start = r.ceil().to_integer();
    if num_bigint::BigInt::from(n0) < min_start {
        return Err(ConstructionError::Argument(format!("n_0 = {n0} is below ceil(r) = {min_start}")));
    }
    let depth = report.depth;
    if n0 >= depth {
        return Err(ConstructionError::Argument(format!("n_0 = {n0} leaves no level below depth {depth}")));
    }
    let one = Rational::one();
    let threshold = Rational::new(1.into(), 2.into()) / if *r > one { r.clone() } else { one.clone() };
    let threshold_real = BigReal::from_rational(threshold.clone());

    let mut contributions = Vec::new();
    let mut partial_sums = Vec::new();
    let mut sum = BigReal::zero();
    for n in n0..depth {
        let (a, a_next, b) = (&report.levels[n].a, &report.levels[n + 1].a, &report.levels[n].b);
        let (lo, hi) = if *r >= one { (a.clone(), a_next.div_rational(r)) } else { (a.div_rational(r), a_next.clone()) };
        let len = &hi - &lo;
        let (log_value, lower) = if !len.is_positive() {
            (LogValue::NegInfinity, BigReal::zero())
        } else {
            let ln_len = IntervalReal::point(len.clone()).ln(prec)?;
            let log_c = ln_len.add_real(&b.mul_rational(&(r - &one)));
            let lower = if r.is_one() { len } else { IntervalReal::point(log_c.lo().clone()).exp(prec).lo().clone() };
            (LogValue::Finite(log_c), lower)
        };
        sum = &sum + &lower;
        partial_sums.push(sum.clone());
        let passes = lower >= threshold_real;
        contributions.push(LevelContribution { n, lo, hi, log_value, lower, passes });
    }
    let failing_tail = contributions.iter().rev().take_while(|c| c.passes).count();
    if failing_tail == 0 {
        return Err(ConstructionError::Certification {
            level: depth - 1,
            constraint: format!("contribution below {} for r = {}", threshold, r),
        });
    }
    let threshold_index = depth - failing_tail;
    Ok(DivergenceCertificate { r: r.clone(), threshold, start: n0, contributions, partial_sums, threshold_index })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordStep {
    /// Step from level `n` to level `n + 1`.
    pub n: usize,
    /// `|f(a_{n+1})|/a_{n+1}` lies between `|f(a_n)|/a_n` and `|m_n|`.
    pub sandwich: bool,
    pub decreasing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubexponentialReport {
    /// Enclosures of `|f(a_n)| / a_n` for `n = 1..=N`.
    pub chords: Vec<IntervalReal>,
    pub steps: Vec<ChordStep>,
    #[serde(with = "rational_text")]
    pub bound: Rational,
    /// `|f(a_N)| < bound · a_N`, decided exactly.
    pub below_bound: bool,
}

/// Exact chord-slope checks witnessing `f(x)/x -> 0` along the breakpoints.
pub fn subexponential_check(
    report: &ConstructionReport,
    bound: &Rational,
    prec: Precision,
) -> Result<SubexponentialReport, ConstructionError> {
    let f = &report.function;
    let levels = &report.levels;
    let value = |n: usize| -> Result<BigReal, ConstructionError> { Ok(f.eval_exact(&levels[n].a)?.abs()) };
    let mut chords = Vec::new();
    for n in 1..levels.len() {
        chords.push(quotient(&value(n)?, &levels[n].a, prec)?);
    }
    let mut steps = Vec::new();
    for n in 1..report.depth {
        let (f1, a1) = (value(n)?, &levels[n].a);
        let (f2, a2) = (value(n + 1)?, &levels[n + 1].a);
        let m = levels[n].slope.abs();
        // compare f2/a2 with f1/a1 and with m by cross-multiplying positive quantities
        let vs_prev = (&f2 * a1).cmp(&(&f1 * a2));
        let vs_slope = f2.cmp(&a2.mul_rational(&m));
        let sandwich = vs_prev != vs_slope || vs_prev.is_eq();
        steps.push(ChordStep { n, sandwich, decreasing: vs_prev.is_lt() });
    }
    let last = &levels[report.depth];
    let below_bound = value(report.depth)? < last.a.mul_rational(bound);
    Ok(SubexponentialReport { chords, steps, bound: bound.clone(), below_bound })
}
