//! The monotonicity dichotomy for log-convex `h`, the ratio condition
//! `h(n)/h(n+1) -> 1`, the integral comparison it forces, and the `x^x`
//! example.

mod xx;

pub use xx::{xx_demo, RatioPoint, XxPartial, XxReport};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{BigReal, IntervalReal, LogValue, NumericsError, Precision, Rational};
use crate::piecewise::{integral_log, rational_text, ratio_transform, Convexity, PiecewiseError, PiecewiseLogLinear};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TheoremError {
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Piecewise(#[from] PiecewiseError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MonotonicityVerdict {
    /// Every slope is `<= 0`, so `h` is nonincreasing on `(0, ∞)`.
    DecreasingEverywhere,
    /// `f(n+1) - f(n) >= gap` for every integer `n > threshold`.
    IncreasingBeyond {
        threshold: BigReal,
        #[serde(with = "rational_text")]
        gap: Rational,
    },
}

fn require_convex(f: &PiecewiseLogLinear) -> Result<(), TheoremError> {
    if f.convexity() == Convexity::None {
        return Err(TheoremError::Domain("function is not marked convex".into()));
    }
    Ok(())
}

/// A zero tail slope counts as decreasing.
pub fn classify_monotonicity(f: &PiecewiseLogLinear) -> Result<MonotonicityVerdict, TheoremError> {
    require_convex(f)?;
    match f.pieces().iter().find(|p| p.slope.is_positive()) {
        None => Ok(MonotonicityVerdict::DecreasingEverywhere),
        Some(p) => Ok(MonotonicityVerdict::IncreasingBeyond { threshold: p.lo.clone(), gap: p.slope.clone() }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub n: u64,
    /// `ln(h(n)/h(n+1)) = f(n) - f(n+1)`, exact.
    pub log_ratio: BigReal,
    /// Enclosure of `|h(n)/h(n+1) - 1|`.
    pub deviation: IntervalReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum RatioVerdict {
    /// Slopes tend to 0 along the available pieces.
    Holds,
    /// Ratios stay at least `e^gap` away from 1 in the tail.
    Fails {
        #[serde(with = "rational_text")]
        gap: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioConditionReport {
    pub samples: Vec<RatioSample>,
    /// `|m_k|` for each piece.
    #[serde(with = "rational_list")]
    pub slope_magnitudes: Vec<Rational>,
    pub verdict: RatioVerdict,
}

mod rational_list {
    use crate::numerics::{parse_rational, Rational};
    use crate::piecewise::format_rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Samples `h(n)/h(n+1)` for `n = 1..=n_max` and reads the verdict off the
/// slope trend: a finite prefix can only show the trend, not the limit.
pub fn ratio_condition_check(
    f: &PiecewiseLogLinear,
    n_max: u64,
    prec: Precision,
) -> Result<RatioConditionReport, TheoremError> {
    if n_max < 2 {
        return Err(TheoremError::Domain(format!("n_max = {n_max} must be at least 2")));
    }
    let one = IntervalReal::from_int(1);
    let mut samples = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let x = BigReal::from_int(n as i64);
        let log_ratio = &f.eval_exact(&x)? - &f.eval_exact(&(&x + &BigReal::one()))?;
        let d = IntervalReal::point(log_ratio.clone()).exp(prec).sub(&one);
        let deviation = if d.lo().is_negative() && d.hi().is_positive() {
            IntervalReal::new(BigReal::zero(), d.lo().abs().max_ref(d.hi()).clone())
        } else if d.hi().is_positive() || d.hi().is_zero() {
            d
        } else {
            d.neg()
        };
        samples.push(RatioSample { n, log_ratio, deviation });
    }
    let slope_magnitudes: Vec<Rational> = f.pieces().iter().map(|p| p.slope.abs()).collect();
    let last = f.last().slope.clone();
    let verdict = if let Some(p) = f.pieces().iter().find(|p| p.slope.is_positive()) {
        RatioVerdict::Fails { gap: p.slope.clone() }
    } else if last.is_zero() || (slope_magnitudes.len() >= 2 && slope_magnitudes.windows(2).all(|w| w[1] < w[0])) {
        RatioVerdict::Holds
    } else {
        RatioVerdict::Fails { gap: last.abs() }
    };
    Ok(RatioConditionReport { samples, slope_magnitudes, verdict })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowComparison {
    pub x: BigReal,
    pub log_h: LogValue,
    pub log_g2: LogValue,
    /// Both endpoints of the `h` enclosure are at most those of `g_2`.
    pub ordered: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch")]
pub enum Theorem15Branch {
    Decreasing {
        /// Points where `f(2x) <= f(x)` was checked exactly.
        checked_points: usize,
        pointwise_holds: bool,
        /// `ln ∫_0^∞ h`, absent when the tail slope is 0.
        log_integral_h: Option<LogValue>,
        /// `h^2(x)/h(2x)` tends to `e^{b_last} > 0`, so it is never integrable.
        g2_integrable: bool,
        windows: Vec<WindowComparison>,
    },
    Increasing {
        threshold: BigReal,
        #[serde(with = "rational_text")]
        gap: Rational,
        /// Enclosure of `e^gap`, a lower bound for `h(n+1)/h(n)` past the threshold.
        ratio_lower: IntervalReal,
        checked_integers: usize,
        gap_holds: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem15Report {
    pub monotonicity: MonotonicityVerdict,
    pub ratio_condition: RatioVerdict,
    pub branch: Theorem15Branch,
    /// Whether the theorem's hypotheses were all certified.
    pub hypotheses_hold: bool,
    /// Whether every check of the chosen branch succeeded.
    pub branch_checks_pass: bool,
}

/// Number of integers past the threshold checked on the increasing branch.
pub const GAP_CHECKS: u64 = 50;

/// Runs both branches of the dichotomy argument on `f`.
pub fn theorem_1_5_witness(f: &PiecewiseLogLinear, prec: Precision) -> Result<Theorem15Report, TheoremError> {
    let monotonicity = classify_monotonicity(f)?;
    let ratio_condition = ratio_condition_check(f, 2, prec)?.verdict;
    match &monotonicity {
        MonotonicityVerdict::IncreasingBeyond { threshold, gap } => {
            let start = &threshold.floor() + &BigReal::one();
            let mut gap_holds = true;
            for k in 0..GAP_CHECKS {
                let n = &start + &BigReal::from_int(k as i64);
                let diff = &f.eval_exact(&(&n + &BigReal::one()))? - &f.eval_exact(&n)?;
                gap_holds &= diff >= BigReal::from_rational(gap.clone());
            }
            let ratio_lower = IntervalReal::from_rational(gap.clone()).exp(prec);
            let branch = Theorem15Branch::Increasing {
                threshold: threshold.clone(),
                gap: gap.clone(),
                ratio_lower,
                checked_integers: GAP_CHECKS as usize,
                gap_holds,
            };
            Ok(Theorem15Report {
                monotonicity,
                ratio_condition,
                branch,
                hypotheses_hold: false,
                branch_checks_pass: gap_holds,
            })
        }
        MonotonicityVerdict::DecreasingEverywhere => {
            let g2 = ratio_transform(f, &Rational::from_integer(2.into()))?;
            let mut points: Vec<BigReal> = g2.pieces().iter().map(|p| p.lo.clone()).collect();
            points.extend(f.pieces().iter().map(|p| p.lo.clone()));
            points.sort();
            points.dedup();
            let mut pointwise_holds = true;
            for x in &points {
                pointwise_holds &= f.eval_exact(&x.mul_rational(&Rational::from_integer(2.into())))? <= f.eval_exact(x)?;
            }
            let log_integral_h = if f.last().slope.is_negative() {
                Some(integral_log(f, &BigReal::zero(), None, prec)?)
            } else {
                None
            };
            let g2_integrable = g2.last().slope.is_negative();
            let mut windows_at: Vec<BigReal> = points.iter().filter(|x| x.is_positive()).cloned().collect();
            let far = match points.last() {
                Some(x) if x.is_positive() => x.mul_rational(&Rational::from_integer(2.into())),
                _ => BigReal::one(),
            };
            windows_at.push(far);
            let mut windows = Vec::with_capacity(windows_at.len());
            for x in windows_at {
                let log_h = integral_log(f, &BigReal::zero(), Some(&x), prec)?;
                let log_g2 = integral_log(&g2, &BigReal::zero(), Some(&x), prec)?;
                let ordered = match (&log_h, &log_g2) {
                    (LogValue::Finite(a), LogValue::Finite(b)) => a.lo() <= b.lo() && a.hi() <= b.hi(),
                    (LogValue::NegInfinity, _) => true,
                    (_, LogValue::NegInfinity) => false,
                };
                windows.push(WindowComparison { x, log_h, log_g2, ordered });
            }
            let branch_checks_pass = pointwise_holds && windows.iter().all(|w| w.ordered);
            let hypotheses_hold = ratio_condition == RatioVerdict::Holds && g2_integrable;
            let branch = Theorem15Branch::Decreasing {
                checked_points: points.len(),
                pointwise_holds,
                log_integral_h,
                g2_integrable,
                windows,
            };
            Ok(Theorem15Report { monotonicity, ratio_condition, branch, hypotheses_hold, branch_checks_pass })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Precision = Precision::DEFAULT;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn f(slopes: &[Rational], bps: &[i64]) -> PiecewiseLogLinear {
        let bps: Vec<BigReal> = bps.iter().map(|&b| BigReal::from_int(b)).collect();
        PiecewiseLogLinear::from_slopes(BigReal::zero(), slopes, &bps, Convexity::Convex).unwrap()
    }

    #[test]
    fn dichotomy_examples() {
        assert_eq!(
            classify_monotonicity(&f(&[q(-2, 1), q(-1, 1)], &[1])).unwrap(),
            MonotonicityVerdict::DecreasingEverywhere
        );
        assert_eq!(
            classify_monotonicity(&f(&[q(-1, 1), q(1, 2)], &[3])).unwrap(),
            MonotonicityVerdict::IncreasingBeyond { threshold: BigReal::from_int(3), gap: q(1, 2) }
        );
        assert_eq!(
            classify_monotonicity(&f(&[q(-1, 1), q(0, 1)], &[3])).unwrap(),
            MonotonicityVerdict::DecreasingEverywhere
        );
        let loose = PiecewiseLogLinear::new(vec![(q(-1, 1), BigReal::zero(), BigReal::zero())], Convexity::None).unwrap();
        assert!(classify_monotonicity(&loose).is_err());
    }

    #[test]
    fn ratio_condition_examples() {
        let e = f(&[q(-1, 1)], &[]);
        let rep = ratio_condition_check(&e, 5, P).unwrap();
        assert_eq!(rep.verdict, RatioVerdict::Fails { gap: q(1, 1) });
        assert!((rep.samples[0].deviation.mid_f64() - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        let up = f(&[q(-1, 1), q(1, 2)], &[3]);
        assert_eq!(ratio_condition_check(&up, 5, P).unwrap().verdict, RatioVerdict::Fails { gap: q(1, 2) });
        let flattening = f(&[q(-1, 1), q(-1, 2), q(-1, 3)], &[2, 4]);
        assert_eq!(ratio_condition_check(&flattening, 5, P).unwrap().verdict, RatioVerdict::Holds);
        assert!(ratio_condition_check(&flattening, 1, P).is_err());
    }

    #[test]
    fn witness_on_pure_exponential() {
        let e = f(&[q(-1, 1)], &[]);
        let rep = theorem_1_5_witness(&e, P).unwrap();
        let Theorem15Branch::Decreasing { g2_integrable, log_integral_h, pointwise_holds, .. } = &rep.branch else {
            panic!("expected the decreasing branch");
        };
        assert!(!g2_integrable && *pointwise_holds);
        assert!(log_integral_h.as_ref().unwrap().enclosure().unwrap().contains(&BigReal::zero()));
        assert!(!rep.hypotheses_hold);
    }

    #[test]
    fn witness_on_increasing() {
        let up = f(&[q(-1, 1), q(1, 2)], &[3]);
        let rep = theorem_1_5_witness(&up, P).unwrap();
        assert!(matches!(rep.branch, Theorem15Branch::Increasing { gap_holds: true, .. }));
        assert!(rep.branch_checks_pass && !rep.hypotheses_hold);
    }
}
