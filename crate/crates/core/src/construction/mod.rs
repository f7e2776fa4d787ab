//! Inductive construction of a strictly log-convex `h` that is integrable
//! while `h(x)^r / h(rx)` is not, with every constraint certified.

mod certify;
mod schedule;

pub use certify::{
    divergence_certificate, integral_upper_bound, subexponential_check, ChordStep, DivergenceCertificate,
    IntegralBound, LevelContribution, SubexponentialReport,
};
pub use schedule::SlopeSchedule;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{
    certified_compare, escalate, ln2, BigReal, IntervalReal, NumericsError, Precision, Rational, Verdict,
};
use crate::piecewise::{rational_text, Convexity, PiecewiseError, PiecewiseLogLinear};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("invalid slope schedule: {0}")]
    Schedule(String),
    #[error("depth must be at least 1")]
    Depth,
    #[error("certification failed at level {level}: {constraint}")]
    Certification { level: usize, constraint: String },
    #[error("report check failed at level {level}: {invariant}")]
    Invalid { level: usize, invariant: String },
    #[error("argument out of range: {0}")]
    Argument(String),
    #[error(transparent)]
    Piecewise(#[from] PiecewiseError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Verdicts certifying the choice of `a_n` from level `n - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCertificate {
    pub c1_threshold: IntervalReal,
    pub c2_threshold: IntervalReal,
    /// `-e^{m_{n-1} a_n + b_{n-1}} / m_n` against `2^-n`.
    pub c1: Verdict,
    /// `a_n` against the C2 threshold.
    pub c2: Verdict,
    pub continuity: bool,
    pub convexity: bool,
    /// `a_n > a_{n-1} + 1`.
    pub gap: bool,
    pub precision: u32,
}

impl LevelCertificate {
    pub fn passed(&self) -> bool {
        self.c1 == Verdict::CertainlyLess
            && self.c2 == Verdict::CertainlyGreater
            && self.continuity
            && self.convexity
            && self.gap
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: usize,
    pub a: BigReal,
    pub b: BigReal,
    #[serde(with = "rational_text")]
    pub slope: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<LevelCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub schedule: SlopeSchedule,
    pub depth: usize,
    pub precision: u32,
    pub precision_used: u32,
    /// Levels `0..=depth`; piece `n` is `m_n x + b_n` on `[a_n, a_{n+1})`.
    pub levels: Vec<Level>,
    /// Level `depth + 1`, certified but outside the truncation.
    pub next: Level,
    pub integral: IntegralBound,
    pub function: PiecewiseLogLinear,
}

impl ConstructionReport {
    pub fn breakpoints(&self) -> impl Iterator<Item = &BigReal> {
        self.levels.iter().map(|l| &l.a)
    }

    pub fn intercepts(&self) -> impl Iterator<Item = &BigReal> {
        self.levels.iter().map(|l| &l.b)
    }

    pub fn slopes(&self) -> impl Iterator<Item = &Rational> {
        self.levels.iter().map(|l| &l.slope)
    }
}

fn ln_abs(q: &Rational, prec: Precision) -> Result<IntervalReal, NumericsError> {
    IntervalReal::from_rational(q.abs()).ln(prec)
}

/// Threshold `A1` with `a > A1` implying `-e^{m_n a + b_n} / m_{n+1} < 2^{-(n+1)}`.
pub fn c1_lower_bound(
    n: usize,
    m_n: &Rational,
    m_next: &Rational,
    b_n: &BigReal,
    prec: Precision,
) -> Result<IntervalReal, ConstructionError> {
    if !(m_n < m_next && m_next.is_negative()) {
        return Err(ConstructionError::Schedule(format!("need m_{n} < m_{} < 0", n + 1)));
    }
    let rhs = ln_abs(m_next, prec)?.sub(&ln2(prec).mul_rational(&Rational::from_integer((n + 1).into())));
    Ok(rhs.add_real(&-b_n).div_rational(m_n))
}

/// Threshold `a_n + e^{(1-n) b_n}` (for `n = 0`, `a_0 + e^{-b_0}`).
pub fn c2_lower_bound(n: usize, a_n: &BigReal, b_n: &BigReal, prec: Precision) -> IntervalReal {
    let scale = if n == 0 { Rational::from_integer((-1).into()) } else { Rational::from_integer((1 - n as i64).into()) };
    IntervalReal::point(b_n.mul_rational(&scale)).exp(prec).add_real(a_n)
}

/// `b_{n+1} = m_n a_{n+1} + b_n - m_{n+1} a_{n+1}`.
pub fn next_intercept(m_n: &Rational, m_next: &Rational, a_next: &BigReal, b_n: &BigReal) -> BigReal {
    &(&a_next.mul_rational(m_n) + b_n) - &a_next.mul_rational(m_next)
}

fn certify_at(
    prev: &Level,
    m_next: &Rational,
    a: &BigReal,
    c1_threshold: IntervalReal,
    c2_threshold: IntervalReal,
    prec: Precision,
) -> Result<LevelCertificate, ConstructionError> {
    let n = prev.n;
    let exponent = &a.mul_rational(&prev.slope) + &prev.b;
    let lhs = ln_abs(m_next, prec)?.neg().add_real(&exponent);
    let rhs = ln2(prec).mul_rational(&Rational::from_integer((-(n as i64) - 1).into()));
    let c1 = certified_compare(&lhs, &rhs);
    let c2 = certified_compare(&IntervalReal::point(a.clone()), &c2_threshold);
    let b = next_intercept(&prev.slope, m_next, a, &prev.b);
    let continuity = &a.mul_rational(m_next) + &b == exponent;
    Ok(LevelCertificate {
        c1_threshold,
        c2_threshold,
        c1,
        c2,
        continuity,
        convexity: prev.slope < *m_next,
        gap: n == 0 || *a > &prev.a + &BigReal::one(),
        precision: prec.bits(),
    })
}

/// Chooses `a_{n+1}` as the smallest power of two above the certified
/// thresholds and certifies both constraints there, doubling precision
/// while any verdict is open.
pub fn next_breakpoint(prev: &Level, m_next: &Rational, prec: Precision) -> Result<Level, ConstructionError> {
    let n = prev.n;
    let attempt = |p: Precision| -> Option<Result<Level, ConstructionError>> {
        let run = || -> Result<Option<Level>, ConstructionError> {
            let c1t = c1_lower_bound(n, &prev.slope, m_next, &prev.b, p)?;
            let c2t = c2_lower_bound(n, &prev.a, &prev.b, p);
            let top = c1t.max(&c2t);
            let Some((_, hi)) = top.hi().floor_log2_bounds(p.bits() + 64) else {
                return Ok(None);
            };
            let a = BigReal::pow2(&(&hi + &BigReal::one()))?;
            let cert = certify_at(prev, m_next, &a, c1t, c2t, p)?;
            if !(cert.c1.is_certain() && cert.c2.is_certain()) {
                return Ok(None);
            }
            let b = next_intercept(&prev.slope, m_next, &a, &prev.b);
            Ok(Some(Level { n: n + 1, a, b, slope: m_next.clone(), certificate: Some(cert) }))
        };
        match run() {
            Ok(Some(level)) => Some(Ok(level)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        }
    };
    let (level, _) = escalate(prec, Precision::CAP.max(prec), attempt).map_err(|_| ConstructionError::Certification {
        level: n + 1,
        constraint: "verdicts stayed indeterminate".into(),
    })?;
    let level = level?;
    let cert = level.certificate.as_ref().expect("set above");
    let failed = [
        (cert.c1 == Verdict::CertainlyLess, "C1 (tail integral)"),
        (cert.c2 == Verdict::CertainlyGreater, "C2 (growth)"),
        (cert.continuity, "continuity"),
        (cert.convexity, "convexity"),
        (cert.gap, "a_{n+1} > a_n + 1"),
    ]
    .into_iter()
    .find(|(ok, _)| !ok);
    if let Some((_, what)) = failed {
        return Err(ConstructionError::Certification { level: n + 1, constraint: what.into() });
    }
    Ok(level)
}

fn function_of(levels: &[Level]) -> Result<PiecewiseLogLinear, PiecewiseError> {
    let parts = levels.iter().map(|l| (l.slope.clone(), l.b.clone(), l.a.clone())).collect();
    PiecewiseLogLinear::new(parts, Convexity::StrictlyConvex)
}

/// Runs the construction to depth `N`: pieces `0..=N`, the last one
/// extended to infinity.
pub fn construct(schedule: &SlopeSchedule, depth: usize, prec: Precision) -> Result<ConstructionReport, ConstructionError> {
    if depth == 0 {
        return Err(ConstructionError::Depth);
    }
    let slopes = schedule.validate(depth + 2)?;
    let mut levels = vec![Level {
        n: 0,
        a: BigReal::zero(),
        b: BigReal::zero(),
        slope: slopes[0].clone(),
        certificate: None,
    }];
    for m_next in &slopes[1..] {
        let level = next_breakpoint(levels.last().expect("nonempty"), m_next, prec)?;
        levels.push(level);
    }
    let next = levels.pop().expect("depth + 2 levels");
    let function = function_of(&levels)?;
    let precision_used = levels
        .iter()
        .chain(std::iter::once(&next))
        .filter_map(|l| l.certificate.as_ref().map(|c| c.precision))
        .max()
        .unwrap_or(prec.bits());
    let integral = certify::integral_bound_of(&function, &slopes[0], depth, prec)?;
    Ok(ConstructionReport {
        schedule: schedule.clone(),
        depth,
        precision: prec.bits(),
        precision_used,
        levels,
        next,
        integral,
        function,
    })
}

/// Re-certifies a stored report from scratch, naming the first invariant
/// that fails.
pub fn verify(report: &ConstructionReport) -> Result<(), ConstructionError> {
    let invalid = |level: usize, what: &str| ConstructionError::Invalid { level, invariant: what.to_string() };
    if report.depth == 0 {
        return Err(ConstructionError::Depth);
    }
    if report.levels.len() != report.depth + 1 || report.next.n != report.depth + 1 {
        return Err(invalid(0, "level count does not match depth"));
    }
    let slopes = report.schedule.validate(report.depth + 2)?;
    let prec = Precision(report.precision);
    let all: Vec<&Level> = report.levels.iter().chain(std::iter::once(&report.next)).collect();
    for (n, level) in all.iter().enumerate() {
        if level.n != n {
            return Err(invalid(n, "level index"));
        }
        if level.slope != slopes[n] {
            return Err(invalid(n, "slope differs from schedule"));
        }
    }
    if !all[0].a.is_zero() || !all[0].b.is_zero() || all[0].certificate.is_some() {
        return Err(invalid(0, "a_0 = 0 and b_0 = 0"));
    }
    for n in 1..all.len() {
        let (prev, cur) = (all[n - 1], all[n]);
        if &cur.a.mul_rational(&cur.slope) + &cur.b != &cur.a.mul_rational(&prev.slope) + &prev.b {
            return Err(invalid(n, "continuity"));
        }
        if cur.a.as_pow2_exponent().is_none() {
            return Err(invalid(n, "breakpoint is not a power of two"));
        }
        let stored = cur.certificate.as_ref().ok_or_else(|| invalid(n, "missing certificate"))?;
        let redo = next_breakpoint(prev, &cur.slope, prec).map_err(|e| match e {
            ConstructionError::Certification { constraint, .. } => invalid(n, &constraint),
            other => other,
        })?;
        if redo.a != cur.a {
            return Err(invalid(n, "breakpoint differs from the certified choice"));
        }
        if redo.certificate.as_ref() != Some(stored) {
            return Err(invalid(n, "stored thresholds or verdicts differ"));
        }
    }
    let function = function_of(&report.levels).map_err(|e| invalid(0, &e.to_string()))?;
    if function != report.function {
        return Err(invalid(0, "stored function differs from levels"));
    }
    let integral = certify::integral_bound_of(&function, &slopes[0], report.depth, prec)?;
    if integral != report.integral {
        return Err(invalid(report.depth, "integral bound differs"));
    }
    if integral.verdict != Verdict::CertainlyLess {
        return Err(invalid(report.depth, "integral exceeds bound"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Precision = Precision::DEFAULT;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn near(iv: &IntervalReal, x: f64, tol: f64) -> bool {
        (iv.mid_f64() - x).abs() < tol
    }

    #[test]
    fn c1_examples() {
        let t = c1_lower_bound(0, &q(-1, 1), &q(-1, 2), &BigReal::zero(), P).unwrap();
        assert!(near(&t, 4f64.ln(), 1e-15));
        let t = c1_lower_bound(1, &q(-1, 2), &q(-1, 3), &BigReal::from_int(-1), P).unwrap();
        assert!(near(&t, 2.0 * 12f64.ln() - 2.0, 1e-14));
        assert!(c1_lower_bound(0, &q(-1, 2), &q(-1, 1), &BigReal::zero(), P).is_err());
    }

    #[test]
    fn c2_examples() {
        let t = c2_lower_bound(0, &BigReal::zero(), &BigReal::zero(), P);
        assert!(t.contains(&BigReal::one()));
        let t = c2_lower_bound(1, &BigReal::from_int(2), &BigReal::from_int(-1), P);
        assert!(t.contains(&BigReal::from_int(3)));
        let t = c2_lower_bound(2, &BigReal::from_int(4), &BigReal::from_rational(q(-5, 3)), P);
        assert!(near(&t, 4.0 + (5.0f64 / 3.0).exp(), 1e-13));
    }

    #[test]
    fn intercept_examples() {
        let b1 = next_intercept(&q(-1, 1), &q(-1, 2), &BigReal::from_int(2), &BigReal::zero());
        assert_eq!(b1, BigReal::from_int(-1));
        let b2 = next_intercept(&q(-1, 2), &q(-1, 3), &BigReal::from_int(4), &b1);
        assert_eq!(b2, BigReal::from_rational(q(-5, 3)));
        let same = next_intercept(&q(-1, 2), &q(-1, 2), &BigReal::from_int(4), &b1);
        assert_eq!(same, b1);
    }

    #[test]
    fn shallow_harmonic_run() {
        let r = construct(&SlopeSchedule::harmonic(1), 2, P).unwrap();
        let a: Vec<_> = r.breakpoints().cloned().collect();
        assert_eq!(a, vec![BigReal::zero(), BigReal::from_int(2), BigReal::from_int(4)]);
        assert_eq!(r.next.a, BigReal::from_int(16));
        let b: Vec<_> = r.intercepts().cloned().collect();
        assert_eq!(b, vec![BigReal::zero(), BigReal::from_int(-1), BigReal::from_rational(q(-5, 3))]);
        assert!(r.levels[1..].iter().all(|l| l.certificate.as_ref().unwrap().passed()));
        verify(&r).unwrap();
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(construct(&SlopeSchedule::harmonic(1), 0, P), Err(ConstructionError::Depth));
        let s: SlopeSchedule = "explicit:-1,-2,-1/3".parse().unwrap();
        assert!(matches!(construct(&s, 1, P), Err(ConstructionError::Schedule(_))));
    }

    #[test]
    fn tampered_intercept_fails_continuity() {
        let mut r = construct(&SlopeSchedule::harmonic(1), 2, P).unwrap();
        r.levels[1].b = BigReal::from_int(-2);
        assert_eq!(verify(&r), Err(ConstructionError::Invalid { level: 1, invariant: "continuity".into() }));
    }
}
