use num_traits::{Signed, Zero};

use super::{PiecewiseError, PiecewiseLogLinear};
use crate::numerics::{ln_one_minus_exp_neg, log_add_exp, BigReal, IntervalReal, LogValue, Precision, Rational};

/// Enclosure of `ln ∫_{x1}^{x2} e^{m x + b} dx`; `x2 = None` means `+∞`.
pub fn segment_integral_log(
    m: &Rational,
    b: &BigReal,
    x1: &BigReal,
    x2: Option<&BigReal>,
    prec: Precision,
) -> Result<LogValue, PiecewiseError> {
    if let Some(x2) = x2 {
        if x2 < x1 {
            return Err(PiecewiseError::Domain(format!("[{x1}, {x2}]")));
        }
        if x2 == x1 {
            return Ok(LogValue::NegInfinity);
        }
    }
    if m.is_zero() {
        let Some(x2) = x2 else {
            return Err(PiecewiseError::Divergent(m.clone()));
        };
        let len = IntervalReal::point(x2 - x1).ln(prec)?;
        return Ok(LogValue::Finite(len.add_real(b)));
    }
    let ln_m = IntervalReal::from_rational(m.abs()).ln(prec)?;
    let Some(x2) = x2 else {
        if m.is_positive() {
            return Err(PiecewiseError::Divergent(m.clone()));
        }
        // -e^{m x1 + b} / m
        let top = &x1.mul_rational(m) + b;
        return Ok(LogValue::Finite(ln_m.neg().add_real(&top)));
    };
    // factor out the larger endpoint value: e^{top} (1 - e^{-d}) / |m|
    let d = (x2 - x1).mul_rational(&m.abs());
    let top = if m.is_negative() { &x1.mul_rational(m) + b } else { &x2.mul_rational(m) + b };
    let body = ln_one_minus_exp_neg(&d, prec)?;
    Ok(LogValue::Finite(body.sub(&ln_m).add_real(&top)))
}

/// Enclosure of `ln ∫_{lo}^{hi} h`; `hi = None` means `+∞`.
pub fn integral_log(
    f: &PiecewiseLogLinear,
    lo: &BigReal,
    hi: Option<&BigReal>,
    prec: Precision,
) -> Result<LogValue, PiecewiseError> {
    if lo.is_negative() {
        return Err(PiecewiseError::Domain(lo.to_string()));
    }
    match hi {
        Some(hi) if hi < lo => return Err(PiecewiseError::Domain(format!("[{lo}, {hi}]"))),
        Some(hi) if hi == lo => return Ok(LogValue::NegInfinity),
        None if !f.last().slope.is_negative() => return Err(PiecewiseError::Divergent(f.last().slope.clone())),
        _ => {}
    }
    let mut acc = LogValue::NegInfinity;
    for p in f.pieces() {
        let start = p.lo.max_ref(lo);
        let end = match (&p.hi, hi) {
            (Some(a), Some(b)) => Some(a.min_ref(b)),
            (Some(a), None) => Some(a),
            (None, b) => b,
        };
        if let Some(end) = end {
            if end <= start {
                continue;
            }
        }
        let part = segment_integral_log(&p.slope, &p.intercept, start, end, prec)?;
        acc = log_add_exp(&acc, &part, prec);
    }
    Ok(acc)
}
