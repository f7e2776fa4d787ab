use super::interval::{exp_point, ln_point};
use super::real::{pow2_rat, BigReal, Rational};
use super::{IntervalReal, NumericsError, Precision};

/// Logarithm of a non-negative quantity, held as an enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum LogValue {
    /// `ln 0`.
    NegInfinity,
    Finite(IntervalReal),
}

impl LogValue {
    pub fn exact(x: BigReal) -> LogValue {
        LogValue::Finite(IntervalReal::point(x))
    }

    pub fn zero() -> LogValue {
        LogValue::exact(BigReal::zero())
    }

    /// `ln q` for an enclosure of a positive quantity.
    pub fn of_quantity(q: &IntervalReal, prec: Precision) -> Result<LogValue, NumericsError> {
        Ok(LogValue::Finite(q.ln(prec)?))
    }

    pub fn is_neg_infinity(&self) -> bool {
        matches!(self, LogValue::NegInfinity)
    }

    pub fn enclosure(&self) -> Option<&IntervalReal> {
        match self {
            LogValue::NegInfinity => None,
            LogValue::Finite(iv) => Some(iv),
        }
    }

    /// Multiplication of the underlying quantities.
    pub fn mul(&self, other: &LogValue) -> LogValue {
        match (self, other) {
            (LogValue::Finite(a), LogValue::Finite(b)) => LogValue::Finite(a.add(b)),
            _ => LogValue::NegInfinity,
        }
    }

    /// Division of the underlying quantities; `other` must be nonzero.
    pub fn div(&self, other: &LogValue) -> LogValue {
        match (self, other) {
            (LogValue::Finite(a), LogValue::Finite(b)) => LogValue::Finite(a.sub(b)),
            (LogValue::NegInfinity, _) => LogValue::NegInfinity,
            (_, LogValue::NegInfinity) => panic!("division by a zero quantity"),
        }
    }

    pub fn add_real(&self, x: &BigReal) -> LogValue {
        match self {
            LogValue::NegInfinity => LogValue::NegInfinity,
            LogValue::Finite(iv) => LogValue::Finite(iv.add_real(x)),
        }
    }

    /// Enclosure of the underlying quantity.
    pub fn exp(&self, prec: Precision) -> IntervalReal {
        match self {
            LogValue::NegInfinity => IntervalReal::from_int(0),
            LogValue::Finite(iv) => iv.exp(prec),
        }
    }
}

/// Enclosure of `ln(1 + u)` for `u ∈ [lo, hi] ⊂ [0, 1]`.
fn ln1p_bounds(u: &IntervalReal, prec: Precision) -> IntervalReal {
    let negligible = BigReal::from_rational(pow2_rat(-(prec.bits() as i64) - 64));
    if u.hi() <= &negligible {
        // u/2 <= u/(1+u) <= ln(1+u) <= u
        let half = Rational::new(1.into(), 2.into());
        return IntervalReal::new(u.lo().mul_rational(&half), u.hi().clone());
    }
    let one = BigReal::one();
    let lo = ln_point(&(&one + u.lo()), prec).expect("1 + u > 0");
    let hi = ln_point(&(&one + u.hi()), prec).expect("1 + u > 0");
    IntervalReal::new(lo.lo().clone(), hi.hi().clone())
}

/// `ln(e^a + e^b)` for exact `a, b`.
fn log_add_exp_point(a: &BigReal, b: &BigReal, prec: Precision) -> IntervalReal {
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    let e = exp_point(&(small - big), prec);
    ln1p_bounds(&e, prec).add_real(big)
}

/// `ln(e^a - e^b)` for exact `a > b`.
fn log_sub_exp_point(a: &BigReal, b: &BigReal, prec: Precision) -> Result<IntervalReal, NumericsError> {
    let e = exp_point(&(b - a), prec);
    let one = BigReal::one();
    let lo_arg = &one - e.hi();
    if !lo_arg.is_positive() {
        return Err(NumericsError::Indeterminate(prec.bits()));
    }
    let hi_arg = &one - e.lo();
    let lo = ln_point(&lo_arg, prec)?;
    let hi = ln_point(&hi_arg, prec)?;
    Ok(IntervalReal::new(lo.lo().clone(), hi.hi().clone()).add_real(a))
}

/// Enclosure of `ln(1 - e^-d)` for exact `d > 0`.
pub fn ln_one_minus_exp_neg(d: &BigReal, prec: Precision) -> Result<IntervalReal, NumericsError> {
    if !d.is_positive() {
        return Err(NumericsError::LnDomain);
    }
    let half = Rational::new(1.into(), 2.into());
    if let Some(q) = d.as_rational().filter(|q| **q <= half) {
        // 1 - e^-d = d - d^2/2 + d^3/6 - ..., alternating with shrinking terms
        let cut = q * pow2_rat(-(prec.bits() as i64) - 64);
        let mut term = q.clone();
        let mut sum = Rational::from_integer(0.into());
        let mut k: i64 = 1;
        let (lo, hi) = loop {
            let positive = k % 2 == 1;
            sum = if positive { &sum + &term } else { &sum - &term };
            term = &term * q / Rational::from_integer((k + 1).into());
            if term < cut {
                let other = if positive { &sum - &term } else { &sum + &term };
                break if positive { (other, sum) } else { (sum, other) };
            }
            k += 1;
        };
        let lo = ln_point(&BigReal::from_rational(lo), prec)?;
        let hi = ln_point(&BigReal::from_rational(hi), prec)?;
        return Ok(IntervalReal::new(lo.lo().clone(), hi.hi().clone()));
    }
    let e = exp_point(&-d, prec);
    let one = BigReal::one();
    let lo_arg = &one - e.hi();
    if !lo_arg.is_positive() {
        return Err(NumericsError::Indeterminate(prec.bits()));
    }
    let lo = ln_point(&lo_arg, prec)?;
    let hi = ln_point(&(&one - e.lo()), prec)?;
    Ok(IntervalReal::new(lo.lo().clone(), hi.hi().clone()))
}

/// `ln(e^x + e^y)`.
pub fn log_add_exp(x: &LogValue, y: &LogValue, prec: Precision) -> LogValue {
    match (x, y) {
        (LogValue::NegInfinity, other) | (other, LogValue::NegInfinity) => other.clone(),
        (LogValue::Finite(a), LogValue::Finite(b)) => {
            let lo = log_add_exp_point(a.lo(), b.lo(), prec);
            let hi = if a.is_point() && b.is_point() {
                lo.clone()
            } else {
                log_add_exp_point(a.hi(), b.hi(), prec)
            };
            LogValue::Finite(IntervalReal::new(lo.lo().clone(), hi.hi().clone()))
        }
    }
}

/// `ln(e^x - e^y)` for `x >= y`.
///
/// Returns `NegInfinity` when `x` and `y` are the same exact value, and
/// [`NumericsError::Indeterminate`] when overlapping enclosures leave the
/// difference's sign open.
pub fn log_sub_exp(x: &LogValue, y: &LogValue, prec: Precision) -> Result<LogValue, NumericsError> {
    match (x, y) {
        (_, LogValue::NegInfinity) => Ok(x.clone()),
        (LogValue::NegInfinity, LogValue::Finite(_)) => Err(NumericsError::NegativeLogQuantity),
        (LogValue::Finite(a), LogValue::Finite(b)) => {
            if a.is_point() && b.is_point() && a.lo() == b.lo() {
                return Ok(LogValue::NegInfinity);
            }
            if a.hi() < b.lo() {
                return Err(NumericsError::NegativeLogQuantity);
            }
            if a.lo() <= b.hi() {
                return Err(NumericsError::Indeterminate(prec.bits()));
            }
            let lo = log_sub_exp_point(a.lo(), b.hi(), prec)?;
            let hi = log_sub_exp_point(a.hi(), b.lo(), prec)?;
            Ok(LogValue::Finite(IntervalReal::new(lo.lo().clone(), hi.hi().clone())))
        }
    }
}
