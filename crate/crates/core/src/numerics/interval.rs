use std::fmt;

use num_traits::{Signed, Zero};

use super::kernel::{exp_rational, ln2_enclosure, ln_rational};
use super::real::{floor_log2, pow2_rat, rat, BigReal, Rational, RoundingMode, FOLD_LIMIT};
use super::{NumericsError, Precision};

/// Magnitudes below `2^-TINY_BITS` are only bounded, not resolved.
const TINY_BITS: i64 = FOLD_LIMIT - 32;

/// Concrete arguments beyond this many bits go through the coarse `2^(x/ln 2)` route.
const EXP_DIRECT_BITS: i64 = 4096;

/// Closed interval `[lo, hi]` with exact endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalReal {
    lo: BigReal,
    hi: BigReal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Verdict {
    CertainlyLess,
    CertainlyGreater,
    Indeterminate,
}

impl Verdict {
    pub fn is_certain(self) -> bool {
        self != Verdict::Indeterminate
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::CertainlyLess => "CertainlyLess",
            Verdict::CertainlyGreater => "CertainlyGreater",
            Verdict::Indeterminate => "Indeterminate",
        };
        f.write_str(s)
    }
}

/// Strict comparison that only answers when the enclosures are disjoint.
pub fn certified_compare(a: &IntervalReal, b: &IntervalReal) -> Verdict {
    if a.hi < b.lo {
        Verdict::CertainlyLess
    } else if a.lo > b.hi {
        Verdict::CertainlyGreater
    } else {
        Verdict::Indeterminate
    }
}

/// Runs `attempt` at `start`, doubling the precision while it returns `None`.
pub fn escalate<T>(
    start: Precision,
    cap: Precision,
    mut attempt: impl FnMut(Precision) -> Option<T>,
) -> Result<(T, Precision), NumericsError> {
    let mut prec = start;
    loop {
        if let Some(v) = attempt(prec) {
            return Ok((v, prec));
        }
        if prec >= cap {
            return Err(NumericsError::Indeterminate(prec.bits()));
        }
        prec = Precision(prec.doubled().bits().min(cap.bits()));
    }
}

fn ln2_interval(prec: Precision) -> (Rational, Rational) {
    ln2_enclosure(prec.bits() + 64)
}

/// Enclosure of `1 / ln 2`.
fn inv_ln2(prec: Precision) -> (Rational, Rational) {
    let (lo, hi) = ln2_interval(prec);
    (hi.recip(), lo.recip())
}

fn tiny_upper() -> BigReal {
    BigReal::from_rational(pow2_rat(-TINY_BITS))
}

/// Enclosure of `e^x` for an exact `x`.
pub(crate) fn exp_point(x: &BigReal, prec: Precision) -> IntervalReal {
    if x.is_zero() {
        return IntervalReal::point(BigReal::one());
    }
    // e^x <= 2^(x / 0.7) once x is negative, since ln 2 < 0.7
    let tiny_cut = BigReal::from_rational(rat(-TINY_BITS) * Rational::new(7.into(), 10.into()));
    if *x <= tiny_cut {
        return IntervalReal { lo: BigReal::zero(), hi: tiny_upper() };
    }
    if let Some(q) = x.as_rational() {
        if floor_log2(q) < EXP_DIRECT_BITS {
            let (k, lo, hi) = exp_rational(q, prec);
            let k = BigReal::from_bigint(k);
            let lo = BigReal::from_rational(lo).mul_pow2(&k).expect("integer exponent");
            let hi = BigReal::from_rational(hi).mul_pow2(&k).expect("integer exponent");
            return IntervalReal { lo, hi };
        }
    }
    // x is huge and positive: e^x = 2^(x / ln 2), resolved only to whole powers of two
    let (il, ih) = inv_ln2(prec);
    let elo = x.mul_rational(&il).round(prec, RoundingMode::Down).floor();
    let ehi = x.mul_rational(&ih).round(prec, RoundingMode::Up).ceil();
    IntervalReal {
        lo: BigReal::pow2(&elo).expect("integer exponent"),
        hi: BigReal::pow2(&ehi).expect("integer exponent"),
    }
}

/// Enclosure of `ln y` for an exact `y > 0`.
pub(crate) fn ln_point(y: &BigReal, prec: Precision) -> Result<IntervalReal, NumericsError> {
    if !y.is_positive() {
        return Err(NumericsError::LnDomain);
    }
    if let Some(q) = y.as_rational() {
        let (lo, hi) = ln_rational(q, prec);
        return Ok(IntervalReal { lo: BigReal::from_rational(lo), hi: BigReal::from_rational(hi) });
    }
    let sc = y.scaled(prec.bits() + 64);
    let extra = match sc.lead.as_bigint() {
        Some(n) => n.bits() as u32,
        None => 0,
    };
    let (l2lo, l2hi) = ln2_enclosure(prec.bits() + 64 + extra);
    let (slo, _) = ln_rational(&sc.lo, prec);
    let (_, shi) = ln_rational(&sc.hi, prec);
    let lo = &sc.lead.mul_rational(&l2lo) + &BigReal::from_rational(slo);
    let hi = &sc.lead.mul_rational(&l2hi) + &BigReal::from_rational(shi);
    Ok(IntervalReal { lo, hi }.round_outward(Precision(prec.bits() + 32)))
}

/// Enclosure of `1 / x` for an exact nonzero `x`.
fn recip_point(x: &BigReal, prec: Precision) -> Result<IntervalReal, NumericsError> {
    if x.is_zero() {
        return Err(NumericsError::DivisionByZero);
    }
    if let Some(q) = x.as_rational() {
        return Ok(IntervalReal::point(BigReal::from_rational(q.recip())).round_outward(prec));
    }
    let sc = x.scaled(prec.bits() + 64);
    let tiny = match sc.lead.as_i64() {
        Some(e) => e > TINY_BITS - 4,
        None => true,
    };
    if tiny {
        let t = tiny_upper();
        return Ok(if x.is_positive() {
            IntervalReal { lo: BigReal::zero(), hi: t }
        } else {
            IntervalReal { lo: -t, hi: BigReal::zero() }
        });
    }
    let e = sc.lead.as_i64().expect("checked above");
    let a = BigReal::from_rational(sc.lo.recip() * pow2_rat(-e));
    let b = BigReal::from_rational(sc.hi.recip() * pow2_rat(-e));
    Ok(IntervalReal::new(a.min_ref(&b).clone(), a.max_ref(&b).clone()).round_outward(prec))
}

impl IntervalReal {
    /// Panics when `lo > hi`.
    pub fn new(lo: BigReal, hi: BigReal) -> IntervalReal {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalReal { lo, hi }
    }

    pub fn point(x: BigReal) -> IntervalReal {
        IntervalReal { lo: x.clone(), hi: x }
    }

    pub fn from_rational(q: Rational) -> IntervalReal {
        IntervalReal::point(BigReal::from_rational(q))
    }

    pub fn from_int(n: i64) -> IntervalReal {
        IntervalReal::point(BigReal::from_int(n))
    }

    pub fn lo(&self) -> &BigReal {
        &self.lo
    }

    pub fn hi(&self) -> &BigReal {
        &self.hi
    }

    pub fn into_bounds(self) -> (BigReal, BigReal) {
        (self.lo, self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigReal {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigReal) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &IntervalReal) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &IntervalReal) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &IntervalReal) -> IntervalReal {
        IntervalReal { lo: self.lo.min_ref(&other.lo).clone(), hi: self.hi.max_ref(&other.hi).clone() }
    }

    /// Enclosure of `max(x, y)` for `x ∈ self`, `y ∈ other`.
    pub fn max(&self, other: &IntervalReal) -> IntervalReal {
        IntervalReal { lo: self.lo.max_ref(&other.lo).clone(), hi: self.hi.max_ref(&other.hi).clone() }
    }

    pub fn neg(&self) -> IntervalReal {
        IntervalReal { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn add(&self, o: &IntervalReal) -> IntervalReal {
        IntervalReal { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &IntervalReal) -> IntervalReal {
        IntervalReal { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn add_real(&self, x: &BigReal) -> IntervalReal {
        IntervalReal { lo: &self.lo + x, hi: &self.hi + x }
    }

    pub fn mul(&self, o: &IntervalReal) -> IntervalReal {
        let products = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mut lo = &products[0];
        let mut hi = &products[0];
        for p in &products[1..] {
            lo = lo.min_ref(p);
            hi = hi.max_ref(p);
        }
        IntervalReal { lo: lo.clone(), hi: hi.clone() }
    }

    pub fn mul_rational(&self, q: &Rational) -> IntervalReal {
        let a = self.lo.mul_rational(q);
        let b = self.hi.mul_rational(q);
        if q.is_negative() {
            IntervalReal { lo: b, hi: a }
        } else {
            IntervalReal { lo: a, hi: b }
        }
    }

    pub fn div_rational(&self, q: &Rational) -> IntervalReal {
        assert!(!q.is_zero(), "division by zero rational");
        self.mul_rational(&q.recip())
    }

    pub fn recip(&self, prec: Precision) -> Result<IntervalReal, NumericsError> {
        if !self.lo.is_positive() && !self.hi.is_negative() {
            return Err(NumericsError::DivisionByZero);
        }
        let a = recip_point(&self.hi, prec)?;
        let b = recip_point(&self.lo, prec)?;
        Ok(IntervalReal { lo: a.lo, hi: b.hi })
    }

    pub fn div(&self, o: &IntervalReal, prec: Precision) -> Result<IntervalReal, NumericsError> {
        Ok(self.mul(&o.recip(prec)?))
    }

    /// Widens both endpoints to `prec` significant bits.
    pub fn round_outward(&self, prec: Precision) -> IntervalReal {
        IntervalReal {
            lo: self.lo.round(prec, RoundingMode::Down),
            hi: self.hi.round(prec, RoundingMode::Up),
        }
    }

    pub fn exp(&self, prec: Precision) -> IntervalReal {
        let a = exp_point(&self.lo, prec);
        if self.is_point() {
            return a;
        }
        IntervalReal { lo: a.lo, hi: exp_point(&self.hi, prec).hi }
    }

    pub fn ln(&self, prec: Precision) -> Result<IntervalReal, NumericsError> {
        if !self.lo.is_positive() {
            return Err(NumericsError::LnDomain);
        }
        let a = ln_point(&self.lo, prec)?;
        if self.is_point() {
            return Ok(a);
        }
        let b = ln_point(&self.hi, prec)?;
        Ok(IntervalReal { lo: a.lo, hi: b.hi })
    }

    /// Midpoint as a double (saturating).
    pub fn mid_f64(&self) -> f64 {
        let m = (&self.lo + &self.hi).mul_rational(&Rational::new(1.into(), 2.into()));
        m.to_f64()
    }

    /// `hi - lo` relative to `max(|lo|, |hi|)`, as a double.
    pub fn relative_width_f64(&self) -> f64 {
        let w = self.width();
        if w.is_zero() {
            return 0.0;
        }
        let scale = self.lo.abs().max_ref(&self.hi.abs()).clone();
        match (w.log2_f64(), scale.log2_f64()) {
            (Some(a), Some(b)) => (a - b).exp2(),
            _ => f64::INFINITY,
        }
    }
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: Precision) -> IntervalReal {
    let (lo, hi) = ln2_interval(prec);
    IntervalReal { lo: BigReal::from_rational(lo), hi: BigReal::from_rational(hi) }
}

/// Enclosure of `exp` applied to an exact `x`.
pub fn exp_enclosure(x: &IntervalReal, prec: Precision) -> IntervalReal {
    x.exp(prec)
}

/// Enclosure of `ln` applied to `x`, which must be positive.
pub fn ln_enclosure(x: &IntervalReal, prec: Precision) -> Result<IntervalReal, NumericsError> {
    x.ln(prec)
}

/// Enclosure of `a / b` for exact values, including tower-sized ones whose
/// leading exponents differ by a small amount.
pub fn quotient(a: &BigReal, b: &BigReal, prec: Precision) -> Result<IntervalReal, NumericsError> {
    if b.is_zero() {
        return Err(NumericsError::DivisionByZero);
    }
    if a.is_zero() {
        return Ok(IntervalReal::point(BigReal::zero()));
    }
    if let (Some(p), Some(q)) = (a.as_rational(), b.as_rational()) {
        return Ok(IntervalReal::point(BigReal::from_rational(p / q)).round_outward(prec));
    }
    let guard = prec.bits() + 64;
    let sa = a.scaled(guard);
    let sb = b.scaled(guard);
    let negative = a.is_negative() != b.is_negative();
    let shift = &sa.lead - &sb.lead;
    let tiny = match shift.as_i64() {
        Some(e) => e < -TINY_BITS + 4,
        None => shift.is_negative(),
    };
    if tiny {
        let t = tiny_upper();
        return Ok(if negative {
            IntervalReal { lo: -t, hi: BigReal::zero() }
        } else {
            IntervalReal { lo: BigReal::zero(), hi: t }
        });
    }
    let corners = [&sa.lo / &sb.lo, &sa.lo / &sb.hi, &sa.hi / &sb.lo, &sa.hi / &sb.hi];
    let lo = corners.iter().min().expect("four corners").clone();
    let hi = corners.iter().max().expect("four corners").clone();
    let lo = BigReal::from_rational(lo).mul_pow2(&shift)?;
    let hi = BigReal::from_rational(hi).mul_pow2(&shift)?;
    Ok(IntervalReal { lo, hi }.round_outward(prec))
}

impl fmt::Display for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
