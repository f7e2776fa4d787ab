use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{NumericsError, Precision};

pub type Rational = BigRational;

/// Powers of two with a concrete exponent at or below this are folded into
/// the rational part of a [`BigReal`].
pub const FOLD_LIMIT: i64 = 1 << 16;

/// Grid used when an integer bound is needed for a term whose coefficient is
/// not dyadic.
const DYADIC_GRID_BITS: i64 = 4096;

/// Exact real number of the form `sum_i q_i * 2^(E_i) + low`.
///
/// Every `q_i` lies in `[1, 2)` in absolute value, every exponent `E_i` is an
/// integer-valued `BigReal` strictly greater than [`FOLD_LIMIT`], exponents
/// strictly decrease, and each element is at least four times the size of
/// everything after it. The leading element therefore fixes the sign and the
/// magnitude to within a factor 4/3.
#[derive(Clone, Debug)]
pub struct BigReal {
    high: Vec<Term>,
    low: Rational,
}

#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub(crate) coeff: Rational,
    pub(crate) exp: BigReal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundingMode {
    Down,
    Up,
    Nearest,
}

/// `value ∈ [lo, hi] · 2^lead`.
#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub(crate) lead: BigReal,
    pub(crate) lo: Rational,
    pub(crate) hi: Rational,
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[cfg(test)]
pub(crate) fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `floor(log2 |q|)` for nonzero `q`.
pub(crate) fn floor_log2(q: &Rational) -> i64 {
    debug_assert!(!q.is_zero());
    let n = q.numer().abs();
    let d = q.denom();
    let t = n.bits() as i64 - d.bits() as i64;
    let ge = if t >= 0 {
        n >= (d.clone() << t as usize)
    } else {
        (n << (-t) as usize) >= *d
    };
    if ge {
        t
    } else {
        t - 1
    }
}

/// `ceil(log2 |q|)` for nonzero `q`.
pub(crate) fn ceil_log2(q: &Rational) -> i64 {
    let f = floor_log2(q);
    if mul_pow2_rat(&q.abs(), -f).is_one() {
        f
    } else {
        f + 1
    }
}

pub(crate) fn pow2_rat(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(BigInt::one() << k as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

pub(crate) fn mul_pow2_rat(q: &Rational, k: i64) -> Rational {
    // q is in lowest terms, so only factors of two can cancel
    let (n, d) = (q.numer(), q.denom());
    if n.is_zero() {
        return Rational::zero();
    }
    if k >= 0 {
        let tz = d.trailing_zeros().unwrap_or(0).min(k as u64);
        Rational::new_raw(n << (k as u64 - tz) as usize, d >> tz as usize)
    } else {
        let tz = n.trailing_zeros().unwrap_or(0).min(k.unsigned_abs());
        Rational::new_raw(n >> tz as usize, d << (k.unsigned_abs() - tz) as usize)
    }
}

fn dyadic_exp(q: &Rational) -> Option<u64> {
    is_pow2(q.denom()).then(|| q.denom().bits() - 1)
}

/// `n / 2^k` in lowest terms.
fn reduce_dyadic(n: BigInt, k: u64) -> Rational {
    if n.is_zero() {
        return Rational::zero();
    }
    let tz = n.trailing_zeros().unwrap_or(0).min(k);
    Rational::new_raw(n >> tz as usize, BigInt::one() << (k - tz) as usize)
}

/// Sum avoiding gcds when both denominators are powers of two.
pub(crate) fn rat_add(a: &Rational, b: &Rational) -> Rational {
    match (dyadic_exp(a), dyadic_exp(b)) {
        (Some(ea), Some(eb)) => {
            let e = ea.max(eb);
            reduce_dyadic((a.numer() << (e - ea) as usize) + (b.numer() << (e - eb) as usize), e)
        }
        _ => a + b,
    }
}

/// Comparison by cross-multiplication; denominators are positive.
pub(crate) fn rat_cmp(a: &Rational, b: &Rational) -> Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// Product avoiding gcds when both denominators are powers of two.
pub(crate) fn rat_mul(a: &Rational, b: &Rational) -> Rational {
    match (dyadic_exp(a), dyadic_exp(b)) {
        (Some(ea), Some(eb)) => reduce_dyadic(a.numer() * b.numer(), ea + eb),
        _ => a * b,
    }
}

fn is_pow2(n: &BigInt) -> bool {
    n.is_positive() && n.trailing_zeros() == Some(n.bits() - 1)
}

/// Rounds `q` to a multiple of `2^-bits` in the given direction.
pub(crate) fn round_rat_grid(q: &Rational, bits: i64, mode: RoundingMode) -> Rational {
    let scaled = mul_pow2_rat(q, bits);
    let n = match mode {
        RoundingMode::Down => scaled.floor(),
        RoundingMode::Up => scaled.ceil(),
        RoundingMode::Nearest => scaled.round(),
    };
    mul_pow2_rat(&n, -bits)
}

/// Rounds `q` to `prec` significant bits in the given direction.
pub(crate) fn round_rat_sig(q: &Rational, prec: u32, mode: RoundingMode) -> Rational {
    if q.is_zero() {
        return q.clone();
    }
    let f = floor_log2(q);
    round_rat_grid(q, prec as i64 - 1 - f, mode)
}

/// Parses `"p"`, `"p/q"` or a decimal such as `"-1.25e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumericsError> {
    let err = || NumericsError::Parse(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| err())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| err())?;
    let all = all / BigInt::from(10);
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if shift >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-shift) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

impl BigReal {
    pub fn zero() -> BigReal {
        BigReal { high: Vec::new(), low: Rational::zero() }
    }

    pub fn one() -> BigReal {
        BigReal::from_int(1)
    }

    pub fn from_int(n: i64) -> BigReal {
        BigReal { high: Vec::new(), low: rat(n) }
    }

    pub fn from_bigint(n: BigInt) -> BigReal {
        BigReal::from_rational(Rational::from_integer(n))
    }

    /// Rationals are stored exactly whatever their size.
    pub fn from_rational(q: Rational) -> BigReal {
        BigReal { high: Vec::new(), low: q }
    }

    /// Exact value of a finite double.
    pub fn from_f64(x: f64) -> Option<BigReal> {
        Rational::from_float(x).map(BigReal::from_rational)
    }

    /// `2^k` for an integer-valued `k`.
    pub fn pow2(k: &BigReal) -> Result<BigReal, NumericsError> {
        BigReal::one().mul_pow2(k)
    }

    pub fn pow2_int(k: i64) -> BigReal {
        BigReal::from_rational(pow2_rat(k))
    }

    /// `self · 2^k` for an integer-valued `k`.
    ///
    /// Symbolic negative shifts would create magnitudes below every
    /// representable rational and are rejected.
    pub fn mul_pow2(&self, k: &BigReal) -> Result<BigReal, NumericsError> {
        if !k.is_integer() {
            return Err(NumericsError::NonIntegerExponent);
        }
        if k.is_concrete() {
            if *k < BigReal::from_int(-(1 << 24)) {
                return Err(NumericsError::Underflow);
            }
            if let (true, Some(ki)) = (self.high.is_empty(), k.as_i64()) {
                if ki <= FOLD_LIMIT {
                    return Ok(BigReal::from_rational(mul_pow2_rat(&self.low, ki)));
                }
            }
        } else if k.is_negative() {
            return Err(NumericsError::Underflow);
        }
        let mut raw = Vec::with_capacity(self.high.len() + 1);
        for t in &self.high {
            let e = &t.exp + k;
            if e.as_rational().is_none() && e.signum() == Ordering::Less {
                return Err(NumericsError::Underflow);
            }
            raw.push((t.coeff.clone(), e));
        }
        if !self.low.is_zero() {
            raw.push((self.low.clone(), k.clone()));
        }
        Ok(normalize(raw, Rational::zero()))
    }

    pub(crate) fn high(&self) -> &[Term] {
        &self.high
    }

    pub(crate) fn low(&self) -> &Rational {
        &self.low
    }

    pub(crate) fn from_parts(high: Vec<(Rational, BigReal)>, low: Rational) -> BigReal {
        normalize(high, low)
    }

    /// The value as a rational, when it has no tower terms.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.high.is_empty() {
            Some(&self.low)
        } else {
            None
        }
    }

    /// Concrete integer value, if any.
    pub fn as_bigint(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_bigint().and_then(|n| n.to_i64())
    }

    /// True when every term is a rational with no tower part.
    pub fn is_concrete(&self) -> bool {
        self.high.is_empty()
    }

    /// Nesting depth of exponents: 0 for rationals.
    pub fn tower_height(&self) -> usize {
        self.high.iter().map(|t| 1 + t.exp.tower_height()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.high.is_empty() && self.low.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        let lead = match self.high.first() {
            Some(t) => &t.coeff,
            None => &self.low,
        };
        if lead.is_positive() {
            Ordering::Greater
        } else if lead.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> BigReal {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn is_integer(&self) -> bool {
        self.low.is_integer()
            && self.high.iter().all(|t| {
                let d = t.coeff.denom();
                d.is_one() || (is_pow2(d) && (d.bits() as i64) <= FOLD_LIMIT)
            })
    }

    pub fn mul_rational(&self, q: &Rational) -> BigReal {
        if q.is_zero() {
            return BigReal::zero();
        }
        let raw = self.high.iter().map(|t| (rat_mul(&t.coeff, q), t.exp.clone())).collect();
        normalize(raw, rat_mul(&self.low, q))
    }

    pub fn div_rational(&self, q: &Rational) -> BigReal {
        assert!(!q.is_zero(), "division by zero rational");
        self.mul_rational(&q.recip())
    }

    pub fn min_ref<'a>(&'a self, other: &'a BigReal) -> &'a BigReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max_ref<'a>(&'a self, other: &'a BigReal) -> &'a BigReal {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// An integer `<= self`; the greatest one whenever every tower
    /// coefficient is dyadic (always the case after [`BigReal::round`]).
    pub fn floor(&self) -> BigReal {
        self.integer_bound(RoundingMode::Down)
    }

    /// An integer `>= self`; the least one under the same condition as
    /// [`BigReal::floor`].
    pub fn ceil(&self) -> BigReal {
        self.integer_bound(RoundingMode::Up)
    }

    fn integer_bound(&self, mode: RoundingMode) -> BigReal {
        let raw = self
            .high
            .iter()
            .map(|t| {
                let d = t.coeff.denom();
                let c = if d.is_one() || (is_pow2(d) && (d.bits() as i64) <= FOLD_LIMIT) {
                    t.coeff.clone()
                } else {
                    round_rat_grid(&t.coeff, DYADIC_GRID_BITS, mode)
                };
                (c, t.exp.clone())
            })
            .collect();
        let low = match mode {
            RoundingMode::Down => self.low.floor(),
            RoundingMode::Up => self.low.ceil(),
            RoundingMode::Nearest => self.low.round(),
        };
        normalize(raw, low)
    }

    /// Leading-exponent form of a nonzero value, exact down to relative
    /// `2^-guard`.
    pub(crate) fn scaled(&self, guard: u32) -> Scaled {
        let guard = guard as i64;
        let Some(first) = self.high.first() else {
            if self.low.is_zero() {
                return Scaled { lead: BigReal::zero(), lo: Rational::zero(), hi: Rational::zero() };
            }
            let f = floor_log2(&self.low);
            let s = mul_pow2_rat(&self.low, -f);
            return Scaled { lead: BigReal::from_int(f), lo: s.clone(), hi: s };
        };
        let lead = first.exp.clone();
        let mut s = first.coeff.clone();
        let mut slack = Rational::zero();
        let mut done = false;
        for t in &self.high[1..] {
            let d = &lead - &t.exp;
            match d.as_i64() {
                Some(di) if di <= guard => s += mul_pow2_rat(&t.coeff, -di),
                _ => {
                    // Remaining elements sum to at most 4/3 of this one.
                    slack = pow2_rat(-guard + 2);
                    done = true;
                    break;
                }
            }
        }
        if !done && !self.low.is_zero() {
            let lead_i = lead.as_i64();
            match lead_i {
                Some(li) if li - floor_log2(&self.low) <= guard => {
                    s += mul_pow2_rat(&self.low, -li);
                }
                _ => slack = pow2_rat(-guard + 1),
            }
        }
        Scaled { lead, lo: &s - &slack, hi: &s + &slack }
    }

    /// Rounds to `prec` significant bits; the result is within one unit in
    /// the last place of `self` and on the requested side.
    pub fn round(&self, prec: Precision, mode: RoundingMode) -> BigReal {
        if self.is_zero() {
            return BigReal::zero();
        }
        if let Some(q) = self.as_rational() {
            return BigReal::from_rational(round_rat_sig(q, prec.bits(), mode));
        }
        let sc = self.scaled(prec.bits() + 64);
        let grid = prec.bits() as i64 - 1;
        let m = match mode {
            RoundingMode::Down => round_rat_grid(&sc.lo, grid, RoundingMode::Down),
            RoundingMode::Up => round_rat_grid(&sc.hi, grid, RoundingMode::Up),
            RoundingMode::Nearest => {
                let mid = (&sc.lo + &sc.hi) / rat(2);
                round_rat_grid(&mid, grid, RoundingMode::Nearest)
            }
        };
        BigReal::from_rational(m)
            .mul_pow2(&sc.lead)
            .expect("leading exponent of a tower term is a positive integer")
    }

    /// `floor(log2 |self|)` bounds: returns `(lo, hi)` with `lo <= floor(log2|x|) <= hi`.
    /// They coincide unless the value sits within `2^-guard` of a power of two.
    pub fn floor_log2_bounds(&self, guard: u32) -> Option<(BigReal, BigReal)> {
        if self.is_zero() {
            return None;
        }
        let sc = self.scaled(guard);
        let lo = sc.lo.abs().min(sc.hi.abs());
        let hi = sc.lo.abs().max(sc.hi.abs());
        let flo = if lo.is_positive() { floor_log2(&lo) } else { floor_log2(&hi) - 2 };
        let fhi = floor_log2(&hi);
        Some((&sc.lead + &BigReal::from_int(flo), &sc.lead + &BigReal::from_int(fhi)))
    }

    /// Nearest double; saturates to infinity or zero outside the double range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let sc = self.scaled(80);
        let mid = (&sc.lo + &sc.hi) / rat(2);
        let sign = if mid.is_negative() { -1.0 } else { 1.0 };
        match sc.lead.as_i64() {
            Some(l) => sign * rat_to_f64(&mid.abs(), l),
            None => {
                if sc.lead.is_positive() {
                    sign * f64::INFINITY
                } else {
                    sign * 0.0
                }
            }
        }
    }

    /// `log2 |self|` as a double when the leading exponent fits one.
    pub fn log2_f64(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let sc = self.scaled(80);
        let mid = ((&sc.lo + &sc.hi) / rat(2)).abs();
        let lead = sc.lead.to_f64();
        if !lead.is_finite() {
            return None;
        }
        Some(lead + rat_to_f64(&mid, 0).log2())
    }
}

/// `q · 2^shift` as a double, for positive `q`.
pub(crate) fn rat_to_f64(q: &Rational, shift: i64) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let f = floor_log2(q);
    // 64 significant bits then a single rounding in the conversion.
    let m = mul_pow2_rat(q, 63 - f).floor().to_integer();
    let m = m.to_u64().unwrap_or(u64::MAX) as f64;
    let e = f - 63 + shift;
    if e > 2000 {
        return f64::INFINITY;
    }
    if e < -2200 {
        return 0.0;
    }
    // Split the scaling so intermediate powers stay finite.
    let half = e / 2;
    m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
}

fn concrete_small_exponent(e: &BigReal) -> Option<i64> {
    let q = e.as_rational()?;
    let n = q.to_integer();
    if n <= BigInt::from(FOLD_LIMIT) {
        Some(n.to_i64().expect("exponents below the fold limit fit in i64"))
    } else {
        None
    }
}

fn place(terms: &mut Vec<Term>, low: &mut Rational, q: Rational, e: BigReal) {
    if q.is_zero() {
        return;
    }
    let t = floor_log2(&q);
    let (q, e) = if t == 0 { (q, e) } else { (mul_pow2_rat(&q, -t), &e + &BigReal::from_int(t)) };
    if let Some(k) = concrete_small_exponent(&e) {
        *low = rat_add(low, &mul_pow2_rat(&q, k));
        return;
    }
    for i in 0..terms.len() {
        match e.cmp(&terms[i].exp) {
            Ordering::Greater => {
                terms.insert(i, Term { coeff: q, exp: e });
                return;
            }
            Ordering::Equal => {
                let existing = terms.remove(i);
                place(terms, low, existing.coeff + q, existing.exp);
                return;
            }
            Ordering::Less => {}
        }
    }
    terms.push(Term { coeff: q, exp: e });
}

enum Fix {
    Merge(usize, i64),
    FoldLast(i64),
}

fn find_violation(terms: &[Term], low: &Rational) -> Option<Fix> {
    for i in 0..terms.len().saturating_sub(1) {
        let d = &terms[i].exp - &terms[i + 1].exp;
        if d <= BigReal::from_int(2) {
            let di = d.as_i64().expect("a small exponent gap is concrete");
            return Some(Fix::Merge(i, di));
        }
    }
    let last = terms.last()?;
    if low.is_zero() {
        return None;
    }
    let c = ceil_log2(low) + 2;
    if last.exp <= BigReal::from_int(c) {
        let e = last.exp.as_i64().expect("an exponent below a concrete bound is concrete");
        return Some(Fix::FoldLast(e));
    }
    None
}

fn normalize(raw: Vec<(Rational, BigReal)>, mut low: Rational) -> BigReal {
    let mut terms: Vec<Term> = Vec::new();
    let mut pending = raw;
    loop {
        for (q, e) in pending.drain(..) {
            place(&mut terms, &mut low, q, e);
        }
        match find_violation(&terms, &low) {
            None => break,
            Some(Fix::Merge(i, d)) => {
                let b = terms.remove(i + 1);
                let a = terms.remove(i);
                pending.push((mul_pow2_rat(&a.coeff, d) + b.coeff, b.exp));
            }
            Some(Fix::FoldLast(e)) => {
                let t = terms.pop().expect("violation refers to an existing term");
                low += mul_pow2_rat(&t.coeff, e);
            }
        }
    }
    BigReal { high: terms, low }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigReal {}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigReal {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return rat_cmp(a, b);
        }
        (self - other).signum()
    }
}

impl<'a> Add<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn add(self, o: &'a BigReal) -> BigReal {
        if self.high.is_empty() && o.high.is_empty() {
            return BigReal::from_rational(rat_add(&self.low, &o.low));
        }
        let raw = self
            .high
            .iter()
            .chain(o.high.iter())
            .map(|t| (t.coeff.clone(), t.exp.clone()))
            .collect();
        normalize(raw, rat_add(&self.low, &o.low))
    }
}

impl<'a> Sub<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn sub(self, o: &'a BigReal) -> BigReal {
        self + &(-o)
    }
}

impl<'a> Mul<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn mul(self, o: &'a BigReal) -> BigReal {
        if self.high.is_empty() && o.high.is_empty() {
            return BigReal::from_rational(rat_mul(&self.low, &o.low));
        }
        let mut raw = Vec::new();
        for a in &self.high {
            for b in &o.high {
                raw.push((&a.coeff * &b.coeff, &a.exp + &b.exp));
            }
            if !o.low.is_zero() {
                raw.push((&a.coeff * &o.low, a.exp.clone()));
            }
        }
        if !self.low.is_zero() {
            for b in &o.high {
                raw.push((&b.coeff * &self.low, b.exp.clone()));
            }
        }
        normalize(raw, rat_mul(&self.low, &o.low))
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            high: self.high.iter().map(|t| Term { coeff: -&t.coeff, exp: t.exp.clone() }).collect(),
            low: -&self.low,
        }
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: &'a BigReal) -> BigReal {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for BigReal {
    fn from(n: i64) -> Self {
        BigReal::from_int(n)
    }
}

impl From<Rational> for BigReal {
    fn from(q: Rational) -> Self {
        BigReal::from_rational(q)
    }
}
