//! Fixed-point series with one-sided rounding.
//!
//! Every routine computes a lower and an upper bound separately: the lower
//! series truncates each term down and drops the tail, the upper series
//! rounds each term up and adds a bound for the tail.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::real::{floor_log2, mul_pow2_rat, rat, round_rat_sig, Rational, RoundingMode};
use super::Precision;

const GUARD: u32 = 64;

fn to_fixed(q: &Rational, w: u32, mode: RoundingMode) -> BigInt {
    let s = mul_pow2_rat(q, w as i64);
    match mode {
        RoundingMode::Down => s.floor().to_integer(),
        _ => s.ceil().to_integer(),
    }
}

fn from_fixed(n: BigInt, w: u32) -> Rational {
    mul_pow2_rat(&Rational::from_integer(n), -(w as i64))
}

fn div_floor(n: &BigInt, d: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(n, d)
}

fn div_ceil(n: &BigInt, d: &BigInt) -> BigInt {
    -num_integer::Integer::div_floor(&-n, d)
}

/// Bounds on `atanh(z)` for `0 <= z <= 1/2`, given `z` as fixed-point bounds
/// `zl <= z 2^w <= zh`; results are fixed point over `2^w`.
fn atanh_fixed(zl: &BigInt, zh: &BigInt, w: u32) -> (BigInt, BigInt) {
    let w2 = 2 * w as usize;

    // lower: z^(2k+1) rounded down, each quotient rounded down
    let zl2 = zl * zl;
    let mut p = zl.clone();
    let mut lo = BigInt::zero();
    let mut k: u64 = 0;
    while !p.is_zero() {
        lo += div_floor(&p, &BigInt::from(2 * k + 1));
        p = (&p * &zl2) >> w2;
        k += 1;
    }

    let zh2 = zh * zh;
    let mut p = zh.clone();
    let mut hi = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        if p <= BigInt::one() {
            // remaining terms are at most p + p z^2 + ... <= 2p since z^2 <= 1/4
            hi += 2 * &p;
            break;
        }
        hi += div_ceil(&p, &BigInt::from(2 * k + 1));
        p = ceil_shr(&(&p * &zh2), w2);
        k += 1;
    }
    (lo, hi)
}

fn ceil_shr(n: &BigInt, shift: usize) -> BigInt {
    -((-n) >> shift)
}

/// `n 2^-shift` rounded in the given direction.
fn shift_round(n: &BigInt, shift: i64, up: bool) -> BigInt {
    if shift <= 0 {
        n << (-shift) as usize
    } else if up {
        ceil_shr(n, shift as usize)
    } else {
        n >> shift as usize
    }
}

/// A bound on `exp(u 2^-uw)` for `0 <= u 2^-uw <= 1`, fixed point over `2^w`.
///
/// The series runs on `u / 2^s` and the result is squared `s` times.
fn exp_fixed_nonneg(u: &BigInt, uw: u32, w: u32, up: bool) -> BigInt {
    let s = (w as f64).sqrt() as u32 / 2;
    let wi = w + s + 8;
    let one = BigInt::one() << wi as usize;
    let r = shift_round(u, uw as i64 + s as i64 - wi as i64, up);

    let mut t = one.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 1;
    if up {
        loop {
            if t <= BigInt::one() && k > 2 {
                // tail <= t (r/k) / (1 - r/(k+1)) <= 2t for r <= 1, k >= 2
                sum += 2 * &t;
                break;
            }
            sum += &t;
            t = div_ceil(&ceil_shr(&(&t * &r), wi as usize), &BigInt::from(k));
            k += 1;
        }
    } else {
        while !t.is_zero() {
            sum += &t;
            t = ((&t * &r) >> wi as usize) / k;
            k += 1;
        }
    }
    for _ in 0..s {
        sum = shift_round(&(&sum * &sum), wi as i64, up);
    }
    shift_round(&sum, (wi - w) as i64, up)
}

/// A bound on `exp(r 2^-rw)` for `|r 2^-rw| <= 1`, fixed point over `2^w`.
fn exp_fixed(r: &BigInt, rw: u32, w: u32, up: bool) -> BigInt {
    if r.is_negative() {
        // exp(r) = 1 / exp(-r)
        let e = exp_fixed_nonneg(&-r, rw, w, !up);
        let num = BigInt::one() << (2 * w) as usize;
        if up {
            div_ceil(&num, &e)
        } else {
            div_floor(&num, &e)
        }
    } else {
        exp_fixed_nonneg(r, rw, w, up)
    }
}

fn ln2_cache() -> &'static Mutex<HashMap<u32, (Rational, Rational)>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, (Rational, Rational)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of `ln 2` accurate to about `bits` bits.
pub fn ln2_enclosure(bits: u32) -> (Rational, Rational) {
    // Round up to a multiple of 64 so nearby requests share a cache entry.
    let bits = bits.div_ceil(64) * 64;
    if let Some(v) = ln2_cache().lock().expect("ln2 cache").get(&bits) {
        return v.clone();
    }
    let w = bits + GUARD;
    // ln 2 = 2 atanh(1/3)
    let third = Rational::new(1.into(), 3.into());
    let (lo, hi) = atanh_fixed(&to_fixed(&third, w, RoundingMode::Down), &to_fixed(&third, w, RoundingMode::Up), w);
    let v = (from_fixed(lo * 2, w), from_fixed(hi * 2, w));
    ln2_cache().lock().expect("ln2 cache").insert(bits, v.clone());
    v
}

/// `ln 2` as fixed-point bounds over `2^w`.
fn ln2_fixed(w: u32) -> (BigInt, BigInt) {
    let (lo, hi) = ln2_enclosure(w);
    (to_fixed(&lo, w, RoundingMode::Down), to_fixed(&hi, w, RoundingMode::Up))
}

/// `exp(x) ∈ [lo, hi] · 2^k` with `lo, hi` close to 1.
pub fn exp_rational(x: &Rational, prec: Precision) -> (BigInt, Rational, Rational) {
    if x.is_zero() {
        return (BigInt::zero(), rat(1), rat(1));
    }
    let int_bits = if x.abs() < rat(1) { 0 } else { (floor_log2(x) + 2) as u32 };
    let w = prec.bits() + GUARD;
    let ww = w + int_bits + 8;
    let (l2lo, l2hi) = ln2_fixed(ww);
    let x_lo = to_fixed(x, ww, RoundingMode::Down);
    let x_hi = to_fixed(x, ww, RoundingMode::Up);
    let k = div_floor(&(2 * &x_lo + &l2lo), &(2 * &l2lo));
    // r = x - k ln 2, with |r| <= 1
    let (r_lo, r_hi) = if k.is_negative() {
        (&x_lo - &k * &l2lo, &x_hi - &k * &l2hi)
    } else {
        (&x_lo - &k * &l2hi, &x_hi - &k * &l2lo)
    };
    let m_lo = from_fixed(exp_fixed(&r_lo, ww, w, false), w);
    let m_hi = from_fixed(exp_fixed(&r_hi, ww, w, true), w);
    (
        k,
        round_rat_sig(&m_lo, w, RoundingMode::Down),
        round_rat_sig(&m_hi, w, RoundingMode::Up),
    )
}

/// Enclosure of `ln y` for rational `y > 0`.
pub fn ln_rational(y: &Rational, prec: Precision) -> (Rational, Rational) {
    assert!(y.is_positive(), "ln of a non-positive rational");
    let w = prec.bits() + GUARD;
    // y = 2^k m with m = mn/md in [1/sqrt 2, sqrt 2]
    let mut k = floor_log2(y);
    let (mut mn, mut md) = if k >= 0 {
        (y.numer().clone(), y.denom() << k as usize)
    } else {
        (y.numer() << (-k) as usize, y.denom().clone())
    };
    if &mn * &mn > 2 * &md * &md {
        md <<= 1;
        k += 1;
    }
    if 2 * &mn * &mn < &md * &md {
        mn <<= 1;
        k -= 1;
    }
    // ln m = 2 atanh z with z = (m - 1)/(m + 1)
    let num = (&mn - &md) << w as usize;
    let den = &mn + &md;
    let na = num.abs();
    let (a_lo, a_hi) = atanh_fixed(&div_floor(&na, &den), &div_ceil(&na, &den), w);
    let (a_lo, a_hi) = if num.is_negative() { (-a_hi, -a_lo) } else { (a_lo, a_hi) };
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let wk = w + kbits;
    let (l2lo, l2hi) = ln2_fixed(wk);
    let kb = BigInt::from(k);
    let (klo, khi) = if k < 0 { (&kb * &l2hi, &kb * &l2lo) } else { (&kb * &l2lo, &kb * &l2hi) };
    let lo = shift_round(&klo, kbits as i64, false) + 2 * a_lo;
    let hi = shift_round(&khi, kbits as i64, true) + 2 * a_hi;
    (from_fixed(lo, w), from_fixed(hi, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::real::rat_frac;

    fn f(q: &Rational) -> f64 {
        crate::numerics::real::rat_to_f64(&q.abs(), 0) * if q.is_negative() { -1.0 } else { 1.0 }
    }

    #[test]
    fn ln2_brackets_double() {
        let (lo, hi) = ln2_enclosure(256);
        assert!(lo < hi);
        assert!((f(&lo) - std::f64::consts::LN_2).abs() < 1e-15);
        let width = &hi - &lo;
        assert!(width < crate::numerics::real::pow2_rat(-250));
    }

    #[test]
    fn exp_of_ln2_contains_two() {
        let (l2lo, l2hi) = ln2_enclosure(1024);
        let p = Precision(256);
        let (k, lo, _) = exp_rational(&l2lo, p);
        let (k2, _, hi) = exp_rational(&l2hi, p);
        let lo = mul_pow2_rat(&lo, k.try_into().unwrap());
        let hi = mul_pow2_rat(&hi, k2.try_into().unwrap());
        assert!(lo <= rat(2) && rat(2) <= hi);
    }

    #[test]
    fn exp_matches_double() {
        for &x in &[-3.5f64, -0.25, 0.0, 0.1, 1.0, 10.0, 700.0] {
            let q = Rational::from_float(x).unwrap();
            let (k, lo, hi) = exp_rational(&q, Precision(128));
            let k: i64 = k.try_into().unwrap();
            let lo = f(&lo) * 2f64.powi(k as i32);
            let hi = f(&hi) * 2f64.powi(k as i32);
            let e = x.exp();
            assert!((lo - e).abs() <= 4.0 * f64::EPSILON * e, "{x}");
            assert!((hi - e).abs() <= 4.0 * f64::EPSILON * e, "{x}");
        }
    }

    #[test]
    fn ln_matches_double() {
        for &(n, d) in &[(1, 1), (3, 1), (1, 3), (1000, 7), (5, 4)] {
            let (lo, hi) = ln_rational(&rat_frac(n, d), Precision(128));
            let e = (n as f64 / d as f64).ln();
            assert!(lo <= hi);
            assert!((f(&lo) - e).abs() < 1e-14 && (f(&hi) - e).abs() < 1e-14);
        }
        let (lo, hi) = ln_rational(&rat(1), Precision(128));
        assert!(lo <= rat(0) && rat(0) <= hi);
    }
}
