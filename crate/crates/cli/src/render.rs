use std::f64::consts::LOG10_2;

use logconvex::numerics::{BigReal, IntervalReal, Rational};
use logconvex::piecewise::format_rational;

/// Rationals up to this many characters are printed exactly.
const EXACT_WIDTH: usize = 24;

/// Shortest round-trip decimal, switching to exponent form outside `[1e-5, 1e16)`.
pub fn double(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn fits_double(x: &BigReal) -> Option<f64> {
    if x.is_zero() {
        return Some(0.0);
    }
    let v = x.to_f64();
    (v.is_finite() && v.is_normal()).then_some(v)
}

/// `log10:<v>` for `|x|`, nesting the prefix when even `log10 |x|` leaves the double range.
fn log10_text(x: &BigReal) -> String {
    if let Some(l2) = x.log2_f64() {
        return format!("log10:{}", double(l2 * LOG10_2));
    }
    let (e, _) = x.floor_log2_bounds(64).expect("nonzero");
    let scaled = e.abs().mul_rational(&Rational::from_float(LOG10_2).expect("finite"));
    let sign = if e.is_negative() { "-" } else { "" };
    format!("log10:{sign}{}", log10_text(&scaled))
}

fn signed_log10(x: &BigReal) -> String {
    let body = log10_text(&x.abs());
    if x.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

/// Human rendering: short rationals exactly, everything else on a log10 scale.
pub fn human(x: &BigReal) -> String {
    if let Some(q) = x.as_rational() {
        let s = format_rational(q);
        if s.len() <= EXACT_WIDTH {
            return s;
        }
    }
    match fits_double(x) {
        Some(v) if v.abs() < 1e15 => double(v),
        _ => signed_log10(x),
    }
}

pub fn interval(iv: &IntervalReal) -> String {
    if iv.is_point() {
        return human(iv.lo());
    }
    match (fits_double(iv.lo()), fits_double(iv.hi())) {
        (Some(lo), Some(hi)) => format!("[{lo:.17e}, {hi:.17e}]"),
        _ => format!("[{}, {}]", human(iv.lo()), human(iv.hi())),
    }
}

/// CSV rendering: doubles where they fit, `log10:` otherwise.
pub fn csv(x: &BigReal, force_log: bool) -> String {
    if x.is_zero() {
        return "0".into();
    }
    match fits_double(x) {
        Some(v) if !force_log => double(v),
        _ => signed_log10(x),
    }
}
