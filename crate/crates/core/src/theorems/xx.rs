use serde::{Deserialize, Serialize};

use super::TheoremError;
use crate::numerics::{ln2, BigReal, IntervalReal, Precision, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XxPartial {
    pub x: u32,
    /// Enclosure of `∫_1^x t^t dt`.
    pub integral: IntervalReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub n: u32,
    /// Enclosure of `n^n / (n+1)^(n+1)`.
    pub ratio: IntervalReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XxReport {
    /// `∫_0^∞ h^2(x)/h(2x) dx = ∫_0^∞ 2^{-2x} dx = 1/ln 4`.
    pub ratio_integral: IntervalReal,
    pub partials: Vec<XxPartial>,
    pub ratios: Vec<RatioPoint>,
    pub quad_points: usize,
}

/// Enclosure of `x^x = e^{x ln x}` at a rational `x > 0`.
fn xx_at(x: &Rational, prec: Precision) -> Result<IntervalReal, TheoremError> {
    let lx = IntervalReal::from_rational(x.clone()).ln(prec)?;
    Ok(lx.mul_rational(x).exp(prec))
}

/// The `x^x` example: `h^2(x)/h(2x) = 2^{-2x}` is integrable while `h` is
/// not, and `h(n)/h(n+1) -> 0`.
///
/// Partial integrals use `quad_points` nodes per unit; since `x^x` is convex
/// the midpoint sum bounds the integral from below and the trapezoid sum
/// from above.
pub fn xx_demo(x_max: u32, quad_points: usize, ratio_max: u32, prec: Precision) -> Result<XxReport, TheoremError> {
    if x_max < 2 {
        return Err(TheoremError::Domain(format!("X_max = {x_max} must exceed 1")));
    }
    if quad_points == 0 {
        return Err(TheoremError::Domain("need at least one quadrature point per unit".into()));
    }
    let ratio_integral = ln2(prec).mul_rational(&Rational::from_integer(2.into())).recip(prec)?;

    let k = quad_points as i64;
    let step = Rational::new(1.into(), k.into());
    let half = Rational::new(1.into(), 2.into());
    let mut lo = BigReal::zero();
    let mut hi = BigReal::zero();
    let mut left = xx_at(&Rational::from_integer(1.into()), prec)?;
    let mut partials = Vec::new();
    for unit in 1..x_max {
        for j in 0..k {
            let x0 = Rational::from_integer(unit.into()) + &step * Rational::from_integer(j.into());
            let mid = xx_at(&(&x0 + &step * &half), prec)?;
            let right = xx_at(&(&x0 + &step), prec)?;
            lo = &lo + &mid.lo().mul_rational(&step);
            hi = &hi + &(left.hi() + right.hi()).mul_rational(&(&step * &half));
            left = right;
        }
        partials.push(XxPartial { x: unit + 1, integral: IntervalReal::new(lo.clone(), hi.clone()).round_outward(prec) });
    }

    let mut ratios = Vec::new();
    for n in 1..=ratio_max {
        let a = Rational::from_integer(n.into());
        let b = Rational::from_integer((n + 1).into());
        let la = IntervalReal::from_rational(a.clone()).ln(prec)?.mul_rational(&a);
        let lb = IntervalReal::from_rational(b.clone()).ln(prec)?.mul_rational(&b);
        ratios.push(RatioPoint { n, ratio: la.sub(&lb).exp(prec) });
    }
    Ok(XxReport { ratio_integral, partials, ratios, quad_points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_values() {
        let rep = xx_demo(4, 16, 3, Precision::DEFAULT).unwrap();
        let expect = 1.0 / 4f64.ln();
        assert!((rep.ratio_integral.mid_f64() - expect).abs() < 1e-15);
        assert!(rep.ratios[0].ratio.contains(&BigReal::from_rational(Rational::new(1.into(), 4.into()))));
        // ∫_1^2 x^x dx = 2.0504462...
        let first = &rep.partials[0].integral;
        assert!(first.lo().to_f64() < 2.0504463 && first.hi().to_f64() > 2.0504462);
        assert!(xx_demo(1, 16, 3, Precision::DEFAULT).is_err());
    }
}
