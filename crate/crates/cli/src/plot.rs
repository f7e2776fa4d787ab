use std::f64::consts::LOG10_E;

use anyhow::Result;
use logconvex::numerics::{BigReal, Rational};
use logconvex::piecewise::{format_rational, ratio_transform, PiecewiseLogLinear};

use crate::render;

/// Range end used when none is given: twice the last breakpoint.
pub fn default_end(f: &PiecewiseLogLinear) -> BigReal {
    match f.breakpoints().last() {
        Some(a) => a.mul_rational(&Rational::from_integer(2.into())),
        None => BigReal::from_int(16),
    }
}

/// `0`, `end`, every breakpoint in between, and `samples - 2` fill points
/// spread uniformly in `log10 x` over `[1, end]`.
pub fn sample_points(f: &PiecewiseLogLinear, end: &BigReal, samples: usize) -> Vec<BigReal> {
    let mut xs = vec![BigReal::zero(), end.clone()];
    xs.extend(f.breakpoints().filter(|a| *a <= end).cloned());
    let steps = (samples - 1) as i64;
    let e = end.floor_log2_bounds(64).map(|(lo, _)| lo);
    let end_f = end.to_f64();
    for i in 1..steps {
        let t = Rational::new(i.into(), steps.into());
        let x = if end_f.is_finite() && end_f > 1.0 {
            BigReal::from_f64(end_f.powf(i as f64 / steps as f64)).expect("finite")
        } else {
            match &e {
                Some(e) if e.is_positive() => BigReal::pow2(&e.mul_rational(&t).floor()).expect("integer exponent"),
                _ => end.mul_rational(&t),
            }
        };
        xs.push(x);
    }
    xs.sort();
    xs.dedup();
    xs
}

/// CSV text with columns `x, f(x), log10 h(x)` and one `log10 g_r(x)` column per `r`.
pub fn plot_csv(
    f: &PiecewiseLogLinear,
    end: &BigReal,
    samples: usize,
    rs: &[Rational],
    force_log: bool,
) -> Result<String> {
    let log10e = Rational::from_float(LOG10_E).expect("finite");
    let transforms = rs.iter().map(|r| ratio_transform(f, r)).collect::<Result<Vec<_>, _>>()?;
    let mut out = String::from("x,f(x),log10 h(x)");
    for r in rs {
        out.push_str(&format!(",log10 g_{}(x)", format_rational(r)));
    }
    out.push('\n');
    for x in sample_points(f, end, samples) {
        let fx = f.eval_exact(&x)?;
        let mut row = vec![
            render::csv(&x, force_log),
            render::csv(&fx, force_log),
            render::csv(&fx.mul_rational(&log10e), force_log),
        ];
        for g in &transforms {
            row.push(render::csv(&g.eval_exact(&x)?.mul_rational(&log10e), force_log));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}
