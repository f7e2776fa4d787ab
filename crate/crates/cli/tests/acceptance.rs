//! The ten acceptance criteria, one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use logconvex::construction::{divergence_certificate, subexponential_check, verify, ConstructionReport};
use logconvex::numerics::{BigReal, IntervalReal, Precision, Rational};
use logconvex::piecewise::{
    maximal_function, ratio_transform, segment_integral_log, Convexity, PiecewiseLogLinear,
};
use logconvex::theorems::{theorem_1_5_witness, xx_demo, Theorem15Branch, GAP_CHECKS};
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIN: &str = env!("CARGO_BIN_EXE_logconvex");
const P: Precision = Precision(256);
const SEED: u64 = 0x5eed_1c0d;

type Outcome = Result<String, String>;

struct Ctx {
    dir: tempfile::TempDir,
    report: Option<ConstructionReport>,
}

impl Ctx {
    fn report(&mut self) -> Result<&ConstructionReport, String> {
        if self.report.is_none() {
            let path = self.dir.path().join("shared.json");
            run_construct(&path)?;
            self.report = Some(load(&path)?);
        }
        Ok(self.report.as_ref().expect("set above"))
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn int(n: i64) -> BigReal {
    BigReal::from_int(n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_construct(path: &Path) -> Result<Duration, String> {
    let start = Instant::now();
    let out = Command::new(BIN)
        .args(["construct", "--schedule", "harmonic:1", "--depth", "8", "--precision", "256", "-o"])
        .arg(path)
        .output()
        .map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(out.status.success(), || format!("construct exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)))?;
    Ok(took)
}

fn load(path: &Path) -> Result<ConstructionReport, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

#[derive(Clone, Copy)]
enum Kind {
    Any,
    Decreasing,
    Increasing,
}

fn random_convex(rng: &mut ChaCha8Rng, kind: Kind) -> PiecewiseLogLinear {
    let pieces = rng.gen_range(1..=6);
    let mut slopes: Vec<Rational> = (0..pieces)
        .map(|_| {
            let d = rng.gen_range(1..=8);
            let hi = match kind {
                Kind::Decreasing => 0,
                _ => 3 * d,
            };
            q(rng.gen_range(-5 * d..=hi), d)
        })
        .collect();
    if let Kind::Increasing = kind {
        let d = rng.gen_range(1..=8);
        slopes.push(q(rng.gen_range(1..=3 * d), d));
    }
    slopes.sort();
    slopes.dedup();
    let mut at = q(0, 1);
    let mut breaks = Vec::new();
    for _ in 1..slopes.len() {
        let d = rng.gen_range(1..=4);
        at += q(rng.gen_range(1..=12 * d), d);
        breaks.push(BigReal::from_rational(at.clone()));
    }
    let d = rng.gen_range(1..=4);
    let b0 = BigReal::from_rational(q(rng.gen_range(-6 * d..=6 * d), d));
    PiecewiseLogLinear::from_slopes(b0, &slopes, &breaks, Convexity::Convex).expect("sorted slopes")
}

fn c1_construction(ctx: &mut Ctx) -> Outcome {
    let path = ctx.dir.path().join("c1.json");
    let took = run_construct(&path)?;
    ensure(took < Duration::from_secs(30), || format!("took {took:?}"))?;
    let rep = load(&path)?;
    let mut verdicts = 0;
    for l in rep.levels.iter().chain(std::iter::once(&rep.next)) {
        if let Some(c) = &l.certificate {
            ensure(c.c1.is_certain() && c.c2.is_certain(), || format!("indeterminate verdict at level {}", l.n))?;
            ensure(c.passed(), || format!("level {} not certified", l.n))?;
            verdicts += 2;
        }
    }
    ensure(rep.integral.verdict.is_certain(), || "integral verdict indeterminate".into())?;
    let a: Vec<&BigReal> = rep.levels.iter().map(|l| &l.a).collect();
    ensure(*a[1] == int(2) && *a[2] == int(4) && *a[3] == int(16), || format!("a_1..a_3 = {}, {}, {}", a[1], a[2], a[3]))?;
    let (b1, b2) = (&rep.levels[1].b, &rep.levels[2].b);
    ensure(*b1 == int(-1) && *b2 == BigReal::from_rational(q(-5, 3)), || format!("b_1, b_2 = {b1}, {b2}"))?;
    Ok(format!("depth 8 in {:.2}s, {} verdicts all certain, a = 2,4,16, b = -1,-5/3", took.as_secs_f64(), verdicts + 1))
}

fn c2_integrability(ctx: &mut Ctx) -> Outcome {
    let rep = ctx.report()?;
    let ib = &rep.integral;
    let want = BigReal::from_rational(q(2, 1) - q(1, 256));
    ensure(ib.bound == want, || format!("bound {} != 2 - 2^-8", ib.bound))?;
    ensure(*ib.integral.hi() < ib.bound, || "enclosure not below bound".into())?;
    let width = ib.integral.width();
    let scale = BigReal::from_rational(Rational::from_integer(num_traits::pow(10.into(), 20)));
    ensure(&width * &scale < *ib.integral.lo(), || format!("relative width {:e}", ib.integral.relative_width_f64()))?;
    Ok(format!(
        "bound 511/256, integral in {} (relative width {:.1e})",
        short(&ib.integral),
        ib.integral.relative_width_f64()
    ))
}

fn short(iv: &IntervalReal) -> String {
    format!("[{:.15}, {:.15}]", iv.lo().to_f64(), iv.hi().to_f64())
}

fn c3_divergence(ctx: &mut Ctx) -> Outcome {
    let rep = ctx.report()?.clone();
    let mut parts = Vec::new();
    for r in [q(1, 2), q(1, 1), q(2, 1), q(3, 1)] {
        let ceil = r.ceil().to_integer().to_usize().expect("small");
        let start = ceil.max(1);
        let cert = divergence_certificate(&rep, &r, start, P).map_err(|e| format!("r = {r}: {e}"))?;
        let n0 = cert.threshold_index;
        ensure(n0 <= ceil + 2, || format!("r = {r}: n_0 = {n0} > ceil(r) + 2"))?;
        let threshold = BigReal::from_rational(cert.threshold.clone());
        for (i, c) in cert.contributions.iter().enumerate() {
            if c.n < n0 {
                continue;
            }
            ensure(c.lower >= threshold, || format!("r = {r}: level {} contributes {}", c.n, c.lower))?;
            let step = if i == 0 { cert.partial_sums[0].clone() } else { &cert.partial_sums[i] - &cert.partial_sums[i - 1] };
            ensure(step >= threshold, || format!("r = {r}: partial sum step at level {}", c.n))?;
        }
        ensure(cert.contributions.last().map(|c| c.n) == Some(rep.depth - 1), || "certificate stops early".into())?;
        if r == q(1, 1) {
            for c in &cert.contributions {
                let gap = &rep.levels[c.n + 1].a - &rep.levels[c.n].a;
                ensure(c.lower == gap && gap > int(1), || format!("r = 1: level {} gives {} not {}", c.n, c.lower, gap))?;
            }
        }
        parts.push(format!("r={r}: n_0={n0}"));
    }
    Ok(format!("{}; r=1 gaps exact", parts.join(", ")))
}

fn c4_subexponential(ctx: &mut Ctx) -> Outcome {
    let rep = ctx.report()?;
    let sub = subexponential_check(rep, &q(1, 5), P).map_err(|e| e.to_string())?;
    ensure(sub.steps.iter().all(|s| s.sandwich), || "sandwich fails".into())?;
    ensure(sub.below_bound, || "|f(a_8)|/a_8 >= 0.2".into())?;
    ensure(sub.steps.iter().filter(|s| s.n >= 3).all(|s| s.decreasing), || "trend not decreasing from level 3".into())?;
    let last = sub.chords.last().expect("depth 8");
    Ok(format!("sandwich at {} steps, |f(a_8)|/a_8 in [{:.3e}, {:.3e}] < 0.2", sub.steps.len(), last.lo().to_f64(), last.hi().to_f64()))
}

/// Grid of `b >= a`: linear near `a`, geometric beyond, plus breakpoints.
fn b_grid(f: &PiecewiseLogLinear, a: &BigReal) -> Vec<BigReal> {
    let mut out: Vec<BigReal> = (0..=400).map(|j| a.mul_rational(&q(50 + j, 50))).collect();
    out.extend((1..=60).map(|j| a.mul_rational(&Rational::from_integer(num_traits::pow(2.into(), j)))));
    out.extend(f.breakpoints().filter(|x| *x >= a).cloned());
    out
}

fn check_maximal(f: &PiecewiseLogLinear, a: &BigReal) -> Result<(), String> {
    let res = maximal_function(f, a).map_err(|e| e.to_string())?;
    ensure(res.argmax == *a, || format!("argmax {} for a = {a}", res.argmax))?;
    let exact = &f.eval_exact(a).map_err(|e| e.to_string())? - &f.eval_exact(&a.mul_rational(&q(2, 1))).map_err(|e| e.to_string())?;
    ensure(res.log_value.contains(&exact), || format!("value misses f(a) - f(2a) at a = {a}"))?;
    let cap = res.log_value.hi() + &res.log_value.width();
    for b in b_grid(f, a) {
        let v = &f.eval_exact(&b).map_err(|e| e.to_string())? - &f.eval_exact(&(&b + a)).map_err(|e| e.to_string())?;
        ensure(v <= cap, || format!("grid beats maximum at a = {a}, b = {b}"))?;
    }
    Ok(())
}

fn c5_maximal(ctx: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let rep = ctx.report()?;
    let mut points: Vec<BigReal> = (0..8).map(|_| BigReal::from_rational(q(rng.gen_range(1..=4800), 8))).collect();
    points.push(rep.levels[4].a.clone());
    points.push(rep.levels[5].a.clone());
    for a in &points {
        check_maximal(&rep.function, a)?;
    }
    for _ in 0..100 {
        let f = random_convex(&mut rng, Kind::Any);
        for _ in 0..10 {
            let a = BigReal::from_rational(q(rng.gen_range(1..=800), rng.gen_range(1..=8)));
            check_maximal(&f, &a)?;
        }
    }
    Ok("argmax = a and value f(a) - f(2a) at 10 points of h and 100 x 10 random cases; grid search never larger".into())
}

fn c6_decreasing(_: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let (mut points, mut windows, mut finite) = (0, 0, 0);
    for i in 0..100 {
        let f = random_convex(&mut rng, Kind::Decreasing);
        let g2 = ratio_transform(&f, &q(2, 1)).map_err(|e| e.to_string())?;
        for p in g2.pieces() {
            let x = &p.lo;
            let fx = f.eval_exact(x).map_err(|e| e.to_string())?;
            let f2x = f.eval_exact(&x.mul_rational(&q(2, 1))).map_err(|e| e.to_string())?;
            ensure(f2x <= fx, || format!("case {i}: h(2x) > h(x) at {x}"))?;
            points += 1;
        }
        let rep = theorem_1_5_witness(&f, P).map_err(|e| e.to_string())?;
        let Theorem15Branch::Decreasing { windows: w, g2_integrable, log_integral_h, .. } = &rep.branch else {
            return Err(format!("case {i}: increasing branch for a decreasing F"));
        };
        ensure(rep.branch_checks_pass, || format!("case {i}: branch checks fail"))?;
        for win in w {
            ensure(win.ordered, || format!("case {i}: window [0, {}] out of order", win.x))?;
        }
        windows += w.len();
        if *g2_integrable {
            finite += 1;
            ensure(log_integral_h.is_some(), || format!("case {i}: h not integrable"))?;
        }
    }
    Ok(format!(
        "100 F: h(2x) <= h(x) at {points} transform breakpoints; {windows} window integrals ordered; h^2(x)/h(2x) integrable in {finite}/100"
    ))
}

fn c7_increasing(_: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    for i in 0..100 {
        let f = random_convex(&mut rng, Kind::Increasing);
        let rep = theorem_1_5_witness(&f, P).map_err(|e| e.to_string())?;
        let Theorem15Branch::Increasing { threshold, gap, ratio_lower, gap_holds, .. } = &rep.branch else {
            return Err(format!("case {i}: decreasing branch for an increasing F"));
        };
        ensure(gap.is_positive() && *gap_holds, || format!("case {i}: gap check"))?;
        let c = BigReal::from_rational(gap.clone());
        let start = &threshold.floor() + &BigReal::one();
        for k in 0..GAP_CHECKS as i64 {
            let n = &start + &int(k);
            let d = &f.eval_exact(&(&n + &BigReal::one())).map_err(|e| e.to_string())? - &f.eval_exact(&n).map_err(|e| e.to_string())?;
            ensure(d >= c, || format!("case {i}: f({n}+1) - f({n}) < c"))?;
        }
        ensure(*ratio_lower.lo() > BigReal::one(), || format!("case {i}: e^c not above 1"))?;
    }
    Ok(format!("100 F: f(n+1) - f(n) >= c > 0 exactly at {GAP_CHECKS} integers past A, e^c > 1 certified"))
}

fn c8_xx(_: &mut Ctx) -> Outcome {
    let rep = xx_demo(12, 64, 100, P).map_err(|e| e.to_string())?;
    let want = 1.0 / 4f64.ln();
    let err = (rep.ratio_integral.mid_f64() - want).abs();
    ensure(err < 1e-12 && rep.ratio_integral.relative_width_f64() < 1e-12, || format!("1/ln 4 error {err:e}"))?;
    let last = rep.partials.last().expect("X = 12");
    ensure(last.x == 12 && *last.integral.lo() > int(1_000_000), || "partial integral not above 1e6".into())?;
    let oracle = quadrature::integrate(|x: f64| x.powf(x), 1.0, 12.0, 1e-3).integral;
    let (lo, hi) = (last.integral.lo().to_f64(), last.integral.hi().to_f64());
    ensure(lo <= oracle * (1.0 + 1e-12) && oracle <= hi * (1.0 + 1e-12), || format!("oracle {oracle:e} outside [{lo:e}, {hi:e}]"))?;
    let r100 = rep.ratios.iter().find(|r| r.n == 100).ok_or("no ratio at n = 100")?;
    let direct = (100.0 * 100f64.ln() - 101.0 * 101f64.ln()).exp();
    ensure(*r100.ratio.hi() < BigReal::from_rational(q(1, 100)), || "h(100)/h(101) >= 0.01".into())?;
    ensure((r100.ratio.mid_f64() - direct).abs() < 1e-15, || "ratio disagrees with direct evaluation".into())?;
    Ok(format!("1/ln4 error {err:.1e}; int_1^12 x^x in [{lo:.6e}, {hi:.6e}]; h(100)/h(101) = {:.6e}", r100.ratio.mid_f64()))
}

fn c9_quadrature(_: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let md = rng.gen_range(1..=64);
        let m = q(rng.gen_range(-4 * md..=4 * md), md);
        let b = q(rng.gen_range(-240..=240), 8);
        let x1 = q(rng.gen_range(0..=160), 4);
        let len = q(rng.gen_range(1..=320), 16);
        let tail = m.is_negative() && rng.gen_bool(0.5);
        let x2 = BigReal::from_rational(&x1 + &len);
        let got = segment_integral_log(
            &m,
            &BigReal::from_rational(b.clone()),
            &BigReal::from_rational(x1.clone()),
            if tail { None } else { Some(&x2) },
            P,
        )
        .map_err(|e| e.to_string())?
        .exp(P)
        .mid_f64();
        let (mf, bf, a) = (m.to_f64().unwrap(), b.to_f64().unwrap(), x1.to_f64().unwrap());
        let end = if tail { a + 45.0 / mf.abs() } else { x2.to_f64() };
        let f = |x: f64| (mf * x + bf).exp();
        let rough = quadrature::integrate(f, a, end, 1e-6).integral;
        let want = quadrature::integrate(f, a, end, rough * 1e-15).integral;
        let rel = (got - want).abs() / want;
        ensure(rel < 1e-10, || format!("piece {i}: m = {m}, b = {b}, relative error {rel:e}"))?;
        worst = worst.max(rel);
    }
    Ok(format!("1000 pieces, worst relative error {worst:.1e}"))
}

fn c10_persistence(ctx: &mut Ctx) -> Outcome {
    let a = ctx.dir.path().join("p1.json");
    let b = ctx.dir.path().join("p2.json");
    run_construct(&a)?;
    run_construct(&b)?;
    let (ta, tb) = (std::fs::read(&a).map_err(|e| e.to_string())?, std::fs::read(&b).map_err(|e| e.to_string())?);
    ensure(ta == tb, || "two runs differ".into())?;
    let rep = load(&a)?;
    let mut again = serde_json::to_string_pretty(&rep).map_err(|e| e.to_string())?;
    again.push('\n');
    ensure(again.as_bytes() == ta.as_slice(), || "re-serialization differs".into())?;
    verify(&rep).map_err(|e| e.to_string())?;
    let out = Command::new(BIN).arg("verify").arg(&a).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(v["canonical"] == true, || "verify reports a non-canonical file".into())?;
    Ok(format!("{} bytes identical across runs and after re-serialization; verify re-certifies", ta.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut Ctx) -> Outcome); 10] = [
        ("construction soundness", c1_construction),
        ("integrability bound", c2_integrability),
        ("divergence for r in {1/2, 1, 2, 3}", c3_divergence),
        ("subexponential condition", c4_subexponential),
        ("maximal function", c5_maximal),
        ("decreasing branch", c6_decreasing),
        ("increasing branch", c7_increasing),
        ("x^x example", c8_xx),
        ("quadrature oracle", c9_quadrature),
        ("persistence", c10_persistence),
    ];
    let mut ctx = Ctx { dir: tempfile::tempdir().expect("temp dir"), report: None };
    let mut failed = 0;
    println!();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| check(&mut ctx))).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("\nacceptance: {} passed, {failed} failed\n", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
