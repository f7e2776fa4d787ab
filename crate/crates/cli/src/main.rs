mod plot;
mod render;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use logconvex::construction::{
    construct, divergence_certificate, verify, ConstructionError, ConstructionReport, SlopeSchedule,
};
use logconvex::numerics::{parse_rational, BigReal, Precision, Rational, Verdict};
use logconvex::piecewise::{format_rational, integral_log, maximal_function, PiecewiseLogLinear};
use logconvex::theorems::{theorem_1_5_witness, xx_demo, Theorem15Branch};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "logconvex", version, about = "Certified piecewise log-linear functions")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "LOGCONVEX_PRECISION", default_value_t = Precision::DEFAULT.0,
          value_parser = clap::value_parser!(u32).range(64..=Precision::CAP.0 as i64))]
    precision: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write JSON here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build and certify the counterexample.
    Construct {
        #[arg(long, default_value = "harmonic:1")]
        schedule: SlopeSchedule,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=64))]
        depth: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Re-certify a stored report.
    Verify { path: PathBuf },
    /// Enclose the log of an integral of `h`.
    Integrate {
        path: PathBuf,
        #[arg(long, default_value = "0", value_parser = rational)]
        lo: Rational,
        /// Upper limit; infinity when omitted.
        #[arg(long, value_parser = rational)]
        hi: Option<Rational>,
        #[command(flatten)]
        out: Output,
    },
    /// Divergence certificates for `h^r(x)/h(rx)`.
    Ratio {
        path: PathBuf,
        #[arg(long = "r", required = true, value_delimiter = ',', value_parser = rational)]
        r: Vec<Rational>,
        /// First level; defaults to `max(1, ceil(r))`.
        #[arg(long)]
        n0: Option<usize>,
        #[arg(long)]
        partial_sums: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate the maximal function at the given points.
    Maxfn {
        path: PathBuf,
        #[arg(long, required = true, value_delimiter = ',', value_parser = rational)]
        points: Vec<Rational>,
        #[command(flatten)]
        out: Output,
    },
    /// Run both branches of the dichotomy on a convex function.
    Theorem {
        path: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// The `x^x` example.
    DemoXx {
        #[arg(long = "X", alias = "x-max", default_value_t = 12, value_parser = clap::value_parser!(u32).range(2..))]
        x_max: u32,
        #[arg(long, default_value_t = 64)]
        quad_points: usize,
        #[arg(long, default_value_t = 100)]
        ratio_max: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Export samples as CSV.
    Plot {
        path: PathBuf,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..))]
        samples: u64,
        /// Also emit `log10 g_r` columns.
        #[arg(long = "r", value_delimiter = ',', value_parser = rational)]
        r: Vec<Rational>,
        /// Range end; twice the last breakpoint by default.
        #[arg(long, value_parser = rational)]
        x_max: Option<Rational>,
        /// Render every value as log10.
        #[arg(long)]
        log10: bool,
        #[command(flatten)]
        out: Output,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A run either passes every certification or names what failed.
struct Run {
    json: String,
    summary: String,
    failures: Vec<String>,
}

impl Run {
    fn new(value: &impl serde::Serialize) -> Result<Run> {
        Ok(Run { json: to_json(value)?, summary: String::new(), failures: Vec::new() })
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.summary.push_str(s.as_ref());
        self.summary.push('\n');
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }
}

fn to_json(value: &impl serde::Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

enum Input {
    Report(Box<ConstructionReport>),
    Function(PiecewiseLogLinear),
}

impl Input {
    fn function(&self) -> &PiecewiseLogLinear {
        match self {
            Input::Report(r) => &r.function,
            Input::Function(f) => f,
        }
    }
}

fn load(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parse error in {}", path.display()))?;
    if value.get("levels").is_some() {
        let rep = serde_json::from_value(value).with_context(|| format!("parse error in {}", path.display()))?;
        Ok(Input::Report(Box::new(rep)))
    } else {
        let f = serde_json::from_value(value).with_context(|| format!("parse error in {}", path.display()))?;
        Ok(Input::Function(f))
    }
}

fn load_report(path: &Path) -> Result<ConstructionReport> {
    match load(path)? {
        Input::Report(r) => Ok(*r),
        Input::Function(_) => bail!("{} holds a bare function, not a construction report", path.display()),
    }
}

fn level_table(rep: &ConstructionReport) -> String {
    let mut s = format!("{:>3}  {:<28} {:<28} {:<10}\n", "n", "a_n", "b_n", "m_n");
    for l in rep.levels.iter().chain(std::iter::once(&rep.next)) {
        let _ = writeln!(s, "{:>3}  {:<28} {:<28} {:<10}", l.n, render::human(&l.a), render::human(&l.b), format_rational(&l.slope));
    }
    s
}

fn cmd_construct(schedule: &SlopeSchedule, depth: usize, prec: Precision) -> Result<Run> {
    let rep = construct(schedule, depth, prec)?;
    let mut run = Run::new(&rep)?;
    run.line(format!("schedule {}  depth {}  precision {} (used {})", rep.schedule, rep.depth, rep.precision, rep.precision_used));
    run.summary.push_str(&level_table(&rep));
    let ib = &rep.integral;
    run.line(format!("integral   {}", render::interval(&ib.integral)));
    run.line(format!("bound      {}", render::human(&ib.bound)));
    run.line(format!("verdict    {}", ib.verdict));
    for l in &rep.levels {
        if let Some(c) = &l.certificate {
            run.check(c.passed(), format!("level {} certificate", l.n));
        }
    }
    run.check(ib.verdict == Verdict::CertainlyLess, "integral below chain bound");
    Ok(run)
}

fn cmd_verify(path: &Path) -> Result<Run> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let rep: ConstructionReport =
        serde_json::from_str(&text).with_context(|| format!("parse error in {}", path.display()))?;
    verify(&rep)?;
    let canonical = to_json(&rep)? == text;
    let mut run = Run::new(&json!({ "verified": true, "levels": rep.levels.len(), "canonical": canonical }))?;
    run.line(format!("verified {} levels of {}", rep.levels.len(), rep.schedule));
    run.line(format!("canonical encoding: {}", if canonical { "yes" } else { "no" }));
    Ok(run)
}

fn cmd_integrate(path: &Path, lo: &Rational, hi: Option<&Rational>, prec: Precision) -> Result<Run> {
    let input = load(path)?;
    let lo = BigReal::from_rational(lo.clone());
    let hi = hi.map(|h| BigReal::from_rational(h.clone()));
    let log_integral = integral_log(input.function(), &lo, hi.as_ref(), prec)?;
    let integral = log_integral.exp(prec);
    let mut run = Run::new(&json!({
        "lo": lo,
        "hi": hi.as_ref().map(|h| h.to_string()).unwrap_or_else(|| "inf".into()),
        "log_integral": log_integral,
        "integral": integral,
    }))?;
    let hi_text = hi.as_ref().map(render::human).unwrap_or_else(|| "inf".into());
    run.line(format!("range      [{}, {}]", render::human(&lo), hi_text));
    match log_integral.enclosure() {
        Some(e) => run.line(format!("ln I       {}", render::interval(e))),
        None => run.line("ln I       -inf"),
    }
    run.line(format!("I          {}", render::interval(&integral)));
    Ok(run)
}

fn cmd_ratio(path: &Path, rs: &[Rational], n0: Option<usize>, partial_sums: bool, prec: Precision) -> Result<Run> {
    let rep = load_report(path)?;
    let mut certs = Vec::new();
    let mut summary = format!("{:>6}  {:>5}  {:>9}  {:<24}\n", "r", "n_0", "threshold", "last partial sum");
    let mut failures = Vec::new();
    for r in rs {
        let start = n0.unwrap_or_else(|| r.ceil().to_integer().try_into().unwrap_or(1).max(1));
        match divergence_certificate(&rep, r, start, prec) {
            Ok(cert) => {
                let last = cert.partial_sums.last().map(render::human).unwrap_or_default();
                let _ = writeln!(summary, "{:>6}  {:>5}  {:>9}  {:<24}", format_rational(r), cert.threshold_index, format_rational(&cert.threshold), last);
                let mut v = serde_json::to_value(&cert)?;
                if !partial_sums {
                    v.as_object_mut().expect("certificate is an object").remove("partial_sums");
                }
                certs.push(v);
            }
            Err(e @ ConstructionError::Certification { .. }) => {
                let _ = writeln!(summary, "{:>6}  failed: {e}", format_rational(r));
                failures.push(format!("r = {}: {e}", format_rational(r)));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut run = Run::new(&certs)?;
    run.summary = summary;
    run.failures = failures;
    Ok(run)
}

fn cmd_maxfn(path: &Path, points: &[Rational]) -> Result<Run> {
    let input = load(path)?;
    let mut rows = Vec::new();
    let mut summary = format!("{:>10}  {:<44}  {:<12}  {}\n", "a", "ln H(a)", "argmax", "attained");
    for p in points {
        let a = BigReal::from_rational(p.clone());
        let res = maximal_function(input.function(), &a)?;
        let _ = writeln!(
            summary,
            "{:>10}  {:<44}  {:<12}  {:?}",
            format_rational(p),
            render::interval(&res.log_value),
            render::human(&res.argmax),
            res.attained
        );
        let mut v = serde_json::to_value(&res)?;
        v.as_object_mut().expect("result is an object").insert("a".into(), serde_json::to_value(&a)?);
        rows.push(v);
    }
    let mut run = Run::new(&rows)?;
    run.summary = summary;
    Ok(run)
}

fn cmd_theorem(path: &Path, prec: Precision) -> Result<Run> {
    let input = load(path)?;
    let rep = theorem_1_5_witness(input.function(), prec)?;
    let mut run = Run::new(&rep)?;
    run.line(format!("hypotheses hold     {}", rep.hypotheses_hold));
    match &rep.branch {
        Theorem15Branch::Decreasing { checked_points, pointwise_holds, windows, .. } => {
            run.line("branch              decreasing");
            run.line(format!("h(2x) <= h(x)       {pointwise_holds} at {checked_points} points"));
            let ordered = windows.iter().filter(|w| w.ordered).count();
            run.line(format!("windows ordered     {ordered}/{}", windows.len()));
        }
        Theorem15Branch::Increasing { threshold, gap, checked_integers, gap_holds, .. } => {
            run.line("branch              increasing");
            run.line(format!("threshold           {}", render::human(threshold)));
            run.line(format!("gap                 {}", format_rational(gap)));
            run.line(format!("gap holds           {gap_holds} at {checked_integers} integers"));
        }
    }
    run.check(rep.branch_checks_pass, "branch checks");
    Ok(run)
}

fn cmd_demo_xx(x_max: u32, quad_points: usize, ratio_max: u32, prec: Precision) -> Result<Run> {
    let rep = xx_demo(x_max, quad_points, ratio_max, prec)?;
    let mut run = Run::new(&rep)?;
    run.line(format!("int h^2(x)/h(2x)    {}", render::interval(&rep.ratio_integral)));
    run.line(format!("{:>4}  {}", "X", "int_1^X x^x dx"));
    for p in &rep.partials {
        run.line(format!("{:>4}  {}", p.x, render::interval(&p.integral)));
    }
    if let Some(last) = rep.ratios.last() {
        run.line(format!("h({0})/h({1})    {2}", last.n, last.n + 1, render::interval(&last.ratio)));
    }
    Ok(run)
}

fn cmd_plot(path: &Path, samples: usize, rs: &[Rational], x_max: Option<&Rational>, log10: bool) -> Result<Run> {
    let input = load(path)?;
    let f = input.function();
    let end = match x_max {
        Some(x) => BigReal::from_rational(x.clone()),
        None => plot::default_end(f),
    };
    let csv = plot::plot_csv(f, &end, samples, rs, log10)?;
    let rows = csv.lines().count() - 1;
    Ok(Run { json: csv, summary: format!("{rows} rows up to x = {}\n", render::human(&end)), failures: Vec::new() })
}

fn dispatch(cli: &Cli) -> Result<(Run, Option<&Path>)> {
    let prec = Precision(cli.precision);
    Ok(match &cli.command {
        Command::Construct { schedule, depth, out } => (cmd_construct(schedule, *depth as usize, prec)?, out.output.as_deref()),
        Command::Verify { path } => (cmd_verify(path)?, None),
        Command::Integrate { path, lo, hi, out } => (cmd_integrate(path, lo, hi.as_ref(), prec)?, out.output.as_deref()),
        Command::Ratio { path, r, n0, partial_sums, out } => {
            (cmd_ratio(path, r, *n0, *partial_sums, prec)?, out.output.as_deref())
        }
        Command::Maxfn { path, points, out } => (cmd_maxfn(path, points)?, out.output.as_deref()),
        Command::Theorem { path, out } => (cmd_theorem(path, prec)?, out.output.as_deref()),
        Command::DemoXx { x_max, quad_points, ratio_max, out } => {
            (cmd_demo_xx(*x_max, *quad_points, *ratio_max, prec)?, out.output.as_deref())
        }
        Command::Plot { path, samples, r, x_max, log10, out } => {
            (cmd_plot(path, *samples as usize, r, x_max.as_ref(), *log10)?, out.output.as_deref())
        }
    })
}

fn is_usage_error(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<ConstructionError>(),
        Some(ConstructionError::Schedule(_) | ConstructionError::Argument(_) | ConstructionError::Depth)
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (run, output) = match dispatch(&cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(if is_usage_error(&e) { 2 } else { 1 });
        }
    };
    match output {
        Some(p) => {
            if let Err(e) = fs::write(p, &run.json) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{}", run.json),
    }
    eprint!("{}", run.summary);
    if run.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &run.failures {
            eprintln!("FAILED: {f}");
        }
        ExitCode::from(1)
    }
}
