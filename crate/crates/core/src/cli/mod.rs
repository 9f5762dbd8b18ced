//! The `bicalc` command line: argument parsing, dispatch and JSON reports.
//!
//! Every invocation prints exactly one JSON document. Exit codes: 0 for any
//! computed verdict, 1 for usage, input, domain and hypothesis errors (and
//! for failed `verify` runs), 2 for expression syntax errors, 3 for
//! numerical non-convergence under `--strict`.

mod args;
pub mod parse;

use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::derivative::{
    cauchy_mvt_solve, classify_stationary, critical_points, double_derivative, mixed_partials_check,
    monotonicity_classify, mvt_solve, rolle_solve, DerivConfig, SolverConfig,
};
use crate::difference::{
    continuity_probe, delta2, delta_n, global_continuity_probe, max_lattice_delta, mean_slope, split_double_constant,
    ProbeConfig, ProbeVerdict,
};
use crate::domain::{Interval2, ScalarField2, ScalarFieldN, TraceEntry, Verdict};
use crate::error::Error;
use crate::integral::{
    change_of_variables_integral, ftc1_check, ftc2_check, improper_newton_integral, newton_integral,
    riemann_integral, CovSpec, ImproperConfig, ImproperVerdict, Jacobian, RiemannConfig, SampleRule,
};
use crate::verify::{verify, Suite};

pub use args::{Cli, Command};
use args::{RiemannArgs, RuleArg, SuiteArg};
use parse::{parse_interval, parse_list, parse_point};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

/// A failure together with the argument it came from.
struct Failure {
    error: Error,
    argument: Option<&'static str>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, argument: None }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// What a command computed.
struct Outcome {
    result: Value,
    verdict: String,
    trace: Option<Vec<TraceEntry>>,
    /// The computation ran but did not settle; `--strict` turns this into
    /// exit code 3.
    unsettled: bool,
    /// Overrides the exit code of a computed result (`verify` failures).
    exit: Option<i32>,
}

impl Outcome {
    fn new(result: impl Serialize, verdict: impl Into<String>) -> Self {
        Outcome {
            result: to_json(result),
            verdict: verdict.into(),
            trace: None,
            unsettled: false,
            exit: None,
        }
    }

    fn value(v: f64) -> Self {
        Outcome::new(json!({ "value": v }), "computed")
    }

    fn trace(mut self, trace: Vec<TraceEntry>) -> Self {
        self.trace = Some(trace);
        self
    }

    fn unsettled(mut self, yes: bool) -> Self {
        self.unsettled = yes;
        self
    }
}

fn to_json(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Converged => "converged",
        Verdict::Diverged => "diverged",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn field(src: &str, argument: &'static str) -> CmdResult<ScalarField2> {
    ScalarField2::parse(src).map_err(|e| Failure {
        error: e.into(),
        argument: Some(argument),
    })
}

fn tagged<T>(r: crate::error::Result<T>, argument: &'static str) -> CmdResult<T> {
    r.map_err(|error| Failure {
        error,
        argument: Some(argument),
    })
}

fn interval(src: &str) -> CmdResult<Interval2> {
    tagged(parse_interval(src), "--interval")
}

/// Global settings shared by all subcommands.
struct Settings {
    tol: f64,
    steps: Option<usize>,
}

impl Settings {
    fn cap(&self, n: usize) -> usize {
        self.steps.map_or(n, |s| n.min(s.max(1)))
    }

    fn deriv(&self) -> DerivConfig {
        let mut c = DerivConfig::with_tol(self.tol);
        c.steps = self.cap(c.steps);
        c
    }

    fn solver(&self, max_halvings: usize) -> SolverConfig {
        let mut c = SolverConfig::with_tol(self.tol);
        c.steps = self.cap(c.steps);
        c.max_halvings = self.cap(max_halvings);
        c
    }

    fn improper(&self) -> ImproperConfig {
        let mut c = ImproperConfig {
            tol: self.tol,
            ..Default::default()
        };
        c.steps = self.cap(c.steps);
        c
    }

    fn riemann(&self, r: &RiemannArgs) -> RiemannConfig {
        RiemannConfig {
            initial_m: r.m,
            initial_n: r.n,
            max_refinements: self.cap(r.max_refinements),
            tol: self.tol,
            sample_rule: match r.rule {
                RuleArg::Midpoint => SampleRule::Midpoint,
                RuleArg::Corner => SampleRule::Corner,
                RuleArg::Random => SampleRule::Random(r.seed),
            },
        }
    }
}

fn riemann_inputs(r: &RiemannArgs) -> Value {
    json!({
        "m": r.m,
        "n": r.n,
        "max_refinements": r.max_refinements,
        "rule": format!("{:?}", r.rule).to_lowercase(),
        "seed": r.seed,
    })
}

/// Inputs echoed into the report, built before any evaluation so that
/// error reports carry them as well.
fn inputs(cmd: &Command, s: &Settings) -> Value {
    let mut m = match cmd {
        Command::Eval { field, at } => json!({ "f": field.f, "at": at }),
        Command::Delta { field, a, b } | Command::DeltaN { field, a, b } | Command::Slope { field, a, b } => {
            json!({ "f": field.f, "a": a, "b": b })
        }
        Command::Deriv {
            field,
            a,
            sign,
            domain,
            schwarz,
        } => json!({ "f": field.f, "a": a, "sign": sign, "domain": domain, "schwarz": schwarz }),
        Command::Continuity {
            field,
            a,
            sign,
            sweep,
            shrink_steps,
            global,
            grid,
        } => json!({
            "f": field.f, "a": a, "sign": sign, "sweep": sweep,
            "shrink_steps": shrink_steps, "global": global, "grid": grid,
        }),
        Command::Split {
            field,
            interval,
            anchor,
            grid,
        } => json!({ "f": field.f, "interval": interval.interval, "anchor": anchor, "grid": grid }),
        Command::Rolle {
            field,
            interval,
            max_halvings,
        } => json!({ "f": field.f, "interval": interval.interval, "max_halvings": max_halvings }),
        Command::Mvt { field, interval } => json!({ "f": field.f, "interval": interval.interval }),
        Command::CauchyMvt { field, g, interval } => {
            json!({ "f": field.f, "g": g, "interval": interval.interval })
        }
        Command::Classify {
            field,
            interval,
            grid,
            point,
            samples,
        } => json!({
            "f": field.f, "interval": interval.interval, "grid": grid, "point": point, "samples": samples,
        }),
        Command::NewtonInt { primitive, a, b } => json!({ "F": primitive, "a": a, "b": b }),
        Command::RiemannInt {
            field,
            interval,
            riemann,
        } => json!({ "f": field.f, "interval": interval.interval, "riemann": riemann_inputs(riemann) }),
        Command::Ftc1 {
            field,
            interval,
            points,
        } => json!({ "f": field.f, "interval": interval.interval, "points": points }),
        Command::Ftc2 {
            field,
            primitive,
            interval,
            riemann,
        } => json!({
            "f": field.f, "F": primitive, "interval": interval.interval, "riemann": riemann_inputs(riemann),
        }),
        Command::Improper { primitive, interval } => json!({ "F": primitive, "interval": interval.interval }),
        Command::Cov {
            field,
            h1,
            h2,
            jacobian,
            fd_step,
            primitive,
            interval,
        } => json!({
            "f": field.f, "h1": h1, "h2": h2, "jacobian": jacobian, "fd_step": fd_step,
            "G": primitive, "interval": interval.interval,
        }),
        Command::Verify { suite, seed } => json!({ "suite": format!("{suite:?}").to_lowercase(), "seed": seed }),
    };
    if let Value::Object(obj) = &mut m {
        obj.insert("tol".into(), json!(s.tol));
        obj.insert("steps".into(), json!(s.steps));
    }
    m
}

fn sign_arg(sign: &Option<String>) -> CmdResult<Option<crate::domain::QuadrantSign>> {
    sign.as_deref()
        .map(|s| tagged(s.parse(), "--sign"))
        .transpose()
}

fn dispatch(cmd: &Command, s: &Settings) -> CmdResult<Outcome> {
    Ok(match cmd {
        Command::Eval { field, at } => {
            let x = tagged(parse_list(at), "--at")?;
            let f = ScalarFieldN::parse(&field.f, x.len()).map_err(|e| Failure {
                error: e.into(),
                argument: Some("-f"),
            })?;
            Outcome::value(f.eval(&x).map_err(Error::from)?)
        }
        Command::Delta { field: fa, a, b } => {
            let f = field(&fa.f, "-f")?;
            Outcome::value(delta2(&f, tagged(parse_point(a), "-a")?, tagged(parse_point(b), "-b")?)?)
        }
        Command::DeltaN { field, a, b } => {
            let a = tagged(parse_list(a), "-a")?;
            let b = tagged(parse_list(b), "-b")?;
            if a.len() != b.len() {
                return Err(Failure {
                    error: Error::InvalidInput(format!("a has {} coordinates, b has {}", a.len(), b.len())),
                    argument: Some("-b"),
                });
            }
            let f = ScalarFieldN::parse(&field.f, a.len()).map_err(|e| Failure {
                error: e.into(),
                argument: Some("-f"),
            })?;
            let mut out = Outcome::value(delta_n(&f, &a, &b)?);
            out.result["n"] = json!(a.len());
            out
        }
        Command::Slope { field: fa, a, b } => {
            let f = field(&fa.f, "-f")?;
            Outcome::value(mean_slope(&f, tagged(parse_point(a), "-a")?, tagged(parse_point(b), "-b")?)?)
        }
        Command::Deriv {
            field: fa,
            a,
            sign,
            domain,
            schwarz,
        } => {
            let mut f = field(&fa.f, "-f")?;
            let a = tagged(parse_point(a), "-a")?;
            let sign = sign_arg(sign)?;
            if let Some(d) = domain {
                f = f.with_domain_hint(tagged(parse_interval(d), "--domain")?);
            }
            let est = double_derivative(&f, a, sign, &s.deriv())?;
            let verdict = est.report.verdict;
            let mut result = json!({
                "value": est.report.value,
                "residual": est.report.residual,
                "evaluations": est.report.evaluations,
                "first_order_residual": est.first_order_residual,
                "signed": est.signed,
            });
            if *schwarz {
                let mp = mixed_partials_check(&f, a, 0.125, s.cap(16), s.tol)?;
                result["mixed_partials"] = to_json(mp);
            }
            Outcome::new(result, verdict_label(verdict))
                .trace(est.report.trace)
                .unsettled(verdict != Verdict::Converged)
        }
        Command::Continuity {
            field: fa,
            a,
            sign,
            sweep,
            shrink_steps,
            global,
            grid,
        } => {
            let f = field(&fa.f, "-f")?;
            let cfg = ProbeConfig {
                sweep: *sweep,
                shrink_steps: s.cap(*shrink_steps),
                tol: s.tol,
            };
            let report = match (global, a) {
                (Some(i), None) => {
                    let i = tagged(parse_interval(i), "--global")?;
                    global_continuity_probe(&f, &i, *grid, &cfg)
                }
                (None, Some(a)) => continuity_probe(&f, tagged(parse_point(a), "-a")?, sign_arg(sign)?, &cfg),
                _ => {
                    return Err(Error::InvalidInput("continuity needs exactly one of -a POINT or --global INTERVAL".into())
                        .into())
                }
            };
            let label = match report.verdict {
                ProbeVerdict::Pass => "pass",
                ProbeVerdict::Fail => "fail",
                ProbeVerdict::Inconclusive => "inconclusive",
            };
            let unsettled = report.verdict == ProbeVerdict::Inconclusive;
            Outcome::new(report, label).unsettled(unsettled)
        }
        Command::Split {
            field: fa,
            interval: ia,
            anchor,
            grid,
        } => {
            let f = field(&fa.f, "-f")?;
            let i = interval(&ia.interval)?;
            let anchor = match anchor {
                Some(p) => tagged(parse_point(p), "--anchor")?,
                None => i.bounds()?.0,
            };
            let worst = max_lattice_delta(&f, &i, *grid)?;
            let split = split_double_constant(&f, &i, anchor)?;
            let err = split.max_reconstruction_error(&f, &i, *grid)?;
            let constant = worst <= s.tol;
            Outcome::new(
                json!({
                    "double_constant": constant,
                    "max_lattice_delta": worst,
                    "anchor": anchor,
                    "reconstruction_error": err,
                    "g": format!("f(x1, {})", anchor.x2),
                    "h": format!("f({}, x2) - f({}, {})", anchor.x1, anchor.x1, anchor.x2),
                }),
                if constant { "double_constant" } else { "not_double_constant" },
            )
        }
        Command::Rolle {
            field: fa,
            interval: ia,
            max_halvings,
        } => {
            let f = field(&fa.f, "-f")?;
            let i = interval(&ia.interval)?;
            Outcome::new(rolle_solve(&f, &i, &s.solver(*max_halvings))?, "solved")
        }
        Command::Mvt { field: fa, interval: ia } => {
            let f = field(&fa.f, "-f")?;
            let i = interval(&ia.interval)?;
            Outcome::new(mvt_solve(&f, &i, &s.solver(SolverConfig::default().max_halvings))?, "solved")
        }
        Command::CauchyMvt {
            field: fa,
            g,
            interval: ia,
        } => {
            let f = field(&fa.f, "-f")?;
            let g = field(g, "-g")?;
            let i = interval(&ia.interval)?;
            Outcome::new(
                cauchy_mvt_solve(&f, &g, &i, &s.solver(SolverConfig::default().max_halvings))?,
                "solved",
            )
        }
        Command::Classify {
            field: fa,
            interval: ia,
            grid,
            point,
            samples,
        } => {
            let f = field(&fa.f, "-f")?;
            let i = interval(&ia.interval)?;
            match point {
                Some(p) => {
                    let c = tagged(parse_point(p), "--point")?;
                    let class = classify_stationary(&f, c, &i, *samples, s.tol)?;
                    let label = to_json(class).as_str().unwrap_or("unknown").to_string();
                    Outcome::new(json!({ "point": c, "classification": class }), label)
                }
                None => {
                    let mono = monotonicity_classify(&f, &i, *grid, s.tol)?;
                    let points = critical_points(&f, &i, *grid, s.tol)?;
                    let label = to_json(mono.class).as_str().unwrap_or("mixed").to_string();
                    Outcome::new(json!({ "monotonicity": mono, "critical_points": points }), label)
                }
            }
        }
        Command::NewtonInt { primitive, a, b } => {
            let big_f = field(primitive, "-F")?;
            Outcome::value(newton_integral(
                &big_f,
                tagged(parse_point(a), "-a")?,
                tagged(parse_point(b), "-b")?,
            )?)
        }
        Command::RiemannInt {
            field: fa,
            interval: ia,
            riemann,
        } => {
            let f = field(&fa.f, "-f")?;
            let i = interval(&ia.interval)?;
            let report = riemann_integral(&f, &i, &s.riemann(riemann))?;
            let verdict = report.verdict;
            Outcome::new(
                json!({
                    "value": report.value,
                    "residual": report.residual,
                    "evaluations": report.evaluations,
                }),
                verdict_label(verdict),
            )
            .trace(report.trace)
            .unsettled(verdict != Verdict::Converged)
        }
        Command::Ftc1 {
            field: fa,
            interval: ia,
            points,
        } => {
            let f = field(&fa.f, "-f")?;
            let i = interval(&ia.interval)?;
            let report = ftc1_check(&f, &i, *points, s.tol)?;
            let label = if report.passed { "pass" } else { "fail" };
            Outcome::new(report, label)
        }
        Command::Ftc2 {
            field: fa,
            primitive,
            interval: ia,
            riemann,
        } => {
            let f = field(&fa.f, "-f")?;
            let big_f = field(primitive, "-F")?;
            let i = interval(&ia.interval)?;
            let report = ftc2_check(&f, &big_f, &i, &s.riemann(riemann))?;
            let unsettled = report.riemann.is_nan();
            let label = if unsettled {
                "inconclusive"
            } else if report.agree {
                "agree"
            } else {
                "disagree"
            };
            Outcome::new(report, label).unsettled(unsettled)
        }
        Command::Improper { primitive, interval: ia } => {
            let big_f = field(primitive, "-F")?;
            let i = interval(&ia.interval)?;
            improper_outcome(improper_newton_integral(&big_f, &i, &s.improper())?, None)
        }
        Command::Cov {
            field: fa,
            h1,
            h2,
            jacobian,
            fd_step,
            primitive,
            interval: ia,
        } => {
            let f = field(&fa.f, "-f")?;
            let map = (field(h1, "--h1")?, field(h2, "--h2")?);
            let jacobian = match jacobian {
                Some(j) => Jacobian::Analytic(field(j, "--jacobian")?),
                None => Jacobian::FiniteDifference { step: *fd_step },
            };
            let primitive = primitive.as_deref().map(|g| field(g, "-G")).transpose()?;
            let spec = CovSpec {
                map,
                jacobian,
                param_interval: interval(&ia.interval)?,
            };
            let r = change_of_variables_integral(&f, &spec, primitive.as_ref(), &s.improper())?;
            improper_outcome(r.verdict, r.primitive_residual)
        }
        Command::Verify { suite, seed } => {
            let suite = match suite {
                SuiteArg::All => Suite::All,
                SuiteArg::Difference => Suite::Difference,
                SuiteArg::Derivative => Suite::Derivative,
                SuiteArg::Integral => Suite::Integral,
            };
            let summary = verify(suite, *seed, s.tol)?;
            let passed = summary.passed();
            let mut out = Outcome::new(summary, if passed { "pass" } else { "fail" });
            if !passed {
                out.exit = Some(EXIT_USAGE);
            }
            out
        }
    })
}

fn improper_outcome(v: ImproperVerdict, primitive_residual: Option<f64>) -> Outcome {
    let label = v.label();
    let mut result = Map::new();
    let mut trace = None;
    match &v {
        ImproperVerdict::Convergent { value, corner_limits } => {
            result.insert("value".into(), json!(value));
            if let Some(c) = corner_limits {
                result.insert("corner_limits".into(), json!(c));
            }
        }
        ImproperVerdict::Divergent { witnesses } => {
            result.insert(
                "witnesses".into(),
                json!([witnesses.first.estimate, witnesses.second.estimate]),
            );
            result.insert("witness_paths".into(), to_json(witnesses));
        }
        ImproperVerdict::Inconclusive {
            trace: t,
            diagnostic,
        } => {
            result.insert("diagnostic".into(), json!(diagnostic));
            trace = Some(t.clone());
        }
    }
    if let Some(r) = primitive_residual {
        result.insert("primitive_residual".into(), json!(r));
    }
    let mut out = Outcome::new(Value::Object(result), label);
    out.trace = trace;
    out.unsettled = matches!(v, ImproperVerdict::Inconclusive { .. });
    out
}

fn exit_code(e: &Error, strict: bool) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::NonConvergence(_) if strict => EXIT_NONCONVERGENCE,
        _ => EXIT_USAGE,
    }
}

fn error_json(f: &Failure) -> Value {
    let mut e = json!({
        "kind": f.error.kind(),
        "message": f.error.to_string(),
    });
    if let Error::Parse(p) = &f.error {
        e["position"] = json!(p.position);
    }
    if let Some(a) = f.argument {
        e["argument"] = json!(a);
    }
    e
}

fn render(v: &Value, pretty: bool) -> String {
    let s = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    };
    s.unwrap_or_else(|_| "{}".into())
}

/// Run one command line (including the program name) and return the exit
/// code and the text for standard output.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let started = Instant::now();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.to_string()),
                _ => {
                    let report = json!({
                        "command": Value::Null,
                        "inputs": Value::Null,
                        "error": { "kind": "usage", "message": e.to_string() },
                        "verdict": "error",
                        "trace": Value::Null,
                        "elapsed_ms": started.elapsed().as_secs_f64() * 1e3,
                    });
                    (EXIT_USAGE, render(&report, false))
                }
            };
        }
    };
    let settings = Settings {
        tol: cli.tol,
        steps: cli.steps,
    };
    let mut report = Map::new();
    report.insert("command".into(), json!(cli.command.name()));
    report.insert("inputs".into(), inputs(&cli.command, &settings));
    let outcome = if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        Err(Error::InvalidInput(format!("--tol must be positive, got {}", cli.tol)).into())
    } else {
        dispatch(&cli.command, &settings)
    };
    let code = match outcome {
        Ok(out) => {
            report.insert("result".into(), out.result);
            report.insert("verdict".into(), json!(out.verdict));
            report.insert("trace".into(), to_json(out.trace));
            match out.exit {
                Some(code) => code,
                None if cli.strict && out.unsettled => EXIT_NONCONVERGENCE,
                None => EXIT_OK,
            }
        }
        Err(f) => {
            report.insert("error".into(), error_json(&f));
            report.insert("verdict".into(), json!("error"));
            report.insert("trace".into(), Value::Null);
            exit_code(&f.error, cli.strict)
        }
    };
    report.insert("elapsed_ms".into(), json!(started.elapsed().as_secs_f64() * 1e3));
    (code, render(&Value::Object(report), cli.pretty))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, Value) {
        let (code, out) = run(std::iter::once("bicalc").chain(args.iter().copied()));
        (code, serde_json::from_str(&out).expect("valid JSON"))
    }

    #[test]
    fn newton_int() {
        let (code, v) = call(&["newton-int", "-F", "x1^2*x2^3/2", "-a", "0,1", "-b", "2,3"]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["value"], json!(52.0));
        assert_eq!(v["command"], "newton-int");
    }

    #[test]
    fn parse_error_position() {
        let (code, v) = call(&["deriv", "-f", "x1^2 +", "-a", "0,0"]);
        assert_eq!(code, 2);
        assert_eq!(v["error"]["kind"], "parse");
        assert!(v["error"]["position"].is_u64());
        assert!(v.get("result").is_none());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["delta", "-f", "x1"]).0, 1);
        assert_eq!(call(&["nope"]).0, 1);
        assert_eq!(call(&["delta", "-f", "x1", "-a", "0", "-b", "1,1"]).0, 1);
        let (code, v) = call(&["slope", "-f", "x1*x2", "-a", "0,0", "-b", "0,1"]);
        assert_eq!(code, 1);
        assert_eq!(v["error"]["kind"], "degenerate");
    }

    #[test]
    fn negative_values() {
        let (code, v) = call(&["delta", "-f", "-x1*x2", "-a", "-1,-1", "-b", "1,1"]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["value"], json!(-4.0));
    }

    #[test]
    fn eval_arity() {
        let (_, v) = call(&["eval", "-f", "x1+x2*x3", "--at", "1,2,3"]);
        assert_eq!(v["result"]["value"], json!(7.0));
    }

    #[test]
    fn strict_mode() {
        let args = ["deriv", "-f", "x1*x2/(x1^2+x2^2+1e-300)", "-a", "0,0"];
        let (code, v) = call(&args);
        assert_eq!(code, 0);
        assert_ne!(v["verdict"], "converged");
        let mut strict = vec!["--strict"];
        strict.extend(args);
        assert_eq!(call(&strict).0, 3);
    }
}
