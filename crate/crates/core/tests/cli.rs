use bicalc::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(std::iter::once("bicalc").chain(args.iter().copied()));
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn newton_golden() {
    let (code, v) = call(&["newton-int", "-F", "x1^2*x2^3/2", "-a", "0,1", "-b", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["value"].as_f64(), Some(52.0));
    assert_eq!(v["verdict"], "computed");
}

#[test]
fn improper_divergent_with_witnesses() {
    let (code, v) = call(&["improper", "-F", "x1/(x1+x2)", "--interval", "(0,1]x(0,1]"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "divergent");
    let w: Vec<f64> = v["result"]["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(w.iter().any(|x| x.abs() < 1e-6));
    assert!(w.iter().any(|x| (x + 1.0 / 6.0).abs() < 1e-6));
}

#[test]
fn parse_error_exit_two() {
    let (code, v) = call(&["deriv", "-f", "x1^2 +", "-a", "0,0"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["position"], 6);
    assert!(v.get("result").is_none());
}

#[test]
fn verdicts_and_strict_mode() {
    let (code, v) = call(&["deriv", "-f", "x1^2*x2^3/2", "-a", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "converged");
    assert!((v["result"]["value"].as_f64().unwrap() - 3.0).abs() < 1e-6);

    let args = ["deriv", "-f", "if(x1*x2 > 0, 1, 0)", "-a", "0,0"];
    let (code, v) = call(&args);
    assert_eq!(code, 0);
    assert_ne!(v["verdict"], "converged");
    let (code, _) = call(&[&["--strict"], &args[..]].concat());
    assert_eq!(code, 3);
}

#[test]
fn hypothesis_error_exit_one() {
    let (code, v) = call(&["rolle", "-f", "x1*x2", "--interval", "[0,1]x[0,1]"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "hypothesis");
}

#[test]
fn deterministic_output() {
    let args = ["riemann-int", "-f", "x1*x2", "--interval", "[0,1]x[0,2]", "--rule", "random", "--seed", "5", "--tol", "1e-4"];
    let (_, a) = call(&args);
    let (_, b) = call(&args);
    assert_eq!(strip_timing(a), strip_timing(b));
}

#[test]
fn schema_is_stable() {
    let keys = |v: &Value| {
        let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
        k.sort();
        k
    };
    let (_, a) = call(&["delta", "-f", "x1*x2", "-a", "0,0", "-b", "1,1"]);
    let (_, b) = call(&["delta", "-f", "sin(x1)", "-a", "0,0", "-b", "2,1"]);
    assert_eq!(keys(&a), keys(&b));
    assert_eq!(keys(&a), ["command", "elapsed_ms", "inputs", "result", "trace", "verdict"]);
}

#[test]
fn every_subcommand_runs() {
    let cases: &[&[&str]] = &[
        &["eval", "-f", "x1+x2", "--at", "1,2"],
        &["delta-n", "-f", "x1*x2*x3", "-a", "0,0,0", "-b", "1,1,1"],
        &["slope", "-f", "x1*x2", "-a", "0,0", "-b", "1,2"],
        &["continuity", "-f", "x1*x2", "-a", "0.5,0.5"],
        &["continuity", "-f", "sin(x1)+x2^2", "--global", "[0,1]x[0,1]"],
        &["split", "-f", "sin(x1)+x2^2", "--interval", "[0,1]x[0,1]"],
        &["mvt", "-f", "x1^2*x2^2", "--interval", "[0,1]x[0,1]"],
        &["cauchy-mvt", "-f", "x1^2*x2^2", "-g", "x1*x2", "--interval", "[0,1]x[0,1]"],
        &["classify", "-f", "(x1-1)^2*(x2-1)^2", "--interval", "[0,2]x[0,2]", "--grid", "4"],
        &["classify", "-f", "-(x1-1)^2*(x2-1)^2", "--interval", "[0,2]x[0,2]", "--point", "1,1"],
        &["ftc1", "-f", "x1*x2", "--interval", "[0,1]x[0,1]", "--points", "2"],
        &["ftc2", "-f", "3*x1*x2^2", "-F", "x1^2*x2^3/2", "--interval", "[0,2]x[1,3]", "--tol", "1e-4"],
        &["cov", "-f", "x1*x2", "--h1", "u", "--h2", "u*v", "-G", "u^4*v^2/8", "--interval", "(0,1)x(0,1)"],
        &["verify", "--suite", "difference", "--seed", "42"],
    ];
    for args in cases {
        let (code, v) = call(args);
        assert_eq!(code, 0, "{args:?}: {v}");
        assert!(v.get("result").is_some(), "{args:?}");
    }
}
