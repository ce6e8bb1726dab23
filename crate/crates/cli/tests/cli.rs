use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz-tf")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn result<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["results"].as_array().unwrap().iter().find(|x| x["name"] == name).unwrap_or_else(|| panic!("no result {name}"))
}

#[test]
fn usage_errors_exit_with_2() {
    for args in [
        &["norm", "modulation", "--space", "M7"][..],
        &["norm", "luxemburg", "--signal", "triangle"],
        &["young", "evaluate", "--kind", "power"],
        &["transform", "wigner", "--d", "2", "--N", "16"],
        &["verify", "nonsense"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn verify_moyal_passes_and_echoes_config() {
    let out = run(&["verify", "moyal", "--N", "256", "--L", "12", "--trials", "100"]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["config"]["N"], 256);
    assert_eq!(r["config"]["L"], 12.0);
    assert_eq!(r["config"]["args"]["trials"], 100);
    let rec = &r["results"][0];
    assert_eq!(rec["relation"], "<=");
    assert!(rec["value"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn failing_tolerance_exits_with_1() {
    let out = run(&["verify", "moyal", "--N", "64", "--L", "8", "--trials", "3", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["results"][0]["pass"], false);
}

#[test]
fn entropy_scan_csv_gap() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = run(&["entropy", "scan", "--lambdas", "0.25,1,4", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    // The JSON report still goes to stdout when the table goes to a file.
    assert_eq!(report(&out)["config"]["format"], "csv");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,E,M2_norm,MPhi_norm"));
    let e: Vec<(f64, f64)> = lines
        .map(|l| {
            let mut c = l.split(',');
            (c.next().unwrap().parse().unwrap(), c.next().unwrap().parse().unwrap())
        })
        .collect();
    let at = |lam: f64| e.iter().find(|r| r.0 == lam).unwrap().1;
    assert!((at(4.0) - at(1.0) - 1.25f64.ln()).abs() < 1e-5);
    assert!((at(0.25) - at(4.0)).abs() < 1e-5);
}

#[test]
fn log_example_conjugate_matches_closed_form() {
    let out = run(&["young", "conjugate", "--kind", "log_example", "--at", "0.01"]);
    assert!(out.status.success());
    let r = report(&out);
    let rel = result(&r, "closed form relative error at 0.01");
    assert_eq!(rel["pass"], true);
    assert!(rel["value"].as_f64().unwrap() < 1e-6);
}

#[test]
fn reports_are_reproducible_up_to_timing() {
    let args = ["psido", "opnorm", "--N", "32", "--L", "6", "--p", "1", "--q", "1", "--trials", "2", "--seed", "7"];
    let mut a = report(&run(&args));
    let mut b = report(&run(&args));
    a["timing_ms"] = Value::Null;
    b["timing_ms"] = Value::Null;
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn signal_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let p = path.to_str().unwrap();
    let out = run(&["transform", "stft", "--N", "32", "--L", "6", "--signal", "zero", "--format", "csv"]);
    assert!(out.status.success());
    // A phase-field table is not a signal file.
    std::fs::write(&path, &out.stdout).unwrap();
    let bad = run(&["norm", "luxemburg", "--N", "32", "--L", "6", "--signal", &format!("file:{p}")]);
    assert_eq!(bad.status.code(), Some(2));

    let lux = |signal: &str| {
        let r = report(&run(&["norm", "luxemburg", "--N", "32", "--L", "6", "--signal", signal]));
        result(&r, "luxemburg norm")["value"].as_f64().unwrap()
    };
    let out = run(&["psido", "apply", "--N", "32", "--L", "6", "--symbol", "one", "--signal", "gaussian", "--format", "csv"]);
    std::fs::write(&path, &out.stdout).unwrap();
    let direct = lux("gaussian");
    let via_file = lux(&format!("file:{p}"));
    assert!((direct - via_file).abs() < 1e-10 * direct, "{direct} vs {via_file}");
}

#[test]
fn numerical_failure_is_reported() {
    let out = run(&["transform", "stft", "--N", "32", "--L", "6", "--window", "zero"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["command"], "transform stft");
    assert_eq!(r["results"][0]["pass"], false);
}
