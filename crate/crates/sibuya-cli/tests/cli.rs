//! End-to-end tests of the `sibuya` binary: flag handling, output
//! formats, exit codes, and byte-level reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sibuya"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sibuya-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

const INDEPENDENT_2D: &str = r#"{
    "drifts": [{"kind":"constant","level":0.5},{"kind":"constant","level":0.7}],
    "jump": {"H":0.0,"intensity":{"kind":"constant","level":0.3}},
    "triggers": {"kind":"independent"}
}"#;

const FIXTURE_2D: &str = r#"{
    "drifts": [{"kind":"constant","level":0.05},{"kind":"constant","level":0.10}],
    "jump": {"H":1.0,"intensity":{"kind":"constant","level":0.5}}
}"#;

const LINEAR_2D: &str = r#"{
    "drifts": [{"kind":"linear","a":1.0,"b":5.0},{"kind":"linear","a":100.0,"b":0.0}],
    "jump": {"H":10.0,"intensity":{"kind":"linear","a":0.1,"b":4.0}}
}"#;

const BASKET_5: &str = r#"{
    "drifts": [{"kind":"constant","level":0.05},{"kind":"constant","level":0.05},
               {"kind":"constant","level":0.05},{"kind":"constant","level":0.05},
               {"kind":"constant","level":0.05}],
    "jump": {"H":0.0,"intensity":{"kind":"constant","level":0.5}}
}"#;

#[test]
fn eval_prints_the_independence_product() {
    let model = write_temp("indep.json", INDEPENDENT_2D);
    let output = run(&["eval", "--model", model.to_str().unwrap(), "--u", "0.3,0.7"]);
    assert!(output.status.success());
    let value: f64 = stdout(&output).trim().parse().unwrap();
    assert!((value - 0.21).abs() <= 1e-12, "got {value}");
}

#[test]
fn sample_is_byte_identical_across_runs_and_thread_counts() {
    let model = write_temp("fixture.json", FIXTURE_2D);
    let mut outputs = Vec::new();
    for (tag, threads) in [("a", "1"), ("b", "1"), ("c", "4"), ("d", "8")] {
        let csv = write_temp(&format!("batch-{tag}.csv"), "");
        let output = run(&[
            "sample",
            "--model",
            model.to_str().unwrap(),
            "--n",
            "20000",
            "--seed",
            "7",
            "--out",
            csv.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert!(output.status.success(), "threads {threads}");
        outputs.push(std::fs::read(&csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "same seed, same bytes");
    assert_eq!(outputs[0], outputs[2], "4 threads change nothing");
    assert_eq!(outputs[0], outputs[3], "8 threads change nothing");

    let header = String::from_utf8(outputs[0].clone()).unwrap();
    assert!(header.starts_with("u_1,u_2,tau_1,tau_2\n"));
    assert!(!header.contains('\r'), "LF endings only");
}

#[test]
fn sample_writes_a_metadata_sidecar() {
    let model = write_temp("fixture-meta.json", FIXTURE_2D);
    let csv = write_temp("batch-meta.csv", "");
    let output = run(&[
        "sample",
        "--model",
        model.to_str().unwrap(),
        "--n",
        "50",
        "--seed",
        "99",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let sidecar =
        std::fs::read_to_string(Path::new(&format!("{}.meta.json", csv.to_str().unwrap())))
            .unwrap();
    let meta: serde_json::Value = serde_json::from_str(&sidecar).unwrap();
    assert_eq!(meta["seed"], 99);
    assert_eq!(meta["n"], 50);
    assert_eq!(meta["dimension"], 2);
    assert!(meta["model_fingerprint"].is_string());
}

#[test]
fn deps_reports_numeric_limits_for_linear_rates() {
    let model = write_temp("linear2d.json", LINEAR_2D);
    let output = run(&["deps", "--model", model.to_str().unwrap()]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&output).trim()).unwrap();
    assert_eq!(report["method"], "numeric-limit");
    let upper = report["lambda_upper"].as_f64().unwrap();
    assert!((upper - 0.44).abs() <= 0.01, "lambda_upper {upper}");
    let lower = report["lambda_lower"].as_f64().unwrap();
    assert!(lower.abs() <= 1e-6, "lambda_lower {lower}");
}

#[test]
fn deps_reports_analytic_values_for_constant_rates() {
    let model = write_temp("fixture-deps.json", FIXTURE_2D);
    let output = run(&["deps", "--model", model.to_str().unwrap()]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&output).trim()).unwrap();
    assert_eq!(report["method"], "analytic");
    assert!((report["lambda_upper"].as_f64().unwrap() - 0.48019).abs() < 1e-4);
    assert!((report["epsilon_upper"].as_f64().unwrap() - 0.31595).abs() < 1e-4);
}

#[test]
fn price_ftd_spread_and_present_value() {
    let model = write_temp("basket5.json", BASKET_5);
    let output = run(&[
        "price",
        "ftd",
        "--model",
        model.to_str().unwrap(),
        "--cds-intensity",
        "0.1206",
        "--recovery",
        "0.40",
        "--rate",
        "0.02",
        "--maturity",
        "5.0",
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&output).trim()).unwrap();
    let fair = value["fair_spread"].as_f64().unwrap();
    assert!((fair - 0.3618).abs() <= 1e-12, "fair spread {fair}");

    let output = run(&[
        "price",
        "ftd",
        "--model",
        model.to_str().unwrap(),
        "--cds-intensity",
        "0.1206",
        "--recovery",
        "0.40",
        "--rate",
        "0.02",
        "--maturity",
        "5.0",
        "--spread",
        &fair.to_string(),
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&output).trim()).unwrap();
    let pv = value["present_value"].as_f64().unwrap();
    assert!(pv.abs() <= 1e-8, "present value {pv}");
}

#[test]
fn levelcurve_emits_solvable_rows() {
    let model = write_temp("basket5-lc.json", BASKET_5);
    let output = run(&[
        "levelcurve",
        "--model",
        model.to_str().unwrap(),
        "--cds-intensity",
        "0.1206",
        "--recovery",
        "0.40",
        "--target",
        "0.15",
        "--h-min",
        "1.0",
        "--h-max",
        "20.0",
        "--h-points",
        "5",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("H,lambda,spread"));
    let mut rows = 0;
    for line in lines {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields.len(), 3);
        assert!((fields[2] - 0.15).abs() <= 1e-8, "spread {}", fields[2]);
        rows += 1;
    }
    assert_eq!(rows, 5);
}

#[test]
fn surface_covers_the_grid_with_copula_values() {
    let model = write_temp("fixture-surface.json", FIXTURE_2D);
    let csv = write_temp("surface.csv", "");
    let output = run(&[
        "surface",
        "--model",
        model.to_str().unwrap(),
        "--grid",
        "11",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u1,u2,C");
    assert_eq!(lines.len(), 1 + 11 * 11);
    let last: Vec<f64> = lines[121].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last, vec![1.0, 1.0, 1.0]);
}

#[test]
fn diag_prints_the_power_diagonal() {
    let model = write_temp("fixture-diag.json", FIXTURE_2D);
    let output = run(&["diag", "--model", model.to_str().unwrap(), "--grid", "5"]);
    assert!(output.status.success());
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u,C");
    assert_eq!(lines.len(), 6);
    let mid: Vec<f64> = lines[3].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((mid[0] - 0.5).abs() < 1e-15);
    assert!((mid[1] - 0.5f64.powf(1.519809)).abs() < 1e-4);
}

#[test]
fn validate_accepts_documented_configurations() {
    for (name, json) in [
        ("v1.json", INDEPENDENT_2D),
        ("v2.json", FIXTURE_2D),
        ("v3.json", LINEAR_2D),
        ("v4.json", BASKET_5),
        (
            "v5.json",
            r#"{"sectors":[
                {"drifts":[{"kind":"constant","level":0.05},{"kind":"constant","level":0.10}],
                 "jump":{"H":1.0,"intensity":{"kind":"constant","level":0.5}}},
                {"drifts":[{"kind":"piecewise","breaks":[1.0,5.0],"levels":[0.02,0.05,0.03]}],
                 "jump":{"H":2.0,"intensity":{"kind":"constant","level":1.0}}}
            ]}"#,
        ),
    ] {
        let model = write_temp(name, json);
        let output = run(&["validate", "--model", model.to_str().unwrap()]);
        assert!(output.status.success(), "{name} rejected");
        let diag: serde_json::Value = serde_json::from_str(stdout(&output).trim()).unwrap();
        assert_eq!(diag["valid"], true);
    }
}

#[test]
fn validate_accepts_randomly_constructed_configurations() {
    // any model the library can construct must round-trip through
    // the JSON schema and validate
    use sibuya_core::rng::Stream;
    let mut stream = Stream::substream(0x7A11D, 0);
    let random_rate = |stream: &mut Stream| -> String {
        match stream.next_u64() % 3 {
            0 => format!(
                r#"{{"kind":"constant","level":{}}}"#,
                0.05 + stream.next_uniform()
            ),
            1 => format!(
                r#"{{"kind":"linear","a":{},"b":{}}}"#,
                stream.next_uniform(),
                0.05 + stream.next_uniform()
            ),
            _ => {
                let b1 = 0.2 + stream.next_uniform();
                format!(
                    r#"{{"kind":"piecewise","breaks":[{},{}],"levels":[{},{},{}]}}"#,
                    b1,
                    b1 + 0.2 + stream.next_uniform(),
                    0.05 + stream.next_uniform(),
                    stream.next_uniform(),
                    0.05 + stream.next_uniform()
                )
            }
        }
    };
    for case in 0..50 {
        let d = 1 + (stream.next_u64() % 4) as usize;
        let drifts: Vec<String> = (0..d).map(|_| random_rate(&mut stream)).collect();
        let jump = format!(
            r#"{{"H":{},"intensity":{}}}"#,
            5.0 * stream.next_uniform(),
            random_rate(&mut stream)
        );
        let json = format!(r#"{{"drifts":[{}],"jump":{}}}"#, drifts.join(","), jump);
        let model = write_temp(&format!("random-{case}.json"), &json);
        let output = run(&["validate", "--model", model.to_str().unwrap()]);
        assert!(
            output.status.success(),
            "case {case} rejected: {json}\nstderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    }
}

#[test]
fn validate_rejects_invariant_breaking_mutations() {
    let mutations: Vec<(&str, String)> = vec![
        ("negative level", FIXTURE_2D.replace("0.05", "-0.05")),
        (
            "negative jump size",
            FIXTURE_2D.replace("\"H\":1.0", "\"H\":-1.0"),
        ),
        (
            "bad version",
            FIXTURE_2D.replacen('{', "{\"version\":3,", 1),
        ),
        (
            "unknown field",
            FIXTURE_2D.replacen('{', "{\"spurious\":1,", 1),
        ),
        ("unknown kind", FIXTURE_2D.replace("constant", "cubic")),
        (
            "decreasing breaks",
            r#"{"drifts":[{"kind":"piecewise","breaks":[5.0,1.0],"levels":[0.1,0.2,0.3]}],
                "jump":{"H":1.0,"intensity":{"kind":"constant","level":0.5}}}"#
                .to_string(),
        ),
        (
            "level count mismatch",
            r#"{"drifts":[{"kind":"piecewise","breaks":[1.0],"levels":[0.1]}],
                "jump":{"H":1.0,"intensity":{"kind":"constant","level":0.5}}}"#
                .to_string(),
        ),
        (
            "zero linear rate",
            r#"{"drifts":[{"kind":"linear","a":0.0,"b":0.0}],
                "jump":{"H":1.0,"intensity":{"kind":"constant","level":0.5}}}"#
                .to_string(),
        ),
        (
            "mixture weight out of range",
            FIXTURE_2D.replacen(
                "\"jump\"",
                "\"triggers\":{\"kind\":\"frechet-mixture\",\"alpha\":1.5},\"jump\"",
                1,
            ),
        ),
        (
            "heterogeneous mixture",
            FIXTURE_2D.replacen(
                "\"jump\"",
                "\"triggers\":{\"kind\":\"frechet-mixture\",\"alpha\":0.5},\"jump\"",
                1,
            ),
        ),
        (
            "improper hazard",
            r#"{"drifts":[{"kind":"constant","level":0.0}],
                "jump":{"H":0.0,"intensity":{"kind":"constant","level":0.5}}}"#
                .to_string(),
        ),
        ("truncated document", FIXTURE_2D[..60].to_string()),
        (
            "both shapes",
            FIXTURE_2D.replacen('{', "{\"sectors\":[],", 1),
        ),
    ];
    for (what, mutated) in mutations {
        let model = write_temp("mutated.json", &mutated);
        let output = run(&["validate", "--model", model.to_str().unwrap()]);
        assert_eq!(
            output.status.code(),
            Some(2),
            "{what}: expected exit 2, stdout: {}",
            stdout(&output)
        );
        let stderr = String::from_utf8(output.stderr.clone()).unwrap();
        let line = stderr.lines().next().unwrap();
        let parsed: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(parsed["error"].is_string(), "{what}: bare stderr {stderr}");
        assert!(!stderr.contains("panicked"), "{what}: stack trace leaked");
    }
}

#[test]
fn domain_errors_exit_with_code_two() {
    let model = write_temp("fixture-domain.json", FIXTURE_2D);
    // copula coordinate outside the unit cube
    let output = run(&["eval", "--model", model.to_str().unwrap(), "--u", "0.3,1.7"]);
    assert_eq!(output.status.code(), Some(2));
    // dimension mismatch
    let output = run(&["eval", "--model", model.to_str().unwrap(), "--u", "0.3"]);
    assert_eq!(output.status.code(), Some(2));
    // missing file
    let output = run(&["eval", "--model", "/nonexistent/x.json", "--u", "0.3,0.7"]);
    assert_eq!(output.status.code(), Some(2));
}
