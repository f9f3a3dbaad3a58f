use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paleyvec"))
        .args(args)
        .env_remove("PALEYVEC_BUDGET_VERTICES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

/// Monic polynomials of degree k over F_p, constant term first, in the
/// order that compares the constant term first.
fn monic(p: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (p as usize).pow(k as u32);
    for i in 0..total {
        let mut c = Vec::with_capacity(k + 1);
        let mut x = i;
        for _ in 0..k {
            c.push((x % p as usize) as u32);
            x /= p as usize;
        }
        c.push(1);
        out.push(c);
    }
    out.sort();
    out
}

fn eval(c: &[u32], x: u32, p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &a| (acc * x + a) % p)
}

#[test]
fn printed_moduli_are_least_irreducibles() {
    for (p, n) in [(2u32, 2usize), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3)] {
        let spec = format!("{p}^1^{n}");
        let o = run(&["field", "--field", &spec, "--print-modulus"]);
        assert_eq!(o.status.code(), Some(0));
        let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
        let ext: Vec<u32> = lines
            .last()
            .unwrap()
            .split(',')
            .map(|t| t.parse().unwrap())
            .collect();
        // degree ≤ 3: irreducible iff rootless
        let least = monic(p, n)
            .into_iter()
            .find(|c| (0..p).all(|x| eval(c, x, p) != 0))
            .unwrap();
        assert_eq!(ext, least, "{spec}");
    }
}

#[test]
fn field_spec_forms_agree() {
    let a = json(&[
        "field",
        "--field",
        "3^2^2",
        "--format",
        "json",
        "--print-modulus",
    ]);
    let b = json(&[
        "field",
        "--field",
        "q=9,n=2",
        "--format",
        "json",
        "--print-modulus",
    ]);
    let c = json(&[
        "field",
        "--field",
        "9^2",
        "--format",
        "json",
        "--print-modulus",
    ]);
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a["order"], 81);
    assert_eq!(a["base_modulus"].as_array().unwrap().len(), 3);
}

#[test]
fn omega_of_trace_kernel_over_f8() {
    let v = json(&[
        "omega",
        "--field",
        "2^1^3",
        "--subspace",
        "ker-trace-of=1",
        "--mode",
        "both",
    ]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["omega"], 4);
    assert_eq!(v["predicted"], 4);
    assert_eq!(v["match"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 4);
    let d = &v["decomposition"];
    assert!(d["t"].is_u64() && d["r"].is_u64());
    assert!(v["runtime_ms"].is_number());
}

#[test]
fn omega_predict_only() {
    let v = json(&[
        "omega",
        "--field",
        "3^1^2",
        "--subspace",
        "basis=1",
        "--mode",
        "predict",
    ]);
    assert!(v.get("omega").is_none());
    assert_eq!(v["prediction"]["values"], serde_json::json!([3]));
}

#[test]
fn omega_output_is_reproducible() {
    let args = [
        "omega",
        "--field",
        "3^1^4",
        "--subspace",
        "ker-trace-of=2",
        "--no-timing",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut parallel = vec!["--workers", "3"];
    parallel.extend(args);
    assert_eq!(run(&parallel).stdout, a.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        run(&["omega", "--field", "3^1^2", "--subspace", "basis=x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["omega", "--field", "6^1^2", "--subspace", "basis=1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["omega", "--field", "3^1^2", "--subspace", "basis=99"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn budgets_exit_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_paleyvec"))
        .args(["omega", "--field", "3^3", "--subspace", "basis=1"])
        .env("PALEYVEC_BUDGET_VERTICES", "16")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = run(&[
        "--time-limit",
        "0.0000001",
        "--no-dominance",
        "omega",
        "--field",
        "3^7",
        "--subspace",
        "ker-trace-of=1",
        "--mode",
        "exact",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&[
        "survey",
        "--field",
        "2^8",
        "--dim",
        "4",
        "--max-subspaces",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn survey_lines_over_f25() {
    let o = run(&["survey", "--field", "5^2", "--dim", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "basis,d_U,has_square,D_U,s_U,predicted,exact,match"
    );
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 6);
    let mut exact: Vec<&str> = rows.iter().map(|r| r[6].as_str()).collect();
    exact.sort();
    assert_eq!(exact, ["3", "3", "3", "5", "5", "5"]);
    assert!(rows.iter().all(|r| r[7] == "true"));
    // q ≡ 1 mod 4 and n = 2: ω = q exactly when s = -1
    assert!(rows.iter().all(|r| (r[4] == "-1") == (r[6] == "5")));
}

#[test]
fn survey_hyperplanes_over_f16() {
    let text = stdout(&run(&["survey", "--field", "2^4", "--dim", "n-1"]));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r[6] == "5" && r[7] == "true"));
}

#[test]
fn survey_is_deterministic_and_pretty_keeps_values() {
    let a = run(&["survey", "--field", "3^3", "--dim", "2"]);
    let b = run(&["--workers", "2", "survey", "--field", "3^3", "--dim", "2"]);
    assert_eq!(a.stdout, b.stdout);
    let p = stdout(&run(&[
        "survey", "--field", "3^3", "--dim", "2", "--pretty",
    ]));
    let plain = csv_rows(&stdout(&a));
    let pretty = csv_rows(&p);
    assert_eq!(plain.len(), 13);
    for (x, y) in plain.iter().zip(&pretty) {
        assert_eq!(x[1..], y[1..]);
    }
    assert!(pretty.iter().any(|r| r[0].contains('y')));
}

#[test]
fn verify_reports_json_and_exit_status() {
    let v = json(&["verify", "--suite", "n-1", "--qmax", "3", "--nmax", "4"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["suite"], "n-1");
    assert!(v["instances"].as_u64().unwrap() > 0);
    assert_eq!(v["instances"], v["passes"]);
    assert_eq!(v["failures"], serde_json::json!([]));
    let all = json(&["verify", "--suite", "all", "--qmax", "3", "--nmax", "3"]);
    assert_eq!(all["suites"].as_array().unwrap().len(), 10);
}

#[test]
fn form_over_f9() {
    let v = json(&[
        "form", "--field", "3^1^2", "--lambda", "1", "--format", "json",
    ]);
    assert_eq!(v["gram"], serde_json::json!([[2, 0], [0, 1]]));
    assert_eq!(v["chi"], -1);
    assert_eq!(v["t"]["value"], 1);
    assert_eq!(v["m"]["value"], 3);
    assert_eq!(v["m"]["witness"].as_array().unwrap().len(), 3);
    let h = stdout(&run(&["form", "--field", "3^1^2", "--gram", "1,0;0,1"]));
    assert!(h.contains("chi: 1"), "{h}");
    assert_eq!(
        run(&["form", "--field", "3^1^2", "--lambda", "9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bench_modes_agree() {
    let v = json(&[
        "bench",
        "--field",
        "3^4",
        "--reps",
        "1",
        "--limit",
        "8",
        "--compare-workers",
        "2",
        "--format",
        "json",
    ]);
    let c = &v["classes"][0];
    assert_eq!(c["class"], "q=3 n=4 d=3");
    assert_eq!(c["instances"], 8);
    assert_eq!(c["modes_agree"], true);
    assert_eq!(c["workers_agree"], true);
    assert!(c["speedup"].as_f64().unwrap() > 0.0);
}
