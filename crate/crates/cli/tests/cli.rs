use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nctower"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn bound_values() {
    let o = run(&["bound", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "8.0");
    let v = json(&run(&["--json", "bound", "1"]));
    assert_eq!(v["g"], 1.0);
    assert_eq!(code(&run(&["bound", "0"])), 2);
}

#[test]
fn limit_of_trivial_map() {
    let o = run(&["--json", "limit", "--domain", "C2", "--codomain", "C2", "--images", "e"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["limit_order"], 2);
    assert_eq!(v["bound"], 2.0);
    assert_eq!(v["g_value"], 1.0);
    assert_eq!(v["into_limit_bijective"], true);
}

#[test]
fn unstabilized_limit_is_a_failed_check() {
    let o = run(&[
        "--json", "limit", "--domain", "C2", "--codomain", "C2", "--images", "e", "--max-stages", "2",
    ]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["error"]["kind"], "inconsistent");
    assert!(v["error"]["message"].as_str().unwrap().contains("tower not stabilized within 2 stages"));
}

#[test]
fn input_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["series", "--domain", "S7", "--codomain", "S3"],
        &["series", "--domain", "{\"degree\": 3,", "--codomain", "S3"],
        &["closure", "--domain", "{\"degree\": 3, \"generators\": [[1,1,2]]}", "--codomain", "C2", "--images", "e"],
        &["closure", "--domain", "{\"degree\": 2, \"generators\": [\"(1 2 3)\"]}", "--codomain", "C2", "--images", "e"],
        &["limit", "--domain", "S3", "--codomain", "S3", "--images", "a;e"],
        &["limit", "--domain", "S3", "--codomain", "S3", "--images", "a"],
        &["limit", "--domain", "C2", "--codomain", "S3", "--images", "(1 4)"],
        &["verify", "--theorem", "nilpotent", "--domain", "S3", "--codomain", "S3", "--images", "a;b"],
        &["verify", "--theorem", "no_such_theorem"],
        &["verify", "--corpus", "huge"],
        &["tower", "--domain", "C2"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let v = json(&run(&["--json", "limit", "--domain", "S3", "--codomain", "S3", "--images", "a;e"]));
    assert_eq!(v["error"]["kind"], "not_a_homomorphism");
}

#[test]
fn capacity_exits_3() {
    let o = run(&[
        "--json", "closure", "--domain", "C3", "--codomain", "S3", "--images", "a", "--peiffer", "--max-cosets", "4",
    ]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["error"]["kind"], "capacity");
    let o = run(&[
        "tower", "--domain", "C2", "--codomain", "C3", "--images", "e", "--no-reduce", "--max-cosets", "100",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn json_groups_and_files() {
    let klein = r#"{"degree": 4, "generators": ["(1 2)(3 4)", "(1 3)(2 4)"]}"#;
    let o = run(&["--json", "closure", "--domain", klein, "--codomain", klein, "--images", "(1 2)(3 4);(1 3)(2 4)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["closure_order"], 4);

    let dir = std::env::temp_dir().join(format!("nctower-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("klein.json");
    std::fs::write(&path, klein).unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["--json", "series", "--domain", p, "--codomain", "S4", "--images", "(1 2)(3 4);(1 3)(2 4)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["c_order"], 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn homomorphism_inputs() {
    let v = json(&run(&["--json", "limit", "--domain", "S3", "--codomain", "S4", "--images", "(1 2 3);(1 2)"]));
    assert_eq!(v["domain_order"], 6);
    assert_eq!(v["c_order"], 24);
    let v = json(&run(&["--json", "closure", "--domain", "C4", "--codomain", "C2", "--images", "a"]));
    assert_eq!(v["closure_order"], 4);
    assert_eq!(v["method"], "fast_path");
    let v = json(&run(&["--json", "closure", "--domain", "C3", "--codomain", "S3", "--images", "[2,3,1]"]));
    assert_eq!(v["closure_order"], 9);
}

#[test]
fn tower_reports_growth() {
    let v = json(&run(&[
        "--json", "tower", "--domain", "C2", "--codomain", "C3", "--images", "e", "--no-reduce", "--max-stages", "4",
    ]));
    let orders: Vec<u64> = v["stages"].as_array().unwrap().iter().map(|s| s["order"].as_u64().unwrap()).collect();
    assert_eq!(orders, vec![3, 8, 16, 256]);
    assert_eq!(v["stabilized"], false);
    let v = json(&run(&["--json", "tower", "--domain", "S3", "--codomain", "S3", "--images", "a;b", "--reduce"]));
    assert_eq!(v["stabilized_at"], 2);
}

#[test]
fn verify_runs() {
    let o = run(&["verify", "--theorem", "nilpotent", "--corpus", "small"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 failed"));
    let o = run(&["--json", "verify", "--domain", "A5", "--codomain", "A5", "--images", "a;b", "--theorem", "perfect_case"]);
    assert_eq!(code(&o), 0);
    let first: Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(first["status"], "pass");
    assert_eq!(first["data"]["gamma2_order"], 60);
}

#[test]
fn json_output_is_deterministic() {
    let args: &[&[&str]] = &[
        &["--json", "closure", "--domain", "S3", "--codomain", "S4", "--images", "(1 2 3);(1 2)", "--index"],
        &["--json", "limit", "--domain", "Q8", "--codomain", "C2", "--images", "a;e"],
        &["--json", "verify", "--corpus", "tiny"],
    ];
    for a in args {
        let x = run(a);
        let y = run(a);
        assert_eq!(code(&x), 0);
        assert_eq!(x.stdout, y.stdout, "{a:?}");
    }
}
