use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_finestruct"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn eval_family_member() {
    let (stdout, _, code) = run(&["eval", "--family", "H", "--n", "1", "--q", "1,2,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "[1.0,0.0,0.0,0.0]");
}

#[test]
fn eval_shorthand_function() {
    let (stdout, _, code) = run(&["eval", "--f", "q^2", "--q", "0,1,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "[-1.0,0.0,0.0,0.0]");
}

#[test]
fn integrate_laplacian_of_square() {
    let (stdout, _, code) = run(&["integrate", "--op", "Delta", "--f", "q^2", "--at", "0.5,0.5,0,0"]);
    assert_eq!(code, 0);
    let v: [f64; 4] = serde_json::from_str(stdout.trim()).unwrap();
    assert!((v[0] + 4.0).abs() < 1e-8 && v[1].abs() < 1e-8);
}

#[test]
fn expand_round_trips_bit_identically_and_transforms() {
    let (spec, _, code) = run(&["expand", "--kernel", "S_L_inv", "--p", "2,0.5,0,0", "--terms", "12"]);
    assert_eq!(code, 0);
    let parsed: finestruct::series::SeriesSpec = serde_json::from_str(spec.trim()).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap(), spec.trim());

    let dir = std::env::temp_dir().join("finestruct-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    std::fs::write(&path, spec.trim()).unwrap();
    let (fine, _, code) = run(&["transform", "--op", "D", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(fine.contains("\"pos_basis\":\"Ht\""));
}

#[test]
fn region_emits_csv() {
    let (stdout, _, code) = run(&[
        "region",
        "--region",
        r#"{"tag":"sigma_ball","p":[0,0,0,0],"R":1.0}"#,
        "--steps",
        "3",
        "--u",
        "-2:2",
        "--v",
        "-2:2",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "u,v,inside");
    assert_eq!(lines.len(), 10);
    assert!(lines.contains(&"0,0,1"));
}

#[test]
fn verify_group_passes() {
    let (stdout, _, code) = run(&["verify", "--group", "fueter-theorem"]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("pass"));
}

#[test]
fn flag_errors_exit_two() {
    let (_, _, code) = run(&["eval", "--q", "1,2,0,0"]);
    assert_eq!(code, 2);
    let (_, _, code) = run(&["eval", "--family", "H", "--n", "1", "--q", "not-a-quat"]);
    assert_eq!(code, 2);
    let (_, _, code) = run(&["bogus"]);
    assert_eq!(code, 2);
}
