use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn falg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_falg"))
        .args(args)
        .env("FALG_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&falg(&["check", "--fixture", "SS2", "--law", "f-algebroid"])), 0);
    assert_eq!(code(&falg(&["check", "--fixture", "TR2", "--law", "prelie-com"])), 0);
    assert_eq!(code(&falg(&["check", data("ss2.json").to_str().unwrap()])), 0);
    assert_eq!(code(&falg(&["check", "--fixture", "NOPE"])), 2);
    assert_eq!(code(&falg(&["check", "--fixture", "SS2", "--law", "bogus"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"rank": 1, "bogus": true}"#).unwrap();
    let out = falg(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"));
}

#[test]
fn json_report_witnesses_reparse() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = falg(&[
        "hierarchy",
        "--fixture",
        "SS2",
        "--flows",
        "u2,0;u1,0",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("u1*u1_x*u2_x"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["overall"], "fail");
    let failed: Vec<&serde_json::Value> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["witness"][0], "u1*u1_x*u2_x");
}

#[test]
fn dual_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("dual.json");
    let out = falg(&["dual", "--fixture", "SS2", "--ev", "u1,u2", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    // The dual file is itself a valid F-algebroid.
    assert_eq!(code(&falg(&["check", out_path.to_str().unwrap(), "--law", "f-algebroid"])), 0);

    let same = dir.path().join("same.json");
    assert_eq!(code(&falg(&["dual", "--fixture", "SS2", "--ev", "1,1", "--out", same.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&same).unwrap();
    assert!(text.contains(r#""product": [[["1","0"],["0","0"]],[["0","0"],["0","1"]]]"#), "{text}");

    let out = falg(&["dual", "--fixture", "TR2", "--ev", "u1^2,u2", "--pre-f"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("residual"));
}

#[test]
fn deform_commands() {
    let dir = tempfile::tempdir().unwrap();
    let deformed = dir.path().join("deformed.json");
    let out = falg(&[
        "nijenhuis",
        "--fixture",
        "SS2",
        "--nijenhuis",
        data("ss2_nijenhuis.json").to_str().unwrap(),
        "--out",
        deformed.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(code(&falg(&["check", deformed.to_str().unwrap(), "--law", "f-algebroid"])), 0);

    let out = falg(&[
        "deform",
        data("trunc4.json").to_str().unwrap(),
        "--mu1",
        data("trunc4_mu1.json").to_str().unwrap(),
        "--order",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("[E1, E2] = [0, 1, 0, 0]"), "{text}");
    assert!(text.contains("Theta_1 = 0: true"), "{text}");

    let out = falg(&[
        "deform",
        "--fixture",
        "TRUNC4",
        "--mu1",
        data("trunc4_mu1_corrupted.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL pre-lie-rule at order 1"));
}

#[test]
fn hierarchy_commands() {
    let out = falg(&["hierarchy", "--fixture", "SS2", "--alpha-max", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("X(1,2) = [1/2*u1^2, 0]"), "{}", stdout(&out));
    assert_eq!(code(&falg(&["hierarchy", "--fixture", "SS1", "--alpha-max", "0"])), 0);
    // E1·E1 = u2·E1 makes the level-1 right-hand side fail cross-derivative symmetry.
    let out = falg(&["hierarchy", data("incompatible.json").to_str().unwrap(), "--alpha-max", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("recursion incompatible at level 1"));
}

#[test]
fn fixtures_are_listed() {
    let out = falg(&["fixtures"]);
    assert_eq!(code(&out), 0);
    for name in ["FM2", "ACT2", "SS<n>", "TR2", "TRUNC<m>"] {
        assert!(stdout(&out).contains(name));
    }
}
