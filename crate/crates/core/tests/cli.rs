use std::process::{Command, Output};

fn opdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opdyn")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn classify_seq_json() {
    let out = opdyn(&["--json", "classify-seq", "exp_pow a=1.5", "--n", "10000"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("bad"), "{v}");
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(code(&opdyn(&["classify-seq", "no_such_family"])), 2);
    assert_eq!(code(&opdyn(&["classify-symbol", "[1, "])), 2);
    assert_eq!(code(&opdyn(&["run", "--scenario", "E9"])), 2);
}

#[test]
fn oversized_horizon_exits_4() {
    let out = opdyn(&["classify-seq", "log_pow k=1", "--n", "1000000000000"]);
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn salas_none_found_is_an_answer() {
    let out = opdyn(&["check-salas", "--weights", "step_bilateral", "--n-max", "200"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("none found up to N_max=200"));
}

#[test]
fn run_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = opdyn(&["run", "--scenario", "E7", "--out", out_dir, "--workers", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = dir.path().join("E7_report.json");
    assert!(report.exists());
    let out = opdyn(&["verify", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    // a tampered certificate must fail re-verification
    let text = std::fs::read_to_string(&report).unwrap();
    let tampered = text.replacen("\"winding\": 0", "\"winding\": 1", 1);
    assert_ne!(text, tampered);
    std::fs::write(&report, tampered).unwrap();
    assert_eq!(code(&opdyn(&["verify", report.to_str().unwrap()])), 3);
}

#[test]
fn run_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("e4.toml");
    std::fs::write(&cfg, "scenario = \"E4\"\n[output]\ndir = \"out\"\n").unwrap();
    let out_dir = dir.path().join("reports");
    let out = opdyn(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    std::fs::write(&cfg, "scenario = \"E4\"\nunknown_key = 1\n").unwrap();
    assert_eq!(code(&opdyn(&["run", "--config", cfg.to_str().unwrap()])), 2);
}
