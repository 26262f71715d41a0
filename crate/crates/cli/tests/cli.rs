use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn carlitz(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_carlitz"))
        .args(args)
        .env_remove("CARLITZ_THREADS")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn strip_elapsed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("ramanujan_q3_j1", &["--q", "3", "verify", "ramanujan", "--j", "1", "--prec", "60", "--format", "json"]),
    ("ramanujan_q5_j2", &["--q", "5", "verify", "ramanujan", "--j", "2", "--prec", "40", "--format", "json"]),
    ("euler_carlitz_q3_i2", &["--q", "3", "verify", "euler-carlitz", "--i", "2", "--format", "json"]),
    ("zeta_q3_m2", &["--q", "3", "zeta", "--m", "2", "--prec", "30", "--format", "json"]),
    ("period_q3_both", &["--q", "3", "period", "--method", "both", "--prec", "40", "--format", "json"]),
    ("period_q9_product", &["--q", "9", "--modulus", "1,0,1", "period", "--method", "product", "--format", "json"]),
    ("bc_q3_max8", &["--q", "3", "bc", "--max", "8", "--format", "json"]),
];

#[test]
fn golden_reports() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in GOLDEN {
        let (code, stdout, stderr) = carlitz(args);
        assert_eq!(code, 0, "{name}: {stderr}");
        let got = strip_elapsed(serde_json::from_str(&stdout).unwrap());
        let path = dir.join(format!("{name}.json"));
        if update {
            std::fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
            continue;
        }
        let want: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(got, want, "{name} differs from {}", path.display());
    }
}

#[test]
fn exit_codes_and_messages() {
    let (code, out, err) = carlitz(&["--q", "4", "verify", "ramanujan", "--j", "1"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("q must be odd"));

    let (code, out, err) = carlitz(&["--q", "3", "verify", "ramanujan", "--j", "0", "--format", "json"]);
    assert_eq!(code, 1);
    assert!(out.is_empty(), "no partial JSON on errors");
    assert!(err.contains("j is a positive integer"));

    assert_eq!(carlitz(&["--q", "9", "zeta", "--m", "1"]).0, 1);
    assert_eq!(carlitz(&["--q", "9", "--modulus", "2,0,1", "zeta", "--m", "1"]).0, 1);
    assert_eq!(carlitz(&["zeta", "--m", "1", "--prec", "10"]).0, 1);
    assert_eq!(carlitz(&["frobnicate"]).0, 1);
    assert_eq!(carlitz(&["--help"]).0, 0);
    assert_eq!(carlitz(&["--version"]).0, 0);

    // An undersized degree cutoff leaves the identity visibly unbalanced.
    let (code, out, _) = carlitz(&["--q", "3", "verify", "ramanujan", "--j", "1", "--dmax", "0", "--format", "json"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["pass"], Value::Bool(false));

    // Coefficient tables too small for the request surface as capacity errors.
    let (code, _, err) = carlitz(&["--q", "3", "bc", "--max", "100000000000"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn text_format_and_out_file() {
    let dir = std::env::temp_dir().join(format!("carlitz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let p = path.to_str().unwrap();
    let (code, stdout, _) = carlitz(&["verify", "euler-carlitz", "--i", "1", "--format", "json", "--out", p]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
    let (code, text, _) = carlitz(&["verify", "euler-carlitz", "--i", "1"]);
    assert_eq!(code, 0);
    assert!(text.contains("result: pass"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_flag_beats_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_carlitz"));
        cmd.args(["zeta", "--m", "1", "--format", "json"]);
        if let Some(f) = flag {
            cmd.args(["--threads", f]);
        }
        match env {
            Some(e) => cmd.env("CARLITZ_THREADS", e),
            None => cmd.env_remove("CARLITZ_THREADS"),
        };
        cmd.output().unwrap().status.code().unwrap()
    };
    assert_eq!(run(Some("0"), None), 1);
    assert_eq!(run(Some("0"), Some("2")), 0);
    assert_eq!(run(Some("4"), None), 0);
}
