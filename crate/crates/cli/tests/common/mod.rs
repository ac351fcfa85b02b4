#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

pub fn devex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_devex"))
        .args(args)
        .env_remove("DEVEX_LOG")
        .output()
        .expect("failed to launch devex")
}

pub fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Writes a pair file into the test scratch directory and returns its path.
pub fn pair_file(name: &str, p1: &[f64], p2: &[f64]) -> String {
    let alphabet: Vec<String> = (0..p1.len()).map(|i| format!("s{i}")).collect();
    let body = serde_json::json!({"alphabet": alphabet, "p1": p1, "p2": p2});
    write_file(name, &body.to_string())
}

pub fn write_file(name: &str, body: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

pub fn mirrored_pair_file() -> String {
    pair_file("mirrored_pair.json", &[0.4, 0.6], &[0.6, 0.4])
}
