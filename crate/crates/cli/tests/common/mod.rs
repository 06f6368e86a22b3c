use std::path::{Path, PathBuf};
use std::process::Command;

pub const FIXTURES: [&str; 10] = [
    "fig1", "ex33", "p1", "p2", "p3", "forb1", "forb2", "forb3", "bowtie", "chain3",
];

/// Argument lists run against every fixture; the name is the golden file suffix.
pub const COMMANDS: [(&str, &[&str]); 11] = [
    ("analyze", &["analyze"]),
    ("extensions", &["extensions"]),
    ("classify", &["classify", "--forbidden"]),
    ("hook", &["hook"]),
    ("hilbert", &["hilbert"]),
    (
        "hilbert-tx",
        &["hilbert", "--grading", "tx", "--trunc", "5"],
    ),
    (
        "numerator",
        &["hilbert", "--form", "numerator", "--trunc", "10"],
    ),
    ("presentation", &["presentation"]),
    ("presentation-m2", &["presentation", "--format", "m2"]),
    ("complex", &["complex"]),
    ("selftest", &["selftest"]),
];

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture(name: &str) -> PathBuf {
    root().join("fixtures").join(format!("{name}.poset"))
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs the binary, returning stdout and the exit code.
pub fn run(args: &[&str], fixture_name: &str, extra: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_ppart"))
        .args(&args[..1])
        .arg(fixture(fixture_name))
        .args(&args[1..])
        .args(extra)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("utf-8 output"),
        out.status.code().unwrap_or(-1),
    )
}

/// Golden file contents: the exit code line followed by stdout.
pub fn golden_text(stdout: &str, code: i32) -> String {
    format!("exit {code}\n{stdout}")
}
