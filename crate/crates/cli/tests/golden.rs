mod common;

use common::{golden_dir, golden_text, run, COMMANDS, FIXTURES};

#[test]
fn golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let dir = golden_dir();
    std::fs::create_dir_all(&dir).unwrap();
    let mut mismatches = Vec::new();
    for fixture in FIXTURES {
        for (name, args) in COMMANDS {
            let (stdout, code) = run(args, fixture, &[]);
            let got = golden_text(&stdout, code);
            let path = dir.join(format!("{fixture}.{name}.txt"));
            if update {
                std::fs::write(&path, &got).unwrap();
            } else {
                let want = std::fs::read_to_string(&path)
                    .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
                if want != got {
                    mismatches.push(path.display().to_string());
                }
            }
        }
    }
    assert!(mismatches.is_empty(), "golden mismatches: {mismatches:#?}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["hook"], "ex33", &[]).1, 3);
    assert_eq!(run(&["hook"], "fig1", &[]).1, 0);
    assert_eq!(run(&["classify"], "forb3", &[]).1, 0);
    assert_eq!(
        run(&["extensions"], "fig1", &["--cap", "10", "--list"]).1,
        4
    );
    assert_eq!(run(&["complex"], "fig1", &["--vertex-cap", "4"]).1, 4);
    assert_eq!(run(&["hilbert", "--form", "rational-sum"], "p2", &[]).1, 3);
    assert_eq!(run(&["hilbert"], "p1", &["--flavor", "loose"]).1, 1);
    let (out, code) = run(&["extensions"], "fig1", &["--timing"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"timing_ms\""));
    assert!(!run(&["extensions"], "fig1", &[]).0.contains("timing_ms"));
}

#[test]
fn classify_reports_bad_ideal() {
    let (out, _) = run(&["classify"], "forb3", &[]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "ppart/1");
    assert_eq!(v["result"]["classification"]["witness"]["kind"], "BadIdeal");
    assert_eq!(v["input"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn fig1_extensions() {
    let (out, _) = run(&["extensions"], "fig1", &[]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["count"], 300);
    assert_eq!(v["result"]["maj_polynomial"]["at_one"], "300");
}
