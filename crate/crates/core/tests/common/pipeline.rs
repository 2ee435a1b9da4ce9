use std::path::{Path, PathBuf};
use std::process::Command;

pub const OUTPUTS: [&str; 7] = [
    "kept.jsonl",
    "filter_report.json",
    "records.jsonl",
    "selected.jsonl",
    "sft.jsonl",
    "manifest.json",
    "report.tsv",
];

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/e2e")
}

fn run(args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_mtcurate"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("spawn mtcurate");
    assert!(
        out.status.success(),
        "mtcurate {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

/// filter → backtranslate → sample → eval on the committed fixture, writing
/// every artifact into `out`.
pub fn run_pipeline(out: &Path) {
    let fx = fixture_dir();
    let cfg = fx.join("config.toml");
    let cfg = cfg.to_str().unwrap();
    let f = |name: &str| fx.join(name).to_string_lossy().into_owned();
    let o = |name: &str| out.join(name).to_string_lossy().into_owned();
    run(&["--config", cfg, "filter", "--in", &f("pairs.jsonl"), "--out", &o("kept.jsonl"), "--report", &o("filter_report.json")]);
    run(&[
        "--config", cfg, "backtranslate", "--in", &o("kept.jsonl"), "--llm1", "llm1", "--llm2", "llm2",
        "--direction", "zh-en", "--out", &o("records.jsonl"),
    ]);
    run(&[
        "--config", cfg, "sample", "--in", &o("records.jsonl"), "--out", &o("selected.jsonl"),
        "--emit-sft", &o("sft.jsonl"), "--choice", "best_roundtrip",
        "--manifest", &o("manifest.json"), "--general-count", "3255247",
    ]);
    run(&[
        "--config", cfg, "eval", "--bench", &f("bench.jsonl"), "--backend", "llm1", "--format", "tsv",
        "--out", &o("report.tsv"),
    ]);
}

/// Names of outputs in `out` that differ from the committed goldens.
pub fn golden_mismatches(out: &Path) -> Vec<String> {
    let golden = fixture_dir().join("golden");
    OUTPUTS
        .iter()
        .filter(|name| {
            let got = std::fs::read(out.join(name)).unwrap_or_default();
            let want = std::fs::read(golden.join(name)).unwrap_or_default();
            got.is_empty() || got != want
        })
        .map(|s| s.to_string())
        .collect()
}
