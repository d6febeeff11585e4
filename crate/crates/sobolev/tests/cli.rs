use std::path::PathBuf;
use std::process::{Command, Output};

fn sobolev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sobolev"))
        .args(args)
        .output()
        .expect("failed to spawn sobolev")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sobolev-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn csv_output_is_reproducible() {
    let a = sobolev(&["laguerre-roots", "--k-max", "4"]);
    let b = sobolev(&["laguerre-roots", "--k-max", "4"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,smallest_root_re,smallest_root_im"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn json_output_parses() {
    let out = sobolev(&["--format", "json", "penta", "--m", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["experiment"], "penta");
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
    assert!(v["diagnostics"]["off_band_ratio"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn dump_feeds_back_into_compare_solvers() {
    let dir = scratch_dir("dump");
    let dump = dir.join("spectral.jsonl");
    let trace = dir.join("trace.jsonl");
    let out = sobolev(&[
        "--dump-spectral",
        dump.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "compare-solvers",
        "--cases",
        "3",
        "--max-dim",
        "8",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dumped = std::fs::read_to_string(&dump).unwrap();
    assert!(dumped.lines().count() >= 3);
    assert!(!std::fs::read_to_string(&trace).unwrap().is_empty());

    let replay = sobolev(&["compare-solvers", "--input", dump.to_str().unwrap()]);
    assert!(replay.status.success(), "{}", String::from_utf8_lossy(&replay.stderr));
    assert!(String::from_utf8(replay.stdout).unwrap().lines().count() > 1);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn plot_is_written() {
    let dir = scratch_dir("plot");
    let svg = dir.join("ls.svg");
    let out = sobolev(&[
        "least-squares",
        "--m",
        "21",
        "--degrees",
        "1,5,9",
        "--plot",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<polyline"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn bad_arguments_exit_with_usage_code() {
    assert_eq!(sobolev(&["penta", "--m", "banana"]).status.code(), Some(2));
    assert_eq!(sobolev(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn invalid_input_file_fails() {
    let dir = scratch_dir("bad");
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\"blocks\": [], \"betas\": []}").unwrap();
    let out = sobolev(&["compare-solvers", "--input", path.to_str().unwrap()]);
    assert!(!out.status.success());
    std::fs::remove_dir_all(dir).ok();
}
