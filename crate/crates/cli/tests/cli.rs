use serde_json::Value;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_centralpath"))
}

fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn gen(which: &[&str]) -> Vec<u8> {
    let out = bin().arg("gen").args(which).output().unwrap();
    assert!(out.status.success());
    out.stdout
}

fn read_json(p: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn gen_piped_into_report() {
    let inst = gen(&["elliptope3"]);
    let dir = scratch("report");
    let d = dir.to_str().unwrap();
    let out = run_with_stdin(&["--out", d, "report", "-"], &inst);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("X** = [[1, -1, 1], [-1, 1, -1], [1, -1, 1]]"));
    assert!(text.contains("y** = (-4, -1, -1)"));
    let rows = text.lines().skip_while(|l| !l.starts_with("convergence table")).skip(2).filter(|l| !l.trim().is_empty()).count();
    assert_eq!(rows, 6);
    let first = std::fs::read(dir.join("report.json")).unwrap();
    let r = read_json(dir.join("report.json"));
    assert_eq!(r["rate"]["x"]["distance_exponent"], "1/2");
    assert!(r["separating_form_seed"].is_u64());
    let t = read_json(dir.join("timings.json"));
    assert!(t["stages"].as_array().unwrap().iter().all(|s| s["seconds"].as_f64().unwrap() >= 0.0));
    // byte-identical JSON on a second run
    let again = run_with_stdin(&["--out", d, "report", "-"], &inst);
    assert!(again.status.success());
    assert_eq!(std::fs::read(dir.join("report.json")).unwrap(), first);
}

#[test]
fn trace_on_diag_lp_fits_exponent_one() {
    let dir = scratch("trace");
    let file = dir.join("diag.json");
    std::fs::write(&file, gen(&["diag-lp"])).unwrap();
    let out = bin().args(["--out", dir.to_str().unwrap(), "trace", file.to_str().unwrap(), "--mu-to", "1e-12"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    assert!(lines.next().unwrap().starts_with("mu,lambda1_X,lambda2_X,lambda1_S,lambda2_S,dist_X,dist_S"));
    assert_eq!(lines.count(), 13);
    let fit = read_json(dir.join("fit.json"));
    for k in ["gamma_x", "gamma_s"] {
        let g = fit[k].as_f64().unwrap();
        assert!((0.98..=1.02).contains(&g), "{k} = {g}");
    }
}

#[test]
fn build_system_reports_degrees() {
    let out = run_with_stdin(&["build-system", "-"], &gen(&["elliptope3"]));
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tdeg_mu"], 6);
    assert!(v["dbar"].as_array().unwrap().iter().all(|d| d == 8));
}

#[test]
fn sdpa_input_is_accepted() {
    let sdpa = "2 =mdim\n1 =nblocks\n2 =blockstruct\n1 2\n0 1 1 1 -1\n0 1 2 2 -1\n1 1 1 1 1\n2 1 2 2 1\n";
    let out = run_with_stdin(&["--format", "sdpa", "build-system", "-"], sdpa.as_bytes());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = bin().args(["report", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn exit_codes_follow_failure_class() {
    let bad = run_with_stdin(&["validate", "-"], b"{ not json");
    assert_eq!(bad.status.code(), Some(2));
    let big = run_with_stdin(&["eliminate", "-"], &gen(&["khachiyan", "--n", "4"]));
    assert_eq!(big.status.code(), Some(3));
    let mu = run_with_stdin(&["trace", "-", "--mu-to", "2"], &gen(&["diag-lp"]));
    assert_eq!(mu.status.code(), Some(2));
}
