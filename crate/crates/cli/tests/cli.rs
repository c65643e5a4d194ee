use std::path::Path;
use std::process::{Command, Output};

fn lhp4d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lhp4d")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn build_trivial_scalar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scalar.code");
    let o = lhp4d(&["build", "--preset", "trivial-scalar", "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("n = 6, k = 0"), "{text}");
    assert!(text.contains("δ₀·δ₋₁: zero"), "{text}");

    let o = lhp4d(&["inspect", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("status: valid"));
}

#[test]
fn build_l3_preset_reports_target() {
    let o = lhp4d(&["build", "--preset", "paper-L3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("[[384, 48, 6]]"));
    assert!(text.contains("achieved [[n, k]]"));
    assert!(text.contains("δ₁·δ₀: zero"));
}

#[test]
fn seed_file_errors_have_locations() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = write_config(dir.path(), "bad.seeds", "[A]\nλ(0) λ(1)\n[B]\nλ(0) λ(x)\n[C]\nλ(0)\n[D]\nλ(0)\n");
    let o = lhp4d(&["build", "--seeds", seeds.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(lhp4d(&["build", "--nonsense"]).status.code(), Some(1));
    assert_eq!(lhp4d(&["build"]).status.code(), Some(1));
    assert_eq!(lhp4d(&["--help"]).status.code(), Some(0));
}

#[test]
fn tampered_code_file_fails_inspection() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rep2.code");
    assert!(lhp4d(&["build", "--preset", "rep2", "-o", out.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let at = lines.iter().position(|l| l == "[hx]").unwrap() + 2;
    let flipped: String = lines[at]
        .chars()
        .enumerate()
        .map(|(i, c)| if i == 0 { if c == '0' { '1' } else { '0' } } else { c })
        .collect();
    lines[at] = flipped;
    std::fs::write(&out, lines.join("\n") + "\n").unwrap();
    let o = lhp4d(&["inspect", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("INVALID"));
}

#[test]
fn zero_noise_simulation() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("zero.csv");
    let cfg = write_config(
        dir.path(),
        "zero.toml",
        &format!(
            "[code]\npreset = \"rep2\"\n[channel]\np = [0.0]\nq = [0.0]\n[run]\ntrials = 50\nsingle_shot = [true, false]\noutput = {:?}\n",
            csv.to_str().unwrap()
        ),
    );
    let o = lhp4d(&["simulate", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = lhp4d_core::montecarlo::read_rows(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.failures == 0 && r.wer == 0.0));
    assert!(dir.path().join("zero.csv.config.toml").exists());
}

#[test]
fn eta_sweep_is_reproducible_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let body = |out: &Path| {
        format!(
            "[code]\npreset = \"rep2\"\n[channel]\np = [0.05]\nq = [0.01]\neta = [1, 10, 100, 1000]\n\
             [run]\ntrials = 40\nmaster_seed = 7\ntailored = [false, true]\nrecord_timing = false\noutput = {:?}\n",
            out.to_str().unwrap()
        )
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let ca = write_config(dir.path(), "a.toml", &body(&a));
    let cb = write_config(dir.path(), "b.toml", &body(&b));
    assert!(lhp4d(&["--threads", "2", "simulate", ca.to_str().unwrap()]).status.success());
    assert!(lhp4d(&["sweep", cb.to_str().unwrap()]).status.success());
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let rows = lhp4d_core::montecarlo::read_rows(&ta[..]).unwrap();
    assert_eq!(rows.len(), 8);

    // Drop the last three rows, rerun, and expect the same file back.
    let text = String::from_utf8(ta.clone()).unwrap();
    let kept: Vec<&str> = text.lines().take(1 + 5).collect();
    std::fs::write(&a, kept.join("\n") + "\n").unwrap();
    let o = lhp4d(&["simulate", ca.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).matches("skip (done)").count(), 5);
    assert_eq!(std::fs::read(&a).unwrap(), ta);

    // A second rerun changes nothing.
    assert!(lhp4d(&["simulate", ca.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), ta);
}

#[test]
fn bad_config_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", "[channel]\np = [1.5]\n");
    assert_eq!(lhp4d(&["simulate", cfg.to_str().unwrap()]).status.code(), Some(2));
    let cfg = write_config(dir.path(), "typo.toml", "[run]\ntrails = 3\n");
    assert_eq!(lhp4d(&["simulate", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(lhp4d(&["simulate", "/nonexistent/x.toml"]).status.code(), Some(3));
}
