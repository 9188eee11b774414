use std::path::Path;
use std::process::Command;

use hullattack::cli::{read_instance, read_json, write_json, ResultFile};
use hullattack::linalg::RatMatrix;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hullattack"))
}

fn run(args: &[&str]) -> i32 {
    bin().args(args).output().expect("binary runs").status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_attack_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (k, n, m) in [(3u64, 8usize, 3usize), (5, 6, 2), (6, 6, 3), (2, 5, 2)] {
        let inst = dir.path().join(format!("k{k}.json"));
        let res = dir.path().join(format!("k{k}.result.json"));
        let (ks, ns, ms) = (k.to_string(), n.to_string(), m.to_string());
        assert_eq!(run(&["gen", "--k", &ks, "--n", &ns, "--m", &ms, "--seed", "1", "--out", p(&inst)]), 0);
        assert_eq!(run(&["attack", "--in", p(&inst), "--out", p(&res)]), 0, "k = {k}");
        assert_eq!(run(&["verify", "--instance", p(&inst), "--result", p(&res)]), 0);
        let r: ResultFile = read_json(&res).unwrap();
        assert!(r.verified);
        let text = std::fs::read_to_string(&res).unwrap();
        let back: ResultFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn gen_is_byte_identical_and_refuses_bad_moduli() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        assert_eq!(run(&["gen", "--k", "3", "--n", "8", "--m", "3", "--seed", "1", "--out", p(out)]), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(read_instance(&a).unwrap().secret_consistent(), Some(true));
    let out = bin().args(["gen", "--k", "12", "--n", "4", "--m", "2", "--out", p(&b)]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BadModulus"));
}

#[test]
fn override_matches_recovery() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.json");
    let (r1, r2) = (dir.path().join("auto.json"), dir.path().join("fixed.json"));
    assert_eq!(run(&["gen", "--k", "5", "--n", "6", "--m", "2", "--seed", "4", "--out", p(&inst)]), 0);
    assert_eq!(run(&["attack", "--in", p(&inst), "--out", p(&r1)]), 0);
    assert_eq!(run(&["attack", "--in", p(&inst), "--out", p(&r2), "--k", "5"]), 0);
    let (a, b): (ResultFile, ResultFile) = (read_json(&r1).unwrap(), read_json(&r2).unwrap());
    assert_eq!(a.o_star, b.o_star);
}

#[test]
fn verify_rejects_identity_and_bad_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.json");
    let res = dir.path().join("r.json");
    assert_eq!(run(&["gen", "--k", "3", "--n", "6", "--m", "2", "--seed", "2", "--out", p(&inst)]), 0);
    assert_eq!(run(&["attack", "--in", p(&inst), "--out", p(&res)]), 0);
    let mut r: ResultFile = read_json(&res).unwrap();
    r.o_star = RatMatrix::identity(6);
    let fake = dir.path().join("identity.json");
    write_json(&fake, &r).unwrap();
    assert_eq!(run(&["verify", "--instance", p(&inst), "--result", p(&fake)]), 4);
    r.o_star = RatMatrix::identity(5);
    write_json(&fake, &r).unwrap();
    assert_eq!(run(&["verify", "--instance", p(&inst), "--result", p(&fake)]), 2);
    std::fs::write(&fake, "{ not json").unwrap();
    assert_eq!(run(&["verify", "--instance", p(&inst), "--result", p(&fake)]), 2);
}

#[test]
fn attack_failure_writes_an_error_record() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/adversarial/nonlcd_z2_self_dual.json");
    let out = dir.path().join("err.json");
    assert_eq!(run(&["attack", "--in", p(&fixture), "--out", p(&out)]), 3);
    let v: serde_json::Value = read_json(&out).unwrap();
    assert_eq!(v["error"]["kind"], "HullNotTrivial");
    assert!(v["transcript"].is_array());
}

#[test]
fn batch_runs_in_parallel() {
    let dir = tempfile::tempdir().unwrap();
    let mut inputs = Vec::new();
    for seed in 0..4 {
        let inst = dir.path().join(format!("i{seed}.json"));
        let s = seed.to_string();
        assert_eq!(run(&["gen", "--k", "10", "--n", "5", "--m", "2", "--seed", &s, "--out", p(&inst)]), 0);
        inputs.push(inst);
    }
    let out_dir = dir.path().join("out");
    let mut args = vec!["batch", "--out-dir", p(&out_dir), "--jobs", "3"];
    args.extend(inputs.iter().map(|i| p(i)));
    assert_eq!(run(&args), 0);
    for seed in 0..4 {
        let r: ResultFile = read_json(&out_dir.join(format!("i{seed}.result.json"))).unwrap();
        assert!(r.verified);
    }
}

#[test]
fn selftest_quick_passes() {
    let out = bin().args(["selftest", "--level", "quick"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
