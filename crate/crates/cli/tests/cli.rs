use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use ussr_core::text::{read_advice, read_instance, read_uussr};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ussr(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ussr").chain(args.iter().copied());
    let code = ussr_cli::run(argv, &mut out, &mut err);
    Out { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decompose_prints_factorization() {
    assert_eq!(ussr(&["decompose", "12"]).stdout, "12 = 2^2 * 3\n");
    assert_eq!(ussr(&["decompose", "18"]).stdout, "18 = 3^2 * 2\n");
    assert_eq!(ussr(&["decompose", "0"]).code, 3);
}

#[test]
fn sign_of_both_file_kinds() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", "UUSSR v1\nk 5\ndelta 0 1 1 -1\n");
    let r = ussr(&["sign", "--in", s(&a)]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "+1\n"));
    let b = file(&dir, "b.txt", "USSR v1\nk 3\nterms +2 -3\n");
    assert_eq!(ussr(&["sign", "--in", s(&b)]).stdout, "-1\n");
    let z = file(&dir, "z.txt", "USSR v1\nk 18\nterms +8 +2 -18\n");
    assert_eq!(ussr(&["sign", "--in", s(&z)]).stdout, "0\n");
    assert_eq!(ussr(&["zero", "--in", s(&z)]).stdout, "true\n");
    assert_eq!(ussr(&["zero", "--in", s(&b)]).stdout, "false\n");
}

#[test]
fn normalize_writes_a_readable_file() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", "USSR v1\nk 4\nterms +4 -1 -2 +3\n");
    let out = dir.path().join("n.txt");
    assert_eq!(ussr(&["normalize", "--in", s(&a), "--out", s(&out)]).code, 0);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text, "UUSSR v1\nk 4\ndelta 1 -1 1\n");
    assert_eq!(read_uussr(&text).unwrap().delta(), &[1, -1, 1]);
}

#[test]
fn synth_then_verify_each_method() {
    let dir = TempDir::new().unwrap();
    for method in ["ltf-round", "ltf-lp", "basis"] {
        let adv = dir.path().join(format!("{method}.txt"));
        let rep = dir.path().join(format!("{method}.csv"));
        assert_eq!(ussr(&["synth", "--k", "3", "--B", "1", "--method", method, "--out", s(&adv)]).code, 0);
        let text = fs::read_to_string(&adv).unwrap();
        assert_eq!(ussr_core::text::write_advice(&read_advice(&text).unwrap()), text);
        let r = ussr(&["verify", "--advice", s(&adv), "--exhaustive", "--report", s(&rep)]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert!(r.stdout.starts_with("27/27 agree"), "{}", r.stdout);
        let report = fs::read_to_string(&rep).unwrap();
        let record = report.lines().find(|l| !l.starts_with('#')).unwrap();
        assert!(record.starts_with("3,1,"), "{record}");
        assert!(record.contains(",exhaustive,27,27,0,"), "{record}");
        assert!(record.ends_with(",verified"));
    }
    let round = fs::read_to_string(dir.path().join("ltf-round.txt")).unwrap();
    assert!(round.contains("weights 19 27 33\n"));
}

#[test]
fn basis_synth_with_inverse_round_trips() {
    let dir = TempDir::new().unwrap();
    let adv = dir.path().join("b.txt");
    let r = ussr(&["synth", "--k", "2", "--B", "2", "--method", "basis", "--inverse", "--out", s(&adv)]);
    assert_eq!(r.code, 0);
    let text = fs::read_to_string(&adv).unwrap();
    assert!(text.contains("\ninverse "));
    assert_eq!(ussr_core::text::write_advice(&read_advice(&text).unwrap()), text);
    let inst = file(&dir, "i.txt", "UUSSR v1\nk 2\ndelta 2 -1\n");
    assert_eq!(ussr(&["decide", "--in", s(&inst), "--advice", s(&adv)]).stdout, "+1\n");
}

#[test]
fn sampled_verification() {
    let dir = TempDir::new().unwrap();
    let adv = dir.path().join("a.txt");
    ussr(&["synth", "--k", "5", "--B", "1", "--method", "ltf-round", "--out", s(&adv)]);
    let rep = dir.path().join("r.csv");
    let r = ussr(&["verify", "--advice", s(&adv), "--samples", "0", "--seed", "9", "--report", s(&rep)]);
    assert_eq!(r.code, 0);
    let report = fs::read_to_string(&rep).unwrap();
    assert!(report.contains("non-exhaustive"));
    assert!(report.contains("\n5,1,ltf,round,sampled,0,0,0,0,0,verified\n"));
    let again = dir.path().join("r2.csv");
    ussr(&["verify", "--advice", s(&adv), "--samples", "40", "--seed", "9", "--report", s(&rep)]);
    ussr(&["verify", "--advice", s(&adv), "--samples", "40", "--seed", "9", "--report", s(&again)]);
    assert_eq!(fs::read_to_string(&rep).unwrap(), fs::read_to_string(&again).unwrap());
}

#[test]
fn wrong_advice_is_reported_as_disagreement() {
    let dir = TempDir::new().unwrap();
    let adv = file(&dir, "bad.txt", "ADVICE v1\nkind ltf\nk 3\nB 1\nmethod round\nweights 10 14 13\n");
    let rep = dir.path().join("r.csv");
    let r = ussr(&["verify", "--advice", s(&adv), "--report", s(&rep)]);
    assert_eq!(r.code, 1);
    let report = fs::read_to_string(&rep).unwrap();
    assert!(report.contains(",disagreement\n"));
    assert!(report.contains("# disagree: "));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.txt", "USSR v1\nk 3\nterms +2 -7\n");
    let r = ussr(&["sign", "--in", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    assert_eq!(ussr(&["sign", "--in", s(&dir.path().join("missing"))]).code, 2);
    assert_eq!(ussr(&["frobnicate"]).code, 2);
    assert_eq!(ussr(&["min-gap", "--k", "3", "--B", "0"]).code, 3);
    assert_eq!(ussr(&["synth", "--k", "3", "--B", "1", "--method", "magic", "--out", "x"]).code, 2);
    let hard = file(&dir, "hard.txt", "UUSSR v1\nk 3\ndelta 0 -1 1\n");
    assert_eq!(ussr(&["sign", "--in", s(&hard), "--max-bits", "1"]).code, 4);
    assert_eq!(ussr(&["synth", "--k", "40", "--B", "9", "--method", "basis", "--out", "x"]).code, 4);
    let adv = dir.path().join("a.txt");
    ussr(&["synth", "--k", "3", "--B", "1", "--method", "ltf-lp", "--out", s(&adv)]);
    let far = file(&dir, "far.txt", "UUSSR v1\nk 3\ndelta 2 0 0\n");
    assert_eq!(ussr(&["decide", "--in", s(&far), "--advice", s(&adv)]).code, 3);
    assert_eq!(ussr(&["--help"]).code, 0);
}

#[test]
fn min_gap_output() {
    let r = ussr(&["min-gap", "--k", "3", "--B", "1"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("~ 0.317837245"), "{}", r.stdout);
    assert!(r.stdout.ends_with("witness 0 -1 1\n"));
}

#[test]
fn gen_and_bench() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    assert_eq!(ussr(&["gen", "--family", "alternating-primes", "--k", "10", "--out", s(&g)]).code, 0);
    assert_eq!(fs::read_to_string(&g).unwrap(), "USSR v1\nk 10\nterms +2 -3 +5 -7\n");
    assert!(read_instance(&fs::read_to_string(&g).unwrap()).is_ok());

    let b = dir.path().join("b.csv");
    assert_eq!(ussr(&["bench", "--family", "primes", "--k-max", "10", "--out", s(&b)]).code, 0);
    let text = fs::read_to_string(&b).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    let ks: Vec<&str> = rows.iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    assert_eq!(ks, ["2", "3", "5", "7", "10"]);
    assert!(rows.iter().all(|r| r.ends_with(",+1")));
    assert!(text.contains("# family,k,terms,bits_used,certified_bits,sign\n"));

    let r1 = dir.path().join("r1.csv");
    let r2 = dir.path().join("r2.csv");
    ussr(&["bench", "--family", "random", "--k-max", "8", "--seed", "4", "--out", s(&r1)]);
    ussr(&["bench", "--family", "random", "--k-max", "8", "--seed", "4", "--out", s(&r2)]);
    assert_eq!(fs::read_to_string(&r1).unwrap(), fs::read_to_string(&r2).unwrap());
    assert_eq!(ussr(&["bench", "--family", "squares", "--k-max", "3", "--out", s(&r1)]).code, 2);
}

#[test]
fn worker_count_does_not_change_reports() {
    use ussr_cli::{verify_advice, VerifyMode};
    let adv = ussr_core::Advice::Ltf(ussr_core::ltf::synth_round(&ussr_core::DomainSpec::new(5, 1).unwrap(), 1 << 20).unwrap());
    let one = verify_advice(&adv, VerifyMode::Exhaustive, 1).unwrap();
    let many = verify_advice(&adv, VerifyMode::Exhaustive, 7).unwrap();
    assert_eq!(one.to_csv(), many.to_csv());
    assert_eq!(one.total, 81);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_ussr")).args(["decompose", "12"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "12 = 2^2 * 3\n");
    let out = Command::new(env!("CARGO_BIN_EXE_ussr")).args(["decompose", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
