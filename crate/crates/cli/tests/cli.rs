use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn aldc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aldc")).args(args).current_dir(dir).output().expect("spawn aldc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn message_bits(bytes: &[u8], l: usize, r: usize) -> String {
    bytes.iter().map(|b| format!("{b:08b}")).collect::<String>()[l - 1..r].to_string()
}

#[test]
fn bound_table_prints_printed_column() {
    let dir = tempfile::tempdir().unwrap();
    let o = aldc(&["bound-table", "--A", "2000", "--delta-code", "0.1", "--delta", "0.05"], dir.path());
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let printed: f64 = row.split('\t').nth(3).unwrap().parse().unwrap();
    assert!((printed - 9.8e-4).abs() < 1e-5, "{row}");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(aldc(&["bench", "--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(aldc(&["bench", "--codec", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(aldc(&["bound-table", "--A", "512", "--delta-code", "0.01", "--delta", "0.05"], dir.path()).status.code(), Some(2));
    assert_eq!(aldc(&["paldc", "decode", "--key", "missing", "--codeword", "x", "--interval", "1:2"], dir.path()).status.code(), Some(2));
}

#[test]
fn hadamard_demo_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = aldc(&["hadamard-demo", "--k", "10", "--kappa", "3", "--delta", "0.02", "--trials", "500", "--seed", "4"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("trial,queries,success"));
    assert_eq!(lines.count(), 500);
    assert!(String::from_utf8_lossy(&o.stderr).contains("failure rate"));
    let again = aldc(&["hadamard-demo", "--k", "10", "--kappa", "3", "--delta", "0.02", "--trials", "500", "--seed", "4"], dir.path());
    assert_eq!(out, stdout(&again));
}

#[test]
fn onetime_roundtrip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let msg: Vec<u8> = (0..256u32).map(|i| (i * 37 % 251) as u8).collect();
    fs::write(dir.path().join("msg.bin"), &msg).unwrap();
    let p = dir.path();
    assert!(aldc(&["paldc", "keygen", "--codec", "onetime", "--k", "2048", "--seed", "3", "--out", "k.bin"], p).status.success());
    assert!(aldc(&["paldc", "encode", "--key", "k.bin", "--input", "msg.bin", "--delta", "0.01", "--out", "c.bin"], p).status.success());
    let again = aldc(&["paldc", "encode", "--key", "k.bin", "--input", "msg.bin", "--out", "c2.bin"], p);
    assert_eq!(again.status.code(), Some(2), "one-time key encoded twice");
    let o = aldc(&["paldc", "decode", "--key", "k.bin", "--codeword", "c.bin", "--interval", "100:355"], p);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), message_bits(&msg, 100, 355));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1024 queries"));
}

#[test]
fn multiround_roundtrip_and_codec_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let msg = vec![0xA5u8; 256];
    fs::write(p.join("msg.bin"), &msg).unwrap();
    assert!(aldc(&["paldc", "keygen", "--codec", "multiround", "--k", "1024", "--rounds", "10", "--out", "mr.key"], p).status.success());
    assert!(aldc(&["paldc", "keygen", "--codec", "onetime", "--k", "1024", "--out", "ot.key"], p).status.success());
    assert!(aldc(&["paldc", "encode", "--key", "mr.key", "--input", "msg.bin", "--seed", "9", "--out", "c.bin"], p).status.success());
    let o = aldc(&["paldc", "decode", "--key", "mr.key", "--codeword", "c.bin", "--interval", "513:1024"], p);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), message_bits(&msg, 513, 1024));
    let o = aldc(&["paldc", "decode", "--key", "ot.key", "--codeword", "c.bin", "--interval", "1:256"], p);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rbldc_roundtrip_reports_squarings() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let msg: Vec<u8> = (0..512u32).map(|i| (i ^ 0x5c) as u8).collect();
    fs::write(p.join("msg.bin"), &msg).unwrap();
    let enc = ["rbldc", "encode", "--input", "msg.bin", "--k", "4096", "--puzzle-t", "200", "--seed", "5", "--out", "rb.bin"];
    assert!(aldc(&enc, p).status.success());
    let o = aldc(&["rbldc", "decode", "--codeword", "rb.bin", "--interval", "1:256", "--puzzle-t", "200"], p);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), message_bits(&msg, 1, 256));
    assert!(String::from_utf8_lossy(&o.stderr).contains("200 squarings"));
    let o = aldc(&["rbldc", "decode", "--codeword", "rb.bin", "--interval", "1:256", "--puzzle-t", "201"], p);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rse_test_and_games_pass() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let o = aldc(&["rse", "test", "--trials", "300", "--key-out", "rse.key"], p);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0/300 failures"));
    assert!(fs::metadata(p.join("rse.key")).unwrap().len() > 0);
    let o = aldc(&["game", "rse", "--samples", "2000", "--null"], p);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = aldc(&["game", "paldc", "--codec", "onetime", "--k", "1024", "--a", "256", "--rounds", "8", "--delta", "0.01"], p);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("\"adversary_wins\": false"));
}

#[test]
fn bench_csv_identical_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let base = ["bench", "--codec", "multiround", "--delta", "0.02", "--trials", "12", "--seed", "7"];
    let one = aldc(&[&base[..], &["--jobs", "1", "--out", "a.csv", "--summary", "a.json"]].concat(), p);
    let four = aldc(&[&base[..], &["--jobs", "4", "--out", "b.csv", "--summary", "b.json"]].concat(), p);
    assert!(one.status.success() && four.status.success());
    let a = fs::read(p.join("a.csv")).unwrap();
    assert_eq!(a, fs::read(p.join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("codec,k,n,delta,kappa,trial,L,R,queries,success,seed\n"));
    // 4 aligned + 16 unaligned intervals per trial
    assert_eq!(text.lines().count(), 1 + 12 * 20);
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(p.join("a.json")).unwrap()).unwrap();
    assert_eq!(summary[0]["decodes"], 240);
}

#[test]
fn bench_config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("cfg.txt"), "codec = hadamard\ntrials = 9\nk = 8\n").unwrap();
    let o = aldc(&["bench", "--config", "cfg.txt", "--trials", "4"], p);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 4);
    assert!(out.lines().nth(1).unwrap().starts_with("hadamard,8,255,"));
    fs::write(p.join("bad.txt"), "codec = hadamard\nwidth = 3\n").unwrap();
    assert_eq!(aldc(&["bench", "--config", "bad.txt"], p).status.code(), Some(2));
}

#[test]
fn bench_suite_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let a = aldc(&["bench", "--suite", "--trials", "2", "--seed", "11", "--jobs", "1"], p);
    let b = aldc(&["bench", "--suite", "--trials", "2", "--seed", "11", "--jobs", "3"], p);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    for codec in ["hadamard", "onetime", "multiround", "rb"] {
        assert!(stdout(&a).lines().any(|l| l.starts_with(&format!("{codec},"))));
    }
}
