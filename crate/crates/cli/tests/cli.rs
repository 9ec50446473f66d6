//! Black-box tests of the `jau` binary.

use std::path::Path;
use std::process::{Command, Output};

fn jau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jau"))
        .args(args)
        .env_remove("JAU_THREADS")
        .output()
        .expect("binary runs")
}

const SMALL: [&str; 8] = [
    "--textures", "2", "--texture-size", "48", "--signals", "300", "--dict-size", "24",
];

fn train(extra: &[&str], dir: &Path, tag: &str) -> (Output, String) {
    let trace = dir.join(format!("{tag}.csv"));
    let dict = dir.join(format!("{tag}.jaud"));
    let mut args = vec!["train", "--sparsity", "3", "--iters", "4", "--no-timings"];
    args.extend_from_slice(&SMALL);
    args.extend_from_slice(extra);
    let (t, d) = (trace.to_str().unwrap().to_owned(), dict.to_str().unwrap().to_owned());
    args.extend_from_slice(&["--out-trace", &t, "--out-dict", &d]);
    let out = jau(&args);
    let csv = std::fs::read_to_string(&trace).unwrap_or_default();
    (out, csv)
}

#[test]
fn train_writes_trace_dictionary_and_rmse() {
    let dir = tempfile::tempdir().unwrap();
    let (out, csv) = train(&["--algo", "sgk", "--group-size", "full"], dir.path(), "a");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let line = stdout.lines().find(|l| l.starts_with("rmse=")).unwrap();
    let value: f64 = line["rmse=".len()..].parse().unwrap();
    assert!(value > 0.0 && value < 1.0);
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(csv.lines().next(), Some("iteration,rmse,coding_seconds,update_seconds"));
    let last: f64 = csv.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(last.to_bits(), value.to_bits());
    let dict = std::fs::read(dir.path().join("a.jaud")).unwrap();
    assert_eq!(dict.len(), 14 + 8 * 64 * 24);
}

#[test]
fn group_size_one_is_the_sequential_default() {
    let dir = tempfile::tempdir().unwrap();
    let (_, explicit) = train(&["--algo", "aksvd", "--group-size", "1"], dir.path(), "one");
    let (_, default) = train(&["--algo", "aksvd"], dir.path(), "def");
    assert!(!explicit.is_empty());
    assert_eq!(explicit, default);
}

#[test]
fn thread_count_comes_from_environment_and_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let (_, one) = train(&["--algo", "nsgk", "--group-size", "5", "--threads", "1"], dir.path(), "t1");
    let out = Command::new(env!("CARGO_BIN_EXE_jau"))
        .args(["train", "--algo", "nsgk", "--group-size", "5", "--sparsity", "3", "--iters", "4", "--no-timings"])
        .args(SMALL)
        .args(["--out-trace", dir.path().join("t4.csv").to_str().unwrap()])
        .env("JAU_THREADS", "4")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(one, std::fs::read_to_string(dir.path().join("t4.csv")).unwrap());
}

#[test]
fn configuration_errors_exit_with_two() {
    let cases: [&[&str]; 5] = [
        &["train", "--algo", "ksvd"],
        &["train", "--algo", "mod", "--group-size", "4"],
        &["train", "--algo", "sgk", "--group-size", "0"],
        &["sweep", "--axis", "n", "--values", "512:128:64"],
        &["sweep", "--axis", "q", "--values", "1:2:1"],
    ];
    for args in cases {
        let out = jau(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = jau(&["train", "--algo", "sgk", "--sparsity", "100", "--textures", "1", "--texture-size", "16", "--signals", "50", "--dict-size", "8", "--iters", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_or_malformed_inputs_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pgm");
    std::fs::write(&bad, b"P5 4 4 255\n\x01\x02").unwrap();
    for path in [dir.path().join("absent.pgm"), bad] {
        let out = jau(&["train", "--algo", "sgk", "--images", path.to_str().unwrap(), "--signals", "10", "--dict-size", "4", "--iters", "1"]);
        assert_eq!(out.status.code(), Some(3));
    }
    let out = jau(&["train", "--algo", "sgk", "--patches", dir.path().join("none.jaud").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn train_reads_pgm_images_and_signal_files() {
    let dir = tempfile::tempdir().unwrap();
    let img = jau_core::io::synthetic::texture_image(32, jau_core::Seed(1));
    let pgm = dir.path().join("img.pgm");
    jau_core::io::save_pgm(&img, &pgm).unwrap();
    let out = jau(&["train", "--algo", "mod", "--images", pgm.to_str().unwrap(), "--signals", "200", "--dict-size", "16", "--sparsity", "2", "--iters", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let y: jau_core::SignalSetF64 = jau_core::io::extract_patches(&[img], 120, Default::default(), jau_core::Seed(2)).unwrap();
    let sig = dir.path().join("y.jaud");
    jau_core::io::save_signals(&y, &sig).unwrap();
    let out = jau(&["train", "--algo", "sgk", "--group-size", "full", "--patches", sig.to_str().unwrap(), "--dict-size", "16", "--sparsity", "2", "--iters", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = jau(&["train", "--algo", "sgk", "--patches", sig.to_str().unwrap(), "--signals", "500", "--dict-size", "16", "--iters", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn recover_writes_table_and_accepts_negative_snr() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let out = jau(&[
        "recover", "--sparsity", "2", "--snr", "-5", "--runs", "1", "--algos", "sgk,p-sgk",
        "--dim", "8", "--atoms", "12", "--signals", "100", "--iters", "3",
        "--out-csv", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "algo,s,snr_db,mean_recovery_pct,std_pct,runs");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("sgk,2,") && lines[1].ends_with(",1"));
    let std: f64 = lines[1].split(',').nth(4).unwrap().parse().unwrap();
    assert_eq!(std, 0.0);
}

#[test]
fn sweep_and_bench_print_tables() {
    let out = jau(&[
        "sweep", "--axis", "m", "--values", "100:200:100", "--dict-size", "12", "--sparsity", "2",
        "--iters", "2", "--algos", "sgk,p-sgk", "--textures", "1", "--texture-size", "32", "--no-timings",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(1).unwrap().starts_with("m,100,sgk,"));

    let out = jau(&[
        "bench", "--signals", "200", "--dict-size", "16", "--iters", "1", "--threads", "2",
        "--textures", "1", "--texture-size", "32",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
}
