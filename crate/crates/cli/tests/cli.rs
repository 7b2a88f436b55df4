use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use moments_core::disc::{enumerate_fundamental, Sign};

fn gi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gi")).args(args).env_remove("GI_OUTPUT_DIR").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn csv(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path).unwrap().lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn group_reports() {
    let dir = tempfile::tempdir().unwrap();
    for (preset, count) in [("q8", "1"), ("c12", "1"), ("d4", "1")] {
        let out = dir.path().join(format!("{preset}.csv"));
        let o = gi(&["group", "--preset", preset, "--output", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(csv(&out)[0][3], count);
    }
    let out = dir.path().join("a5.csv");
    assert_eq!(code(&gi(&["group", "--preset", "a5", "--output", out.to_str().unwrap()])), 0);
    assert!(csv(&out)[0][3].parse::<u32>().unwrap() >= 2);
    assert_eq!(code(&gi(&["group", "--preset", "s6"])), 2, "order 720 is over the automorphism cap");
    assert_eq!(code(&gi(&["group", "--preset", "x9"])), 2);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gi"))
        .args(["lfunc", "--disc", "-4", "--prec", "1e-6"])
        .env("GI_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let rows = csv(&dir.path().join("lfunc.csv"));
    let v: f64 = rows[0][2].parse().unwrap();
    assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-6);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# sieve defaults\ngroup = q8\nsign = neg\nx_max = 5000\n").unwrap();
    let out = dir.path().join("s.csv");
    let o = gi(&["sieve", "--config", cfg.to_str().unwrap(), "--x-max", "100", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(csv(&out)[0][0], "100");
    fs::write(&cfg, "unknown_key = 3\n").unwrap();
    assert_eq!(
        code(&gi(&["sieve", "--config", cfg.to_str().unwrap(), "--group", "q8", "--sign", "neg", "--x-max", "100"])),
        2
    );
}

#[test]
fn sieve_field_counts_match_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    for (sign, flag) in [(Sign::Negative, "neg"), (Sign::Positive, "pos")] {
        for group in ["q8", "d4"] {
            let out = dir.path().join(format!("{group}{flag}.csv"));
            let o =
                gi(&["sieve", "--group", group, "--sign", flag, "--x-max", "100", "--output", out.to_str().unwrap()]);
            assert_eq!(code(&o), 0);
            let brute = enumerate_fundamental(100, sign).count().to_string();
            assert_eq!(csv(&out)[0][2], brute);
        }
    }
}

#[test]
fn sieve_resume_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "sieve",
        "--group",
        "q8",
        "--sign",
        "neg",
        "--x-max",
        "300000",
        "--checkpoints",
        "1e4,1e5",
        "--shard-size",
        "20000",
    ];
    let full = dir.path().join("full.csv");
    let mut args = base.to_vec();
    args.extend(["--output", full.to_str().unwrap(), "--workers", "1"]);
    assert_eq!(code(&gi(&args)), 0);

    let resumed = dir.path().join("resumed.csv");
    let ckpt = dir.path().join("resumed.csv.ckpt");
    let mut args = base.to_vec();
    args.extend(["--output", resumed.to_str().unwrap(), "--workers", "3"]);
    let mut interrupted = args.clone();
    interrupted.extend(["--max-shards", "4"]);
    assert_eq!(code(&gi(&interrupted)), 2);
    assert!(ckpt.exists() && !resumed.exists());
    assert_eq!(code(&gi(&interrupted)), 2);
    assert_eq!(code(&gi(&args)), 0);
    assert!(!ckpt.exists());
    assert_eq!(fs::read(&full).unwrap(), fs::read(&resumed).unwrap());

    let rows = csv(&full);
    let moments: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(moments.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn checkpoint_from_other_config_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = out.to_str().unwrap();
    let run = |x: &str, extra: &[&str]| {
        let mut a =
            vec!["sieve", "--group", "d4", "--sign", "pos", "--x-max", x, "--shard-size", "1000", "--output", o];
        a.extend(extra);
        code(&gi(&a))
    };
    assert_eq!(run("20000", &["--max-shards", "2"]), 2);
    assert_eq!(run("30000", &[]), 2);
    assert_eq!(run("20000", &[]), 0);
}

#[test]
fn gh_resume_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.csv");
    let part = dir.path().join("part.csv");
    let base = ["gh", "--n", "20000", "--checkpoints", "1000,10000", "--shard-size", "2000"];
    let mut a = base.to_vec();
    a.extend(["--output", full.to_str().unwrap()]);
    assert_eq!(code(&gi(&a)), 0);
    let mut b = base.to_vec();
    b.extend(["--output", part.to_str().unwrap(), "--workers", "2"]);
    let mut stop = b.clone();
    stop.extend(["--max-shards", "3"]);
    assert_eq!(code(&gi(&stop)), 2);
    assert_eq!(code(&gi(&b)), 0);
    assert_eq!(fs::read(&full).unwrap(), fs::read(&part).unwrap());
    assert_eq!(csv(&full).len(), 3);
}

#[test]
fn affine_scan_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    // (9, 2) is the first row where the search finds two extensions
    let o = gi(&["affine-scan", "--max-qd", "17", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv(&out);
    assert!(rows.iter().all(|r| r[4] == "true"));
    assert!(rows.iter().any(|r| r[..4] == ["4", "3", "1", "1"]));
    assert!(rows.iter().any(|r| r[..4] == ["5", "2", "1", "1"]));
    let o = gi(&["affine-scan", "--max-qd", "18", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(csv(&out).iter().any(|r| r[..] == ["9", "2", "1", "2", "false"]));
    assert_eq!(code(&gi(&["affine-scan", "--max-qd", "301"])), 2);
}

#[test]
fn residue_and_density_exit_status() {
    let derived = gi(&[
        "residue", "--d1", "-3", "--d2", "13", "--sign", "neg", "--x", "3e5", "--cutoff", "1e5", "--form", "derived",
    ]);
    assert_eq!(code(&derived), 0, "{}", String::from_utf8_lossy(&derived.stderr));
    let line = String::from_utf8(derived.stdout).unwrap();
    assert!(line.starts_with("d1,d2,sign,X,empirical,predicted,ratio\n-3,13,neg,300000,"));
    let printed = gi(&["residue", "--d1", "-3", "--d2", "13", "--sign", "neg", "--x", "3e5", "--cutoff", "1e5"]);
    assert_eq!(code(&printed), 1);
    assert_eq!(code(&gi(&["residue", "--d1", "3", "--d2", "13", "--sign", "neg", "--x", "3e5"])), 2);
    assert_eq!(code(&gi(&["residue", "--d1", "-3", "--d2", "13", "--sign", "neg", "--x", "1000"])), 2);
    let d = gi(&["density", "--d", "-3", "--xmax", "1e5", "--tolerance", "1"]);
    assert_eq!(code(&d), 0);
}

#[test]
fn restricted_sum_is_exact() {
    let o = gi(&["restricted", "--d1", "-3", "--d2", "13", "--sign", "neg", "--x", "2379"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "d1,d2,sign,X,sum\n-3,13,neg,2379,1/2\n");
}
