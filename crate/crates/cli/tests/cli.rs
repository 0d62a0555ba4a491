use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stablewave")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Every CHECK line has the form `CHECK <name> <PASS|FAIL> <value> <bound>`.
fn check_lines(out: &str) -> Vec<(String, String)> {
    out.lines()
        .filter(|l| l.starts_with("CHECK "))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            assert_eq!(f.len(), 5, "{l}");
            assert!(f[2] == "PASS" || f[2] == "FAIL", "{l}");
            f[3].parse::<f64>().unwrap();
            f[4].parse::<f64>().unwrap();
            (f[1].to_string(), f[2].to_string())
        })
        .collect()
}

#[test]
fn semigroup_check_passes() {
    let o = run(&["verify", "semigroup", "--d", "1", "--alpha", "0.3", "--beta", "0.4", "--n", "4096", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("seed=7"));
    assert_eq!(check_lines(&s), vec![("semigroup".to_string(), "PASS".to_string())]);
}

#[test]
fn every_check_prints_parsable_lines() {
    let cases: &[&[&str]] = &[
        &["verify", "parseval", "--seed", "1", "--n", "1024"],
        &["verify", "parseval", "--seed", "1", "--d", "2", "--n", "64"],
        &["verify", "scaling", "--seed", "1"],
        &["verify", "laplacian", "--seed", "1", "--gamma", "2.5"],
        &["verify", "kernel", "--seed", "1", "--gamma", "0.75"],
        &["verify", "t1", "--seed", "1", "--p", "1.6", "--s", "0.4", "--n", "512"],
        &["verify", "weighted", "--seed", "1", "--p", "1.5", "--n", "256"],
        &["verify", "ssbounds", "--seed", "1", "--gamma", "0.3", "--p", "1.5", "--n", "2048"],
    ];
    for args in cases {
        let o = run(args);
        let lines = check_lines(&stdout(&o));
        assert!(!lines.is_empty(), "{args:?}");
        assert!(lines.iter().all(|(_, v)| v == "PASS"), "{args:?}: {}", stdout(&o));
        assert_eq!(o.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn field_command_writes_reproducible_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.fsf");
    let b = dir.path().join("b.fsf");
    let pgm = dir.path().join("a.pgm");
    for (out, extra) in [(&a, Some(&pgm)), (&b, None)] {
        let mut args = vec!["field", "--d", "2", "--gamma", "1.1", "--p", "1.8", "--n", "256", "--seed", "1", "--out", path_str(out)];
        if let Some(p) = extra {
            args.extend(["--pgm", path_str(p)]);
        }
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).contains("seed=1"));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(bytes.starts_with(b"FSF1\nd=2\nshape=256,256\n"));
    let header_end = bytes.windows(2).position(|w| w == b"\n\n").unwrap() + 2;
    assert_eq!(bytes.len() - header_end, 8 * 256 * 256);
    let header = String::from_utf8_lossy(&bytes[..header_end]);
    for key in ["spacing=", "gamma=1.1", "p=1.8", "seed=1", "jmin=", "jmax=", "basis=db6"] {
        assert!(header.contains(key), "{key} missing from {header}");
    }
    let raster = std::fs::read(&pgm).unwrap();
    assert!(raster.starts_with(b"P5\n256 256\n65535\n"));

    let again = dir.path().join("c.pgm");
    let o = run(&["export-pgm", "--in", path_str(&a), "--out", path_str(&again)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&again).unwrap(), raster);
}

#[test]
fn window_violation_exits_two_and_names_inequality() {
    let o = run(&["pair", "--gamma", "0.9", "--p", "1.5", "--d", "1", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gamma <= d(1 - 1/p)"), "{}", stderr(&o));
    let o = run(&["field", "--d", "1", "--gamma", "0.4", "--p", "2", "--n", "256", "--seed", "1", "--out", "/nonexistent/x.fsf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gamma"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "semigroup", "--bogus", "1", "--seed", "1"]).status.code(), Some(2));
    // randomised commands insist on a seed
    assert_eq!(run(&["sample-stable", "--p", "1.5", "--n", "10"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "semigroup"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn sample_and_ks_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let xs = dir.path().join("xs.txt");
    let o = run(&["sample-stable", "--p", "1.5", "--n", "20000", "--seed", "5", "--out", path_str(&xs)]);
    assert_eq!(o.status.code(), Some(0));
    let o2 = run(&["sample-stable", "--p", "1.5", "--n", "20000", "--seed", "5"]);
    assert_eq!(stdout(&o), stdout(&o2));
    let o = run(&["ks", "--in", path_str(&xs), "--p", "1.5"]);
    assert_eq!(o.status.code(), Some(0));
    let ks: f64 = stdout(&o).split_whitespace().next().unwrap().trim_start_matches("ks=").parse().unwrap();
    assert!(ks < 1.36 / (20000f64).sqrt(), "{ks}");
}

#[test]
fn pair_draws_match_exact_scale() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("draws.txt");
    let o = run(&["pair", "--gamma", "0.3", "--p", "1.5", "--d", "1", "--seed", "2", "--draws", "20000", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    let ks: f64 = s.lines().find_map(|l| l.strip_prefix("ks=")).unwrap().parse().unwrap();
    assert!(ks < 0.015, "{s}");
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 20000);
}

#[test]
fn tails_report_residual_ladder() {
    let o = run(&["tails", "--gamma", "0.3", "--p", "1.5", "--d", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.starts_with("jmax=")).count(), 3);
    assert!(s.contains("decreasing=true"));
    let o = run(&["tails", "--gamma", "0.45", "--p", "1.5", "--d", "1", "--shape", "impulse"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["tails", "--gamma", "0.45", "--p", "1.5", "--d", "1", "--shape", "impulse", "--unsafe"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["tails", "--gamma", "0.3", "--p", "1.5", "--d", "1", "--ladder", "6,4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# semigroup check\nd=1\nn=1024\nalpha=0.2\nbeta=0.5\nseed=9\n").unwrap();
    let o = run(&["verify", "semigroup", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("seed=9"));
    let o = run(&["verify", "semigroup", "--config", path_str(&cfg), "--seed", "4"]);
    assert!(stdout(&o).contains("seed=4"));
    std::fs::write(&cfg, "not a pair\n").unwrap();
    let o = run(&["verify", "semigroup", "--seed", "1", "--config", path_str(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("key=value"));
}

#[test]
fn spectrum_and_hausdorff_read_stored_fields() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("y.fsf");
    let o = run(&["field", "--d", "1", "--gamma", "1.0", "--p", "2", "--n", "4096", "--seed", "3", "--out", path_str(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["spectrum", "--in", path_str(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let slope: f64 = stdout(&o).trim().trim_start_matches("slope=").parse().unwrap();
    assert!(slope < -1.0, "{slope}");
    let o = run(&["hausdorff", "--in", path_str(&f), "--rho", "0.5,1.0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("box_dimension=") && s.contains("bound=1.5") && s.contains("energy(rho=1)="), "{s}");

    let bad = dir.path().join("bad.fsf");
    std::fs::write(&bad, b"FSF1\nd=1\nshape=4\nspacing=0.25\n\n\0\0\0").unwrap();
    let o = run(&["spectrum", "--in", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("short payload"), "{}", stderr(&o));
}
