use std::path::Path;
use std::process::{Command, Output};

fn rts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rts")).args(args).output().unwrap()
}

fn body(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[test]
fn empty_scheme_list_is_a_usage_error() {
    let out = rts(&["sweep", "--scheme", "", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scheme"));
}

#[test]
fn bad_flag_values_fail() {
    for args in [
        &["sweep", "--delta", "1.2"][..],
        &["sweep", "--snr-db", "10:0:5"],
        &["sweep", "--trials", "0"],
        &["validate", "--scheme", "RTS"],
        &["compare", "--metric", "NZR"],
        &["point", "--k", "2,3"],
    ] {
        let out = rts(args);
        assert!(!out.status.success(), "{args:?}");
    }
}

#[test]
fn nzr_sweep_gives_expected_row_count() {
    let out = rts(&["sweep", "--metric", "NZR", "--trials", "100"]);
    assert!(out.status.success());
    let rows = body(&out);
    assert_eq!(
        rows[0],
        "snr_db,k,delta,scheme,mode,metric,analytic,asymptote,simulated,std_err,trials,seed,flags"
    );
    assert_eq!(rows.len() - 1, 2 * 2 * 13 * 2);
}

#[test]
fn compare_single_point_has_four_rows() {
    let out = rts(&["compare", "--snr-db", "30", "--trials", "1000"]);
    assert!(out.status.success());
    let rows = body(&out);
    assert_eq!(rows.len() - 1, 4);
    let schemes: Vec<&str> = rows[1..].iter().map(|r| r.split(',').nth(3).unwrap()).collect();
    assert_eq!(schemes, ["RTS", "TTS", "MIN-ES", "OPTIMAL"]);
    // analytic only for RTS
    assert!(rows[1].split(',').nth(6).unwrap().parse::<f64>().is_ok());
    assert_eq!(rows[2].split(',').nth(6).unwrap(), "");
}

#[test]
fn compare_check_passes_where_ordering_holds() {
    // at high SNR every scheme sits on the (1-Δ)^K floor
    let out = rts(&["compare", "--snr-db", "50,60", "--trials", "20000", "--check"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "# small run\nk = 2\ndelta = 0.5\nsnr-db = 10\ntrials = 500\nmode = available\n",
    )
    .unwrap();
    let out = rts(&["sweep", "--config", cfg.to_str().unwrap(), "--k", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("# k = 4\n") && text.contains("# delta = 0.5\n") && text.contains("# sigma-e-db = 10\n"));
    for row in &body(&out)[1..] {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!((f[0], f[1], f[2], f[4], f[10]), ("10", "4", "0.5", "available", "500"));
    }
}

#[test]
fn config_errors_point_at_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "k = 3\ncolour = blue\n").unwrap();
    let out = rts(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.conf:2") && err.contains("colour"), "{err}");
}

#[test]
fn out_flag_writes_file_identical_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.csv");
    let args = [
        "sweep", "--k", "2", "--delta", "0.5", "--snr-db", "0:20:10", "--trials", "3000",
    ];
    let stdout = rts(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(rts(&with_out).status.success());
    assert_eq!(std::fs::read(Path::new(&path)).unwrap(), stdout);
}

#[test]
fn validate_check_accepts_documented_deviations() {
    let out = rts(&[
        "validate", "--k", "1:3", "--delta", "0,0.5", "--snr-db", "0,40", "--trials", "2000", "--check",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("# undocumented = 0"));
    assert!(text.contains("MISMATCH") && text.contains("nzr-unavailable-k1"));
}

#[test]
fn point_lists_every_source() {
    let out = rts(&[
        "point", "--k", "3", "--delta", "0.9", "--snr-db", "20", "--trials", "5000",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for source in ["closed_form", "oracle", "asymptote", "simulated"] {
        assert!(text.contains(source));
    }
    assert!(text.contains("nzr-available-k3plus"));
}
