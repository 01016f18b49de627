use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dvpp_sfc::output::read_csv;
use dvpp_sfc::SimConfig;

fn bin(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvpp-sfc"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn export(name: &str, dir: &Path) -> SimConfig {
    let path = dir.join(format!("{name}.toml"));
    let out = bin(
        &["scenario", "export", name, "-o", path.to_str().unwrap()],
        dir,
    );
    assert!(out.status.success());
    SimConfig::load(&path).unwrap()
}

#[test]
fn scenario_list_names_all_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["scenario", "list"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["nominal", "wt2-trip", "two-area", "short-circuit"] {
        assert!(text.contains(name), "{text}");
    }
}

#[test]
fn nominal_run_writes_one_csv_and_five_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(
        &["run", "nominal", "--duration", "50", "--out-dir", "o"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let o = dir.path().join("o");
    let csvs: Vec<_> = fs::read_dir(&o)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "csv"))
        .collect();
    assert_eq!(csvs.len(), 1);
    let mut plots: Vec<String> = fs::read_dir(o.join("plots"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    plots.sort();
    assert_eq!(
        plots,
        [
            "nominal_ace.svg",
            "nominal_frequency.svg",
            "nominal_powers.svg",
            "nominal_tie_line.svg",
            "nominal_voltage.svg"
        ]
    );
}

#[test]
fn exported_config_reproduces_bit_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    export("wt2-trip", dir.path());
    let a = bin(
        &["run", "wt2-trip", "--duration", "90", "--out-dir", "a"],
        dir.path(),
    );
    let b = bin(
        &["run", "wt2-trip.toml", "--duration", "90", "--out-dir", "b"],
        dir.path(),
    );
    assert!(a.status.success() && b.status.success());
    let ca = fs::read(dir.path().join("a/wt2-trip.csv")).unwrap();
    let cb = fs::read(dir.path().join("b/wt2-trip.csv")).unwrap();
    assert!(!ca.is_empty());
    assert_eq!(ca, cb);
}

#[test]
fn csv_is_well_formed_and_decimated() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = export("two-area", dir.path());
    cfg.duration = 5.0;
    cfg.output.decimation = 10;
    cfg.save(dir.path().join("dec.toml")).unwrap();
    let out = bin(&["run", "dec.toml", "--out-dir", "o"], dir.path());
    assert!(out.status.success());

    let path = dir.path().join("o/two-area.csv");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t [s],area1.df [Hz],"));
    assert!(!text.contains('\r'));
    let s = read_csv(&path).unwrap();
    assert_eq!(s.len(), 50);
    let t = s.times();
    for w in t.windows(2) {
        assert!((w[1] - w[0] - 0.1).abs() < 1e-9);
    }
    assert!(s.rows.iter().all(|r| r.len() == s.channels.len()));
}

#[test]
fn three_phase_waveform_has_constant_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = export("nominal", dir.path());
    cfg.duration = 45.0;
    cfg.output.three_phase = true;
    cfg.output.decimation = 100;
    cfg.save(dir.path().join("tp.toml")).unwrap();
    let out = bin(&["run", "tp.toml", "--out-dir", "o"], dir.path());
    assert!(out.status.success());

    let s = read_csv(&dir.path().join("o/nominal_three_phase.csv")).unwrap();
    assert_eq!(s.len(), 4500);
    assert_eq!(s.channels[1].name, "area1.va");
    for row in &s.rows {
        for area in 0..2 {
            let (a, b, c) = (row[1 + 3 * area], row[2 + 3 * area], row[3 + 3 * area]);
            let amp = ((a * a + b * b + c * c) / 1.5).sqrt();
            assert!(
                (amp - 1.0).abs() < 1e-9,
                "amplitude {amp} at t = {}",
                row[0]
            );
        }
    }
}

#[test]
fn summarize_reads_back_a_run() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bin(&["run", "nominal", "--out-dir", "o"], dir.path())
        .status
        .success());
    let out = bin(
        &["summarize", "o/nominal.csv", "--event-times", "40"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("classic total  +5.4"), "{text}");
    assert!(text.contains("max |ACE| after 40.00 s"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = export("nominal", dir.path());
    cfg.areas[0].generators[0].participation = 0.2;
    cfg.save(dir.path().join("sum09.toml")).unwrap();
    let out = bin(&["run", "sum09.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum to 0.9"));
    assert!(!dir.path().join("out").exists());

    let mut cfg = export("nominal", dir.path());
    cfg.areas[0].agc.kp = 1e6;
    cfg.areas[0].agc.bias = Some(1e6);
    cfg.save(dir.path().join("blowup.toml")).unwrap();
    let out = bin(&["run", "blowup.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("divergence"));

    assert_eq!(
        bin(&["run", "no-such-scenario"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(
        bin(&["run", "nominal", "--dt", "0"], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn zero_duration_run_succeeds_with_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(
        &["run", "nominal", "--duration", "0", "--out-dir", "o"],
        dir.path(),
    );
    assert!(out.status.success());
    let s = read_csv(&dir.path().join("o/nominal.csv")).unwrap();
    assert!(s.is_empty());
}

#[test]
fn sweep_matches_sequential_runs() {
    let dir = tempfile::tempdir().unwrap();
    let names = ["nominal", "wt2-trip", "two-area", "short-circuit"];
    let mut args = vec!["run", "--sweep", "--duration", "100", "--out-dir", "par"];
    args.extend(names);
    assert!(bin(&args, dir.path()).status.success());
    for name in names {
        let seq = bin(
            &["run", name, "--duration", "100", "--out-dir", "seq"],
            dir.path(),
        );
        assert!(seq.status.success());
        let file = format!("{name}.csv");
        assert_eq!(
            fs::read(dir.path().join("par").join(&file)).unwrap(),
            fs::read(dir.path().join("seq").join(&file)).unwrap()
        );
    }
    let dup = bin(&["run", "--sweep", "nominal", "nominal"], dir.path());
    assert_eq!(dup.status.code(), Some(1));
}
