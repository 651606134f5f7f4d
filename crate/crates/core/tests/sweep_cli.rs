use std::fs;
use std::path::Path;
use std::process::Command;

use cavity_interference::analytic::weak_excitation;
use cavity_interference::sweep::{
    parse_config, run_sweep, strip_comments, write_outputs, Axis, AxisSpec, Engine, Observable,
    OutputFormat, SweepSpec,
};
use cavity_interference::ModelParams;
use proptest::prelude::*;

fn analytic_spec(values: &[f64]) -> SweepSpec {
    let base = ModelParams { g0: 2.0, omega: 0.3, delta_a: -30.0, ..ModelParams::default() };
    SweepSpec::new(
        base,
        AxisSpec::list(Axis::DeltaC, values).unwrap(),
        Engine::Analytic,
        &[Observable::ICav, Observable::AlphaAbs],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rows_follow_the_axis_order(values in prop::collection::vec(-10.0..10.0f64, 1..40), threads in 1usize..5) {
        let mut spec = analytic_spec(&values);
        spec.threads = Some(threads);
        let r = run_sweep(&spec).unwrap();
        prop_assert_eq!(r.axis_values(0), values.clone());
        let i_cav = r.column("i_cav").unwrap();
        for (v, got) in values.iter().zip(i_cav) {
            let mut p = spec.base.clone();
            p.delta_c = *v;
            prop_assert_eq!(got, Some(weak_excitation(&p, 1.0).unwrap().i_cav));
        }
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let values: Vec<f64> = (0..16).map(|i| 0.25 * i as f64).collect();
    let base = ModelParams { g0: 1.0, omega: 0.2, ..ModelParams::default() };
    let mut spec = SweepSpec::new(
        base,
        AxisSpec::list(Axis::Kappa, &values[1..]).unwrap(),
        Engine::Quantum,
        &[Observable::ICav, Observable::G2],
    )
    .unwrap();
    spec.threads = Some(1);
    let a = run_sweep(&spec).unwrap();
    spec.threads = Some(4);
    let b = run_sweep(&spec).unwrap();
    let strip = |r: &cavity_interference::sweep::SweepResult| {
        r.rows.iter().map(|row| (row.coords.clone(), row.values.clone())).collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn written_csv_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let values = [-2.0, -0.5, 0.0, 1.5];
    let r = run_sweep(&analytic_spec(&values)).unwrap();
    let paths = write_outputs(&r, dir.path(), "back", OutputFormat::CsvPlot).unwrap();
    assert_eq!(paths.len(), 2);
    let text = fs::read_to_string(&paths[0]).unwrap();
    let body = strip_comments(&text);
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), ["delta_c", "i_cav", "alpha_abs", "flag"]);
    let i_cav = r.column("i_cav").unwrap();
    for (rec, (v, want)) in reader.records().zip(values.iter().zip(i_cav)) {
        let rec = rec.unwrap();
        assert_eq!(rec[0].parse::<f64>().unwrap(), *v);
        assert_eq!(Some(rec[1].parse::<f64>().unwrap()), want);
        assert_eq!(&rec[3], "");
    }
    assert!(fs::read_to_string(&paths[1]).unwrap().starts_with("<svg"));
}

fn simulate(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_simulate")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SWEEP: &str = r#"
[model]
g0 = 10.0
omega = 10.0
kappa = 10.0
delta_a = -1000.0

[sweep]
axis = "N"
min = 1
max = 1000
count = 12
spacing = "log"

[output]
observables = ["i_cav", "i_at"]
name = "scan"
"#;

#[test]
fn sweep_command_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SWEEP);
    let out = dir.path().join("out");
    let (code, stdout, _) = simulate(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--format", "csv+plot"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("scan.csv"));
    assert!(out.join("scan.csv").exists() && out.join("scan.svg").exists());
    let (code, _, _) = simulate(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--threads", "2"]);
    assert_eq!(code, 0);
}

#[test]
fn config_parser_accepts_the_same_document() {
    let cfg = parse_config(SWEEP).unwrap();
    assert_eq!(cfg.sweep().unwrap().point_count(), 12);
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    let cfg = write_config(dir.path(), SWEEP);
    assert_eq!(simulate(&["sweep", "--config", &cfg, "--out", out, "--engine", "quantum"]).0, 1);
    assert_eq!(simulate(&["sweep", "--config", &cfg, "--out", out, "--format", "png"]).0, 1);
    assert_eq!(simulate(&["fig", "fig9", "--out", out]).0, 1);
    assert_eq!(simulate(&["frobnicate"]).0, 1);
    let (code, _, stderr) = simulate(&["sweep", "--config", "/nonexistent.toml", "--out", out]);
    assert_eq!(code, 1);
    assert!(stderr.contains("nonexistent.toml"));
    let bad = write_config(dir.path(), "[model]\ng0 = 1.0\ncolour = 3\n");
    let (code, _, stderr) = simulate(&["stability", "--config", &bad]);
    assert_eq!(code, 1);
    assert!(stderr.contains("line 3"), "{stderr}");
}

#[test]
fn runtime_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SWEEP);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = blocker.join("sub");
    let (code, _, stderr) = simulate(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 2, "{stderr}");
}

#[test]
fn inspection_commands_print_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[model]\nn_atoms = 3\ng0 = 10.0\nkappa = 10.0\ndelta_a = -100.0\ndelta_c = -2.0\n\n[probe]\nmin = -5.0\nmax = 5.0\ncount = 11\n\n[zeros]\nx_min = -0.3\nx_max = 0.8\nnx = 23\ny_min = -0.3\ny_max = 0.8\nny = 23\n",
    );
    let (code, stdout, _) = simulate(&["stability", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!(stdout.contains("stable: true"), "{stdout}");
    let (code, stdout, _) = simulate(&["probe", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!(stdout.contains("# peaks:") && stdout.contains("delta_p,probe_rate,probe_oracle,flag"));
    let (code, stdout, _) = simulate(&["zeros", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!(stdout.contains("x,y,intensity"));
}

#[test]
fn figure_command_writes_each_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, _) = simulate(&["fig", "fig4", "--out", out, "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(dir.path().join("fig4_g1.csv").exists());
    assert!(dir.path().join("fig4_g10.csv").exists());
    assert!(!dir.path().join("fig4.svg").exists());
}
