use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pppt_core::opt;
use pppt_core::NetworkConfig;

fn pppt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pppt")).args(args).output().expect("run pppt")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parses a CSV table into (metadata, header, rows).
fn table(text: &str) -> (String, Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let meta = lines.next().unwrap().to_string();
    assert!(meta.starts_with("# pppt schema=1 "), "{meta}");
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (meta, header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let j = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j]).collect()
}

#[test]
fn pdf_point_value() {
    let out = pppt(&["pdf", "--rule", "ian", "--alpha", "4", "--d", "1", "--lambda", "0.3183", "--x", "1"]);
    let (_, header, rows) = table(&stdout(&out));
    assert_eq!(header, ["x", "density"]);
    // ln4·0.5·e^{-1} at λπd² = 1; λ = 0.3183 is within 1e-4 of 1/π
    assert!((rows[0][1] - 0.254_994_6).abs() < 1e-4, "{}", rows[0][1]);
}

#[test]
fn pdf_outside_support_is_zero() {
    let out = pppt(&["pdf", "--rule", "opt", "--n", "1", "--lambda", "0.3183", "--x", "0.5,0.79,0.7924"]);
    let (meta, _, rows) = table(&stdout(&out));
    assert!(meta.contains("n=1"));
    assert!(rows.iter().all(|r| r[1] == 0.0));
}

#[test]
fn emitted_densities_integrate_to_one() {
    for extra in [&["--n", "2"][..], &[][..]] {
        let mut args =
            vec!["pdf", "--rule", "opt", "--lambda", "0.3183", "--x-min", "0", "--x-max", "40", "--points", "80001"];
        args.extend_from_slice(extra);
        let (_, _, rows) = table(&stdout(&pppt(&args)));
        let trapezoid: f64 = rows.windows(2).map(|w| 0.5 * (w[0][1] + w[1][1]) * (w[1][0] - w[0][0])).sum();
        assert!((trapezoid - 1.0).abs() < 1e-3, "{extra:?}: {trapezoid}");
    }
}

#[test]
fn fixed_rate_sweep_is_dominated_by_cognitive() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig5.csv");
    let out = pppt(&["sweep", "--method", "cognitive,fixed", "--points", "12", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let (_, header, rows) = table(&fs::read_to_string(&path).unwrap());
    for r in ["ian", "opt"] {
        let c = column(&header, &rows, &format!("cognitive_{r}_quadrature"));
        let t = column(&header, &rows, &format!("fixed_rate_{r}_quadrature"));
        assert!(c.iter().zip(&t).all(|(c, t)| c >= t));
    }
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let args =
        ["sweep", "--method", "cognitive,bounds,simulate", "--points", "4", "--realizations", "300", "--seed", "9"];
    let a = stdout(&pppt(&args));
    let b = stdout(&pppt(&args));
    assert_eq!(a, b);
    let (meta, header, _) = table(&a);
    assert!(meta.contains("seed=9") && meta.contains("realizations=300"));
    assert!(header.contains(&"cognitive_opt_simulated_stderr".to_string()));
}

#[test]
fn sweep_seed_defaults_to_zero() {
    let base = ["sweep", "--method", "simulate", "--rule", "ian", "--points", "2", "--realizations", "200"];
    let implicit = stdout(&pppt(&base));
    let mut explicit_args = base.to_vec();
    explicit_args.extend(["--seed", "0"]);
    assert_eq!(implicit, stdout(&pppt(&explicit_args)));
}

#[test]
fn figures_have_their_pinned_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = pppt(&["figures", "--fig", "2,3,4,6", "--out", d, "--realizations", "200"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let read = |f: &str| table(&fs::read_to_string(Path::new(d).join(f)).unwrap());

    let (_, h, rows) = read("fig2.csv");
    let c = column(&h, &rows, "cognitive_ian_quadrature");
    let maxima = (1..c.len() - 1).filter(|&k| c[k] > c[k - 1] && c[k] > c[k + 1]).count();
    assert_eq!(maxima, 1);
    assert!(h.contains(&"cognitive_ian_asymptote".to_string()));

    let (_, h, rows) = read("fig3.csv");
    let c = column(&h, &rows, "cognitive_opt_quadrature");
    assert!(c.windows(2).all(|w| w[1] >= w[0]));

    let (meta, h, rows) = read("fig4.csv");
    assert!(meta.contains("y_opt=2"));
    let lambdas = column(&h, &rows, "lambda");
    let lower = column(&h, &rows, "cognitive_opt_lower_bound");
    let cfg = NetworkConfig::new(lambdas[7], 1.0, 4.0).unwrap();
    let expected = opt::lower_bound(&cfg, |i| 2.0 * opt::support_edge(i)).unwrap().value;
    assert!((lower[7] - expected).abs() <= 1e-12 * expected);

    let (_, h, rows) = read("fig6.csv");
    assert_eq!(rows.len(), 10);
    for name in ["cognitive_ian_quadrature", "cognitive_ian_simulated", "cognitive_ian_simulated_stderr"] {
        assert!(column(&h, &rows, name).iter().all(|v| v.is_finite()));
    }
    assert!(!Path::new(d).join("fig5.csv").exists());
}

#[test]
fn json_mirror() {
    let out = pppt(&["sweep", "--points", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["columns"][0], "lambda");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(v["meta"].as_str().unwrap().starts_with("pppt schema=1"));
}

#[test]
fn single_point_commands() {
    let (_, h, rows) = table(&stdout(&pppt(&["optimal-density"])));
    assert!((column(&h, &rows, "lambda")[0] - 0.245_253_384).abs() < 1e-8);

    let (_, h, rows) = table(&stdout(&pppt(&["compare", "--lambda", "0.5"])));
    assert!(column(&h, &rows, "gap_ian")[0] > 0.0);
    assert!(column(&h, &rows, "gap_opt")[0] > 0.0);

    let out = pppt(&[
        "simulate",
        "--lambda",
        "0.1",
        "--rule",
        "opt",
        "--method",
        "fixed",
        "--mode",
        "closest",
        "--rate-mode",
        "lower",
        "--realizations",
        "500",
    ]);
    let (meta, h, rows) = table(&stdout(&out));
    assert!(meta.contains("rule=OPT") && meta.contains("method=fixed_rate") && meta.contains("rate_mode=lower"));
    assert!(column(&h, &rows, "mean")[0] > 0.0);
    assert_eq!(column(&h, &rows, "n_realizations")[0], 500.0);
}

#[test]
fn thread_cap_does_not_change_results() {
    let args = ["simulate", "--lambda", "0.4", "--realizations", "400", "--seed", "3"];
    let default = stdout(&pppt(&args));
    let capped = Command::new(env!("CARGO_BIN_EXE_pppt")).args(args).env("PPPT_THREADS", "1").output().unwrap();
    assert_eq!(default, stdout(&capped));
    let bad = Command::new(env!("CARGO_BIN_EXE_pppt")).args(args).env("PPPT_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    // usage error
    let out = pppt(&["sweep", "--rule", "nope"]);
    assert!(!out.status.success());
    // invalid parameters
    assert_eq!(pppt(&["compare", "--lambda", "1", "--alpha", "2"]).status.code(), Some(1));
    // unwritable output
    let out = pppt(&["sweep", "--points", "2", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    // every OPT lower-bound cell is outside its support
    let out = pppt(&["sweep", "--points", "3", "--rule", "opt", "--method", "bounds", "--y-opt", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(2).unwrap().contains("NaN"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}
