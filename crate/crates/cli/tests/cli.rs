use std::path::PathBuf;
use std::process::{Command, Output};

fn qgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgraph")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qgraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// `key=value` fields of the fermi output line.
fn fermi_fields(line: &str) -> Vec<(String, f64)> {
    line.trim()
        .split(", ")
        .map(|kv| {
            let (k, v) = kv.split_once('=').unwrap();
            (k.to_string(), v.parse().unwrap())
        })
        .collect()
}

#[test]
fn fixtures_list_names_the_examples() {
    let o = qgraph(&["fixtures", "list"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let names: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names, ["loop_delta_sym", "cross_robin", "loop_delta_2", "loop_deltaprime", "loop_mixed"]);
    let all = stdout(&qgraph(&["fixtures", "list", "--all"]));
    assert_eq!(all.lines().count(), 15);
}

#[test]
fn fermi_on_the_circle() {
    let o = qgraph(&["fermi", "--fixture", "fig1"]);
    assert!(o.status.success());
    let f = fermi_fields(&stdout(&o));
    assert_eq!(f.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>(), ["kdot", "re_kddot", "im_kddot"]);
    assert!((f[0].1 + std::f64::consts::PI).abs() < 1e-9);
    assert!((f[2].1 + 44.41).abs() < 0.01);
}

#[test]
fn fermi_on_the_cross() {
    let f = fermi_fields(&stdout(&qgraph(&["fermi", "--fixture", "fig9"])));
    assert!(f[0].1.abs() < 1e-9);
    assert!((f[2].1 + 20.76).abs() < 0.01);
}

#[test]
fn resonances_csv() {
    let o = qgraph(&["resonances", "--fixture", "loop_deltaprime", "--re", "0.5:10", "--im", "-2:0.05"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("re_k,im_k,residual,winding,suspect"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.len() >= 5);
    let mut prev = f64::NEG_INFINITY;
    for r in &rows {
        assert_eq!(r.len(), 5);
        let (re, im): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert!((0.5..=10.0).contains(&re) && im <= 0.05);
        assert!(re >= prev);
        prev = re;
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["resonances", "--fixture", "loop_mixed", "--re", "1:12", "--im", "-2:0.05"];
    let a = qgraph(&args);
    let b = qgraph(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let seq = Command::new(env!("CARGO_BIN_EXE_qgraph")).env("QGRAPH_THREADS", "1").args(args).output().unwrap();
    assert_eq!(a.stdout, seq.stdout);
}

#[test]
fn floats_have_at_most_twelve_significant_digits() {
    let out = stdout(&qgraph(&["trajectory", "--fixture", "fig1", "--t=-0.01:0.01", "--steps", "4"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,re_k,im_k,residual"));
    for l in lines {
        for field in l.split(',') {
            let mantissa = field.split(['e', 'E']).next().unwrap();
            let digits = mantissa.chars().filter(char::is_ascii_digit).collect::<String>();
            assert!(digits.trim_start_matches('0').len() <= 12, "{field}");
        }
    }
}

#[test]
fn graph_file_and_output_file() {
    let doc = tmp("loop.json");
    let dump = qgraph(&["fixtures", "dump", "loop_delta_2"]);
    std::fs::write(&doc, &dump.stdout).unwrap();
    let out = tmp("roots.csv");
    let o = qgraph(&["resonances", "--graph", doc.to_str().unwrap(), "--re", "1:7", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let from_fixture = qgraph(&["resonances", "--fixture", "loop_delta_2", "--re", "1:7"]);
    assert_eq!(std::fs::read(&out).unwrap(), from_fixture.stdout);
}

#[test]
fn secular_and_orbits() {
    let o = qgraph(&["secular", "eval", "--fixture", "loop_delta_2", "--k", "3.14159265358979,0"]);
    assert!(o.status.success());
    let v: Vec<f64> = stdout(&o).split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(v.len(), 2);
    let o = qgraph(&["orbits", "--fixture", "fig1"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().count() > 1);
}

#[test]
fn asymptotics_summary() {
    let o = qgraph(&[
        "asymptotics",
        "--fixture",
        "loop_deltaprime",
        "--mode",
        "deltaprime",
        "--n-min",
        "5",
        "--n-max",
        "20",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let (_, fits) = out.split_once("\n\n").expect("blank line before the fit summary");
    let mut lines = fits.lines();
    assert_eq!(lines.next(), Some("quantity,slope,intercept,r2"));
    let imag: Vec<&str> = lines.find(|l| l.starts_with("imag,")).unwrap().split(',').collect();
    let slope: f64 = imag[1].parse().unwrap();
    assert!((slope + 2.0).abs() < 0.15, "{slope}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["resonances", "--re", "1:2"][..],
        &["resonances", "--fixture", "fig1", "--re", "2:1"],
        &["resonances", "--fixture", "fig1", "--graph", "x.json", "--re", "1:2"],
        &["resonances", "--fixture", "nope", "--re", "1:2"],
        &["resonances", "--fixture", "fig1", "--re", "1:2", "--tol", "-1"],
        &["resonances", "--graph", "/nonexistent/graph.json", "--re", "1:2"],
        &["fermi", "--fixture", "loop_delta_2"],
        &["bogus"],
    ] {
        let o = qgraph(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn computation_errors_exit_one() {
    let o = qgraph(&["fermi", "--fixture", "loop_delta_2", "--k0", "1.0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a root"));
}
