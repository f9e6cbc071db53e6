use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paulicap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bad_arguments_exit_with_two() {
    for args in [
        &["capacity", "--p", "0.7", "--mu", "0.5"][..],
        &["capacity", "--p", "0.3", "--mu", "1.5"],
        &["capacity", "--mu", "0.5"],
        &["capacity", "--family", "custom", "--q", "0.5,0.5,0.5", "--mu", "0.2"],
        &["capacity", "--q", "0.5,0.6,0.1,0.1", "--mu", "0.2"],
        &["sweep-mu", "--p", "0.3", "--steps", "1"],
        &["sweep-mu", "--p", "0.3", "--mu-min", "0.8", "--mu-max", "0.2"],
        &["no-such-command"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn capacity_reports_closed_form_value() {
    let o = run(&["capacity", "--p", "0.3", "--mu", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("0.463278326"), "{text}");

    let o = run(&["capacity", "--p", "0.3", "--mu", "0.5", "--json", "--per-qubit"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let per_qubit = v["capacity_bits_per_qubit"].as_f64().unwrap();
    assert!((per_qubit - 0.231639163).abs() < 1e-9, "{v}");
    assert_eq!(v["regime"], "entangled");
}

#[test]
fn sweep_csv_layout() {
    let o = run(&["sweep-mu", "--p", "0.35", "--steps", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,param,mu,s_min_bits,capacity_bits,regime,method");
    assert_eq!(lines.len(), 12);
    assert!(lines[1].starts_with("symmetric,0.35,0,"), "{}", lines[1]);
    assert!(lines[1].ends_with(",product,analytic"), "{}", lines[1]);
    assert!(lines[11].ends_with(",entangled,analytic"), "{}", lines[11]);

    let o = run(&["sweep-mu", "--p", "0.35", "--steps", "11", "--per-qubit"]);
    assert!(stdout(&o).starts_with("family,param,mu,s_min_bits,capacity_bits_per_qubit,regime,method\n"));
}

#[test]
fn sweep_json_is_an_array_of_records() {
    let o = run(&["sweep-p", "--param-min", "0", "--param-max", "0.5", "--mu", "0.3", "--steps", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for key in ["family", "param", "mu", "s_min_bits", "capacity_bits", "regime", "method"] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn numeric_sweep_is_byte_identical_across_thread_counts() {
    let args = |threads: &'static str| {
        vec!["--threads", threads, "--restarts", "8", "sweep-mu", "--family", "depolarizing", "--x", "0.7", "--steps", "6"]
    };
    let a = run(&args("1"));
    let b = run(&args("4"));
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains(",unknown,numeric"));
}

#[test]
fn threshold_json_fields() {
    let o = run(&["threshold", "--p", "0.35", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["mu_t_analytic"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert!((v["mu_t_numeric"].as_f64().unwrap() - 0.4).abs() < 1e-4);
    assert!(v["right_slope"].as_f64().unwrap() > v["left_slope"].as_f64().unwrap());
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("paulicap-cli-{}.csv", std::process::id()));
    let o = run(&["--out", path.to_str().unwrap(), "sweep-mu", "--p", "0.2", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written.lines().count(), 4);
}
