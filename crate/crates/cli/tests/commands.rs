//! The `mrt` binary: subcommands, exit codes and error lines.

use std::path::Path;
use std::process::{Command, Output};

fn mrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrt")).args(args).env_remove("MRT_PONT_DATA").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn super_table_text() {
    let o = mrt(&["tables", "--kind", "super"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    // Printed Super row b=1: 1, 1.5, 3, 6.5, 11, 15.
    assert!(out.contains("1.0     1.5     3.0     6.5    11.0    15.0"), "{out}");
    assert!(!out.contains("Ultra"));
}

#[test]
fn all_tables_as_csv() {
    let o = mrt(&["tables", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().filter(|l| !l.is_empty()).all(|l| l.contains(',')), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mrt(&["tables", "--bogus"]).status.code(), Some(2));
    assert_eq!(mrt(&["tables", "--kind", "mega"]).status.code(), Some(2));
    assert_eq!(mrt(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mrt(&[]).status.code(), Some(2));
    let o = mrt(&["backtest", "--quotes", "q.csv", "--from", "yesterday", "--to", "2024-01-02"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(mrt(&["--help"]).status.code(), Some(0));
}

#[test]
fn domain_errors_exit_one_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("short.csv");
    std::fs::write(&f, "t_hours,value\n1,1\n2,2\n3,3\n").unwrap();
    let o = mrt(&["estimate-r", "--in", p(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: kind=insufficient-data reason="), "{err}");

    let o = mrt(&["estimate-r", "--in", p(&dir.path().join("missing.csv"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: kind=io "), "{}", stderr(&o));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "time,value\n").unwrap();
    let o = mrt(&["estimate-r", "--in", p(&bad)]);
    assert!(stderr(&o).starts_with("error: kind=parse "), "{}", stderr(&o));
}

#[test]
fn fake_chart_then_estimate() {
    let dir = tempfile::tempdir().unwrap();
    for (component, lo, hi) in [("super", 0.0, 1.0), ("ultra", 0.0, 1.0)] {
        let f = dir.path().join(format!("{component}.csv"));
        let o = mrt(&["fake-chart", "--out", p(&f), "--component", component]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let o = mrt(&["estimate-r", "--in", p(&f)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let out = stdout(&o);
        let r: f64 = out.trim().strip_prefix("r=").unwrap().split_whitespace().next().unwrap().parse().unwrap();
        assert!(r > lo && r < hi, "{component}: {out}");
    }
    // Deterministic output.
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    mrt(&["fake-chart", "--out", p(&a)]);
    mrt(&["fake-chart", "--out", p(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

/// The fake chart as hourly quotes plus a matching engine config.
fn fake_quotes(dir: &Path) -> (String, String) {
    let q = dir.join("quotes.csv");
    let o = mrt(&["fake-chart", "--out", p(&q), "--format", "quotes"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let c = dir.join("engine.conf");
    std::fs::write(&c, "# hourly quotes\nquotes_per_day=6.5\n").unwrap();
    (p(&q).to_string(), p(&c).to_string())
}

#[test]
fn backtest_report_and_config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let (q, c) = fake_quotes(dir.path());
    let args = ["backtest", "--quotes", &q, "--config", &c, "--from", "2024-01-01", "--to", "2024-01-08T06:00:00"];
    let o = mrt(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("TRADING FAKE") && text.contains("PERIOD:"), "{text}");
    assert_eq!(text, stdout(&mrt(&args)), "deterministic");

    let mut shown: Vec<&str> = args.to_vec();
    shown.extend(["--set", "beta=2", "--show-config"]);
    let out = stdout(&mrt(&shown));
    assert!(out.starts_with("# effective config\n"));
    assert!(out.contains("quotes_per_day=6.5"), "config file applies: {out}");
    assert!(out.contains("beta=2"), "flags override: {out}");

    let mut csv: Vec<&str> = args.to_vec();
    csv.extend(["--report", "csv"]);
    let out = stdout(&mrt(&csv));
    assert!(out.starts_with("symbol,direction,level,"), "{out}");

    let mut bad: Vec<&str> = args.to_vec();
    bad.extend(["--set", "beta=0.5"]);
    let o = mrt(&bad);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: kind=config "), "{}", stderr(&o));
}

#[test]
fn optimize_writes_config_the_backtester_reads() {
    let dir = tempfile::tempdir().unwrap();
    let (q, c) = fake_quotes(dir.path());
    let out = dir.path().join("params.conf");
    let o = mrt(&[
        "optimize", "--quotes", &q, "--config", &c, "--from", "2024-01-01", "--to", "2024-01-08T06:00:00", "--out", p(&out), "--min-days", "0",
        "--max-outer", "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let results: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("params.conf.json")).unwrap()).unwrap();
    assert_eq!(results["v"], 1);
    assert_eq!(results["results"][0]["symbol"], "FAKE");
    let o = mrt(&["backtest", "--quotes", &q, "--config", p(&out), "--from", "2024-01-01", "--to", "2024-01-08T06:00:00"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    // The default education minimum is six months.
    let o = mrt(&["optimize", "--quotes", &q, "--from", "2024-01-01", "--to", "2024-01-08", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("kind=insufficient-data"));
}

#[test]
fn pont_play_with_bots_only_finishes() {
    let dir = tempfile::tempdir().unwrap();
    let o = mrt(&["pont", "play", "--seats", "bot,bot,bot", "--seed", "4", "--data", p(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("game over") && out.contains("result:"), "{out}");
    let logs: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(logs.len(), 1);
}

#[test]
fn pont_play_rejects_bad_seats() {
    let o = mrt(&["pont", "play", "--seats", "human,alien"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: kind=config "));
    let o = mrt(&["pont", "play", "--seats", "bot"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pont_play_human_via_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_mrt"))
        .args(["pont", "play", "--seats", "human,bot", "--seed", "2"])
        .env_remove("MRT_PONT_DATA")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    // Always take the first offered action.
    child.stdin.take().unwrap().write_all("0\n".repeat(300).as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("game over"), "{out}");
    assert!(out.contains("seat 0> "));
}
