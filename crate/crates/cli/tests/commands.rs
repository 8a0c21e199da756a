use std::process::{Command, Output};

use proptest::prelude::*;
use stein_md_cli::report::{format_real, Cell, CsvReport};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stein-md")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn header_block_and_table() {
    let o = bin(&["stein-factors", "1", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.split("\r\n").all(|l| !l.contains('\n')), "CRLF line ends only");
    let lines: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert!(lines[0].starts_with("# tool: stein-md "));
    assert!(lines.iter().any(|l| l.starts_with("# config: lambda=1")));
    assert!(lines.iter().any(|l| l.starts_with("# units: ")));
    let table: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(table.len(), 2);
    assert!(table[0].starts_with("lambda,k,c0,c1_minus,c1_plus,c1,c2"));
    let cells: Vec<&str> = table[1].split(',').collect();
    assert!((cells[2].parse::<f64>().unwrap() - 5.0).abs() < 1e-14);
    assert!((cells[3].parse::<f64>().unwrap() - 3.0).abs() < 1e-14);
    assert!((cells[4].parse::<f64>().unwrap() - 1.453083463926812110538).abs() < 1e-14);
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["stein-factors", "1", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["stein-factors", "-1", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["validate", "nonsense"]).status.code(), Some(2));
    assert_eq!(bin(&["figure5", "--grid", "n=3"]).status.code(), Some(2));
    assert_eq!(bin(&["figure5", "--grid", "k=a..b"]).status.code(), Some(2));
    assert_eq!(bin(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    // k <= lambda is outside the factors' domain
    assert_eq!(bin(&["figure5", "--grid", "k=5..12"]).status.code(), Some(2));
}

#[test]
fn out_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("stein-md-out-{}.csv", std::process::id()));
    let a = bin(&["conjecture", "--grid", "lambda=2", "--out", path.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert!(a.stdout.is_empty());
    let b = bin(&["conjecture", "--grid", "lambda=2"]);
    assert_eq!(std::fs::read(&path).unwrap(), b.stdout);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn seed_changes_monte_carlo_only() {
    let args = |seed: &'static str| ["validate", "triangles", "--grid", "n=8;p=0.3;off=1", "--samples", "20000", "--seed", seed];
    let a = stdout(&bin(&args("1")));
    let b = stdout(&bin(&args("2")));
    assert_ne!(a, b);
    let exact = |seed: &'static str| stdout(&bin(&["validate", "matching", "--grid", "n=6;k=2", "--seed", seed]));
    assert_eq!(exact("1").replace("seed=1", ""), exact("2").replace("seed=2", ""));
}

#[test]
fn quoting_follows_rfc4180() {
    let mut r = CsvReport::new("t", vec![("name", "text"), ("v", "dimensionless")], 1);
    r.push(vec![Cell::Text("a,\"b\"".into()), Cell::Real(0.1)]);
    let text = r.render();
    assert!(text.contains("\"a,\"\"b\"\"\",1.0000000000000001e-1\r\n"), "{text}");
}

proptest! {
    #[test]
    fn reals_round_trip(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        let s = format_real(v);
        if v.is_nan() {
            prop_assert_eq!(s, "NaN");
        } else {
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}
