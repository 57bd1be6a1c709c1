use apportion_cli::report::{parse_allocation_csv, parse_allocation_json_lines};
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_apportion")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const METHODS: [&str; 7] = ["stochastic", "hamilton", "adams", "dean", "hill", "webster", "jefferson"];

#[test]
fn integral_quotas_any_method() {
    let data = fixture("integral.csv");
    for m in METHODS {
        let (code, out, err) = run(&["apportion", "--data", &data, "--seats", "10", "--method", m, "--format", "csv"]);
        assert_eq!(code, 0, "{m}: {err}");
        let seats: Vec<u64> = parse_allocation_csv(&out).unwrap().iter().map(|r| r.seats).collect();
        assert_eq!(seats, vec![5, 3, 2], "{m}");
    }
}

#[test]
fn same_seed_same_bytes() {
    let data = fixture("five_states.csv");
    for format in ["table", "csv", "json-lines"] {
        let args = ["apportion", "--data", &data, "--seats", "20", "--method", "stochastic", "--seed", "7", "--format", format];
        let first = run(&args);
        assert_eq!(first.0, 0);
        assert_eq!(first, run(&args));
    }
}

#[test]
fn json_lines_carry_the_audit() {
    let data = fixture("five_states.csv");
    let (_, out, _) = run(&["apportion", "--data", &data, "--seats", "20", "--method", "stochastic", "--seed", "3", "--format", "json-lines"]);
    let rows = parse_allocation_json_lines(&out).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows.iter().map(|r| r.seats).sum::<u64>(), 20);
    let audit: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert_eq!(audit["record"], "audit");
    assert_eq!(audit["seed"], 3);
    assert_eq!(audit["audit"]["kind"], "systematic");
    assert_eq!(audit["audit"]["permutation"].as_array().unwrap().len(), 5);
}

#[test]
fn csv_and_json_agree() {
    let data = fixture("five_states.csv");
    let base = ["apportion", "--data", data.as_str(), "--seats", "13", "--method", "webster", "--format"];
    let csv = parse_allocation_csv(&run(&[&base[..], &["csv"]].concat()).1).unwrap();
    let json = parse_allocation_json_lines(&run(&[&base[..], &["json-lines"]].concat()).1).unwrap();
    assert_eq!(csv, json);
}

#[test]
fn lower_bound_trace_is_printed() {
    let data = fixture("five_states.csv");
    let (code, out, err) = run(&["apportion", "--data", &data, "--seats", "8", "--method", "stochastic", "--lower-bound", "1"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("round 1 gamma"));
    assert!(out.contains("permutation"));
}

#[test]
fn lower_bound_file() {
    let data = fixture("five_states.csv");
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "state,bound\nA,2\nB,0\nC,0\nD,2\nE,0").unwrap();
    let path = f.path().to_str().unwrap();
    let (code, out, err) = run(&["apportion", "--data", &data, "--seats", "8", "--method", "hill", "--lower-bound", path, "--format", "csv"]);
    assert_eq!(code, 0, "{err}");
    let seats: Vec<u64> = parse_allocation_csv(&out).unwrap().iter().map(|r| r.seats).collect();
    assert!(seats[0] >= 2 && seats[3] >= 2);
    assert_eq!(seats.iter().sum::<u64>(), 8);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "A,1\nZ,1").unwrap();
    let (code, _, _) = run(&["apportion", "--data", &data, "--seats", "8", "--method", "hill", "--lower-bound", bad.path().to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn errors_and_exit_codes() {
    let (code, _, err) = run(&["apportion", "--data", &fixture("two_states.csv"), "--seats", "7", "--method", "bogus"]);
    assert_eq!(code, 2, "{err}");

    let mut dup = tempfile::NamedTempFile::new().unwrap();
    writeln!(dup, "A,2\nB,3\nA,4").unwrap();
    let (code, _, err) = run(&["apportion", "--data", dup.path().to_str().unwrap(), "--seats", "3", "--method", "hamilton"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");

    let (code, _, err) = run(&["apportion", "--data", "/nonexistent.csv", "--seats", "3", "--method", "hamilton"]);
    assert_eq!(code, 2, "{err}");

    let (code, _, err) = run(&["apportion", "--data", &fixture("five_states.csv"), "--seats", "3", "--method", "hill"]);
    assert_eq!(code, 1, "{err}");

    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("bound-check"));
}

#[test]
fn distribution_command() {
    let (code, out, _) = run(&["distribution", "--data", &fixture("two_states.csv"), "--seats", "7", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "A,B,probability,probability_decimal\n2,5,1/5,0.200000\n3,4,4/5,0.800000\n");
    let (code, _, _) = run(&["distribution", "--data", &fixture("five_states.csv"), "--seats", "20", "--limit", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn simulate_command() {
    let args = ["simulate", "--data", &fixture("two_states.csv"), "--seats", "7", "--method", "stochastic", "--n", "20000", "--seed", "4", "--format", "csv"];
    let (code, out, err) = run(&args);
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")), "{out}");
    assert_eq!(run(&args).1, out);
}

#[test]
fn paradox_scan_command() {
    let base = ["paradox-scan", "--kind", "alabama", "--count", "300", "--max-states", "4", "--max-population", "20", "--max-seats", "15", "--format", "json-lines", "--method"];
    let (code, out, _) = run(&[&base[..], &["hamilton"]].concat());
    assert_eq!(code, 0);
    assert!(out.lines().count() > 0);
    let (_, out, _) = run(&[&base[..], &["webster"]].concat());
    assert_eq!(out, "");
}

#[test]
fn bound_check_infeasible() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "A,1/3\nB,1/3\nC,7/3").unwrap();
    let (code, out, _) = run(&["bound-check", "--quotas", f.path().to_str().unwrap(), "--lower-bound", "1"]);
    assert_eq!(code, 1);
    assert!(out.contains("violation"), "{out}");
}

#[test]
fn table1_over_census_directory() {
    let (code, out, err) = run(&["table1", "--data", &fixture("census"), "--format", "csv"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        out,
        "census,small_states,state,quota,adjusted\n1950,3,New York,43.038,42.962\n2000,4,Pennsylvania,19.013,18.999\n"
    );
}
