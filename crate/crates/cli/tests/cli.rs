use std::fs;
use std::process::{Command, Output};

fn qseries(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qseries")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// p(n) by the usual coin-change recurrence.
fn partitions(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for k in part..=n {
            p[k] += p[k - part];
        }
    }
    p
}

#[test]
fn level_one_string_function_is_the_partition_series() {
    let o = qseries(&["string", "--p", "1", "--pp", "3", "--m", "0", "--l", "0", "--order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let want: String = partitions(6).iter().enumerate().map(|(e, c)| format!("{e} {c}\n")).collect();
    assert_eq!(stdout(&o), want);
    assert_eq!(want, "0 1\n1 1\n2 2\n3 3\n4 5\n5 7\n6 11\n");
}

#[test]
fn theta_at_an_integer_power_vanishes() {
    for expr in ["j(q^1;q^1)", "j(q^3;q)", "j(q^(-2);q)"] {
        let o = qseries(&["coeffs", expr, "--order", "10"]);
        assert_eq!(o.status.code(), Some(0), "{expr}");
        let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
        let want: Vec<String> = (0..=10).map(|e| format!("{e} 0")).collect();
        assert_eq!(lines, want, "{expr}");
    }
}

#[test]
fn rationals_print_as_num_over_den() {
    let o = qseries(&["coeffs", "1/2 * q^(-1) - x/3", "--order", "1", "--param", "x=2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "-1 1/2\n0 -2/3\n1 0\n");
}

#[test]
fn exit_codes() {
    assert_eq!(qseries(&["verify", "--suite", "j-*", "--order", "30"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qid");
    fs::write(&bad, "identity wrong\n  anchor \"none\"\n  lhs = j(q; q^2)\n  rhs = 1 + q\n").unwrap();
    let o = qseries(&["verify", "--file", bad.to_str().unwrap(), "--order", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("status=fail\tdiscrepancy_exponent=1\tdelta_numerator=-3\tdelta_denominator=1"));

    let o = qseries(&["coeffs", "j(q; q", "--order", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(qseries(&["coeffs", "q", "--order"]).status.code(), Some(2));
    assert_eq!(qseries(&["string", "--p", "2", "--pp", "4", "--m", "0", "--l", "0", "--order", "3"]).status.code(), Some(2));
    assert_eq!(qseries(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn report_bytes_do_not_depend_on_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for jobs in ["1", "8"] {
        let path = dir.path().join(format!("report-{jobs}.txt"));
        let o = qseries(&["verify", "--suite", "hecke", "--order", "40", "--jobs", jobs, "--report", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
        reports.push(fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let text = String::from_utf8(reports.remove(0)).unwrap();
    assert!(text.lines().last().unwrap().starts_with("total="));
}

#[test]
fn catalog_listing() {
    let o = qseries(&["catalog", "list", "thetaids"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<&str> = std::str::from_utf8(&o.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 12);
    assert!(lines.contains(&"level12EvenSpinThetaId\tproposition:level12EvenSpinThetaId"));
}
