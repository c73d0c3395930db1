use std::io::Write;
use std::process::{Command, Output};

use regseq::linrep::builtin;
use regseq::repfile::RepFile;
use serde_json::Value;

fn regseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regseq"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = regseq(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    regseq(args).status.code().unwrap()
}

fn rep_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn eta_prints_bare_fraction() {
    assert_eq!(stdout(&["eta", "--m", "1024"]), "-1/3\n");
    assert_eq!(stdout(&["eta", "--m", "0"]), "1\n");
    assert_eq!(stdout(&["eta", "--m", "6"]), "1/3\n");
    let v: Value = serde_json::from_str(&stdout(&["eta", "--m", "1", "--json"])).unwrap();
    assert_eq!(v["value"], "-1/3");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["lower-table", "--help"]), 0);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["eta", "--m", "1", "--bogus"]), 1);
    assert_eq!(code(&["eta", "--m", "-3"]), 1);
    assert_eq!(code(&["lower-table", "--n-max", "26"]), 1);
    assert_eq!(code(&["lower-table", "--n-min", "5", "--n-max", "4"]), 1);
    assert_eq!(
        code(&["upper-table", "--n-max", "31", "--budget-override"]),
        1
    );
    assert_eq!(code(&["twist", "--seq", "sign:26", "--x-max", "3"]), 1);
    assert_eq!(code(&["twist", "--seq", "xyz", "--x-max", "3"]), 1);
    assert_eq!(
        code(&["sum", "--builtin", "eta", "--rep", "x.json", "--x", "3"]),
        1
    );
    assert_eq!(code(&["validate-rep", "--rep", "/nonexistent/rep.json"]), 2);
    let f = rep_file("{not json");
    assert_eq!(code(&["exponent", "--rep", f.path().to_str().unwrap()]), 2);
}

#[test]
fn usage_errors_name_the_flag() {
    let out = regseq(&["eta", "--m", "1", "--bogus"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--bogus"), "{err}");
    assert!(err.contains("Usage"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn upper_table_small() {
    let out = stdout(&["upper-table", "--n-max", "4", "--no-timing"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "n,norm_num,norm_exp2,norm_float,log_value,wall_ms"
    );
    assert_eq!(lines.len(), 5);
    let last: Vec<&str> = lines[4].split(',').collect();
    assert_eq!(&last[..3], &["4", "15", "1"]);
    assert!((last[4].parse::<f64>().unwrap() - 0.726723).abs() < 5e-7);
    assert_eq!(last[5], "0");
}

#[test]
fn lower_table_header_and_checks() {
    let out = stdout(&["lower-table", "--n-max", "5", "--no-timing"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "n,statistic_exact,statistic_float,log_value,dominant_ok,rho_gt_2,wall_ms"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("3,1 -15/8 -47/8 15/4 3,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",true,true,0")));
}

/// The JSON and CSV renderings carry the same numbers.
#[test]
fn json_mirrors_csv() {
    for (cmd, fields) in [
        (
            "lower-table",
            &[
                "n",
                "statistic_exact",
                "statistic_float",
                "log_value",
                "dominant_ok",
                "rho_gt_2",
            ][..],
        ),
        (
            "upper-table",
            &["n", "norm_num", "norm_exp2", "norm_float", "log_value"],
        ),
    ] {
        let csv = stdout(&[cmd, "--n-max", "9", "--no-timing"]);
        let json: Value =
            serde_json::from_str(&stdout(&[cmd, "--n-max", "9", "--no-timing", "--json"])).unwrap();
        let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
        let rows = json.as_array().unwrap();
        assert_eq!(rows.len(), csv.lines().count() - 1);
        for (line, row) in csv.lines().skip(1).zip(rows) {
            let cells: Vec<&str> = line.split(',').collect();
            for name in fields {
                let cell = cells[header.iter().position(|h| h == name).unwrap()];
                match &row[name] {
                    Value::Number(x) if x.is_f64() => {
                        assert_eq!(cell.parse::<f64>().unwrap(), x.as_f64().unwrap())
                    }
                    Value::String(s) => assert_eq!(cell, s),
                    v => assert_eq!(cell, v.to_string()),
                }
            }
        }
    }
}

#[test]
fn twist_series() {
    let out = stdout(&[
        "twist",
        "--seq",
        "tm",
        "--x-max",
        "8191",
        "--normalize",
        "sqrt",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,value_num,value_den,value_float");
    assert_eq!(lines.len(), 8193);
    assert_eq!(lines[1], "0,1,1,1.0000000000000000");
    for line in &lines[65..] {
        let v: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(0.9 < v && v < 1.1, "{line}");
    }
    let plain = stdout(&["twist", "--seq", "eta", "--x-max", "2"]);
    assert_eq!(plain, "x,value_num,value_den,value_float\n0,1,1,1.0000000000000000\n1,10,9,1.1111111111111112\n2,11,9,1.2222222222222223\n");
    let json: Value = serde_json::from_str(&stdout(&[
        "twist", "--seq", "sign:3", "--x-max", "4", "--json",
    ]))
    .unwrap();
    assert_eq!(json["seq"], "sign:3");
    assert_eq!(json["rows"].as_array().unwrap().len(), 5);
    for seq in ["pf", "rs"] {
        assert_eq!(
            stdout(&["twist", "--seq", seq, "--x-max", "100"])
                .lines()
                .count(),
            102
        );
    }
}

#[test]
fn sum_engines_agree() {
    let naive = stdout(&[
        "sum",
        "--builtin",
        "eta",
        "--x",
        "5000",
        "--engine",
        "naive",
    ]);
    assert_eq!(
        naive,
        stdout(&[
            "sum",
            "--builtin",
            "eta",
            "--x",
            "5000",
            "--engine",
            "digit"
        ])
    );
    assert_eq!(naive, stdout(&["sum", "--builtin", "eta", "--x", "5000"]));
    assert_eq!(
        stdout(&["sum", "--builtin", "eta-squared", "--block", "1"]),
        "10/9\n"
    );
    assert_eq!(
        stdout(&["sum", "--builtin", "eta-eta-shifted", "--block", "1"]),
        "-2/9\n"
    );
    assert_eq!(stdout(&["sum", "--builtin", "one", "--x", "99"]), "100\n");
}

#[test]
fn rep_files() {
    let f = rep_file(&RepFile::from_rep(&builtin::eta()).to_json());
    let path = f.path().to_str().unwrap();
    assert_eq!(
        stdout(&["validate-rep", "--rep", path]),
        "shapes_ok,leading_zero_invariant\ntrue,true\n"
    );
    assert_eq!(
        stdout(&["sum", "--rep", path, "--x", "1000"]),
        stdout(&["sum", "--builtin", "eta", "--x", "1000"])
    );
    let bad = rep_file(
        r#"{"radix": 2, "dim": 2, "initial": ["1", "0"], "digit_mats": [[["1", "0"]], [["1", "0"], ["0", "1"]]]}"#,
    );
    let out = stdout(&[
        "validate-rep",
        "--rep",
        bad.path().to_str().unwrap(),
        "--json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["shapes_ok"], false);
    let shifted =
        rep_file(r#"{"radix": 2, "dim": 1, "initial": ["2"], "digit_mats": [[["1/2"]], [["1"]]]}"#);
    assert_eq!(
        stdout(&["validate-rep", "--rep", shifted.path().to_str().unwrap()]),
        "shapes_ok,leading_zero_invariant\ntrue,false\n"
    );
}

#[test]
fn exponent_reports() {
    let v: Value = serde_json::from_str(&stdout(&[
        "exponent",
        "--builtin",
        "t-eta",
        "--lift",
        "2",
        "--json",
    ]))
    .unwrap();
    assert_eq!(v["exponent"], 0.5);
    assert_eq!(v["radix"], 4);
    assert_eq!(v["rho_exact"], "2");
    let csv = stdout(&["exponent", "--builtin", "eta-squared"]);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert!((row[0].parse::<f64>().unwrap() - 0.357018636).abs() < 1e-9);
    assert_eq!(row[2], "true");
}

#[test]
fn dims_rows() {
    let out = stdout(&["dims", "--terms", "10000"]);
    let names: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(names[0], "correlation_closed_form");
    assert_eq!(names.len(), 5);
    assert_eq!(code(&["dims", "--terms", "10"]), 2);
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &[
            "lower-table",
            "--n-max",
            "12",
            "--no-timing",
            "--threads",
            "3",
        ][..],
        &[
            "upper-table",
            "--n-max",
            "18",
            "--no-timing",
            "--threads",
            "5",
        ],
        &["twist", "--seq", "rs", "--x-max", "3000"],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
}
