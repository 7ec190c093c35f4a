use std::io::Write;

use okdens::cli::{run_cli, EXIT_NOT_UNIMODULAR, EXIT_OK, EXIT_USAGE};
use okdens::montecarlo::SWEEP_CSV_HEADER;
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("okdens").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", r.out))
}

fn matrix_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn assert_usage_error(r: &Run) {
    assert_eq!(r.code, EXIT_USAGE, "stdout: {}", r.out);
    assert_eq!(r.err.lines().count(), 1, "diagnostic: {:?}", r.err);
    assert!(r.out.is_empty());
}

#[test]
fn density_for_sqrt2() {
    let r = run(&["density", "--field", "-2,0,1", "--n", "2", "--m", "3"]);
    assert_eq!(r.code, EXIT_OK);
    let v = json(&r);
    let value = v["value"].as_f64().unwrap();
    let tail = v["tail_bound"].as_f64().unwrap();
    assert!((value - 0.60491).abs() <= 1e-5 + tail, "{value}");
    assert_eq!(v["prime_bound"], 1_000_000);
}

#[test]
fn density_accepts_aliases_and_prime_bound() {
    let by_alias = json(&run(&[
        "density",
        "--field",
        "Q(sqrt2)",
        "--n",
        "1",
        "--m",
        "2",
        "--prime-bound",
        "1000",
    ]));
    let by_list = json(&run(&[
        "density",
        "--field",
        "[-2,0,1]",
        "--n",
        "1",
        "--m",
        "2",
        "--prime-bound",
        "1000",
    ]));
    assert_eq!(by_alias, by_list);
    assert_eq!(by_alias["prime_bound"], 1000);
}

#[test]
fn check_not_unimodular() {
    let f = matrix_file(r#"{"field":[0,1],"n":1,"m":2,"entries":[[[2],[4]]]}"#);
    let r = run(&["check", "--matrix", f.path().to_str().unwrap()]);
    assert_eq!(r.code, EXIT_NOT_UNIMODULAR);
    let v = json(&r);
    assert_eq!(v["verdict"], false);
    assert_eq!(v["index"], 2);
    assert_eq!(v["witness"]["p"], 2);
}

#[test]
fn check_unimodular_with_both_methods() {
    let f = matrix_file(r#"{"field":[-2,0,1],"n":1,"m":2,"entries":[[[1,1],[0,0]]]}"#);
    let r = run(&[
        "check",
        "--matrix",
        f.path().to_str().unwrap(),
        "--method",
        "both",
    ]);
    assert_eq!(r.code, EXIT_OK);
    let v = json(&r);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["verdict"] == true));
    assert_eq!(reports[1]["index"], 1);
}

#[test]
fn check_input_errors() {
    assert_usage_error(&run(&["check", "--matrix", "/nonexistent/m.json"]));
    let f = matrix_file(r#"{"field":[0,1],"n":2,"m":2,"entries":[[[1],[0]]]}"#);
    assert_usage_error(&run(&["check", "--matrix", f.path().to_str().unwrap()]));
    let f = matrix_file("not json");
    assert_usage_error(&run(&["check", "--matrix", f.path().to_str().unwrap()]));
    let f = matrix_file(r#"{"field":[0,1],"n":1,"m":2,"entries":[[[1],[0]]]}"#);
    assert_usage_error(&run(&[
        "check",
        "--matrix",
        f.path().to_str().unwrap(),
        "--method",
        "smith",
    ]));
}

#[test]
fn brute_prints_fraction_and_decimal() {
    let r = run(&[
        "brute", "--field", "0,1", "--n", "1", "--m", "2", "--bound", "1",
    ]);
    assert_eq!(r.code, EXIT_OK);
    let v = json(&r);
    assert_eq!(v["exact"], "3/4");
    assert_eq!(v["decimal"], 0.75);
    let v = json(&run(&[
        "brute", "--field", "Q", "--n", "1", "--m", "2", "--bound", "2",
    ]));
    assert_eq!(v["exact"], "12/16");
}

#[test]
fn brute_over_budget_is_an_input_error() {
    assert_usage_error(&run(&[
        "brute", "--field", "Q", "--n", "3", "--m", "5", "--bound", "5",
    ]));
}

#[test]
fn experiment_report_round_trips() {
    let r = run(&[
        "experiment",
        "--field",
        "x^3+x+1",
        "--n",
        "1",
        "--m",
        "2",
        "--samples",
        "3000",
        "--seed",
        "9",
        "--workers",
        "2",
        "--prime-bound",
        "2000",
    ]);
    assert_eq!(r.code, EXIT_OK);
    let v = json(&r);
    assert_eq!(v["field"], "1,1,0,1");
    assert_eq!(v["B"], 3);
    assert_eq!(v["N"], 3000);
    assert_eq!(v["seed"], 9);
    let hits = v["hits"].as_u64().unwrap();
    assert_eq!(v["empirical"].as_f64().unwrap(), hits as f64 / 3000.0);
    assert!(v["predicted"]["value"].as_f64().unwrap() > 0.8);
    let again = json(&run(&[
        "experiment",
        "--field",
        "x^3+x+1",
        "--n",
        "1",
        "--m",
        "2",
        "--samples",
        "3000",
        "--seed",
        "9",
        "--workers",
        "1",
        "--prime-bound",
        "2000",
    ]));
    assert_eq!(again["hits"], v["hits"]);
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let r = run(&[
        "sweep",
        "--field",
        "Q(sqrt2)",
        "--n",
        "1",
        "--m",
        "3",
        "--b-start",
        "5",
        "--b-end",
        "25",
        "--b-step",
        "10",
        "--samples",
        "1000",
        "--prime-bound",
        "1000",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, SWEEP_CSV_HEADER);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    for (row, b) in rows.iter().zip(["5", "15", "25"]) {
        assert_eq!(row.len(), SWEEP_CSV_HEADER.len());
        assert_eq!(&row[0], "-2,0,1");
        assert_eq!(&row[3], b);
    }
}

#[test]
fn sweep_requires_csv_and_valid_range() {
    assert_usage_error(&run(&[
        "sweep",
        "--field",
        "Q",
        "--n",
        "1",
        "--m",
        "2",
        "--b-start",
        "1",
        "--b-end",
        "2",
        "--b-step",
        "1",
    ]));
    assert_usage_error(&run(&[
        "sweep",
        "--field",
        "Q",
        "--n",
        "1",
        "--m",
        "2",
        "--b-start",
        "9",
        "--b-end",
        "2",
        "--b-step",
        "1",
        "--csv",
        "-",
    ]));
    assert_usage_error(&run(&[
        "sweep",
        "--field",
        "Q",
        "--n",
        "1",
        "--m",
        "2",
        "--b-start",
        "1",
        "--b-end",
        "2",
        "--b-step",
        "0",
        "--csv",
        "-",
    ]));
}

#[test]
fn field_info_reports_splittings() {
    let r = run(&["field-info", "--field", "x^3+x+1", "--show-primes", "7"]);
    assert_eq!(r.code, EXIT_OK);
    let v = json(&r);
    assert_eq!(v["degree"], 3);
    assert_eq!(v["disc"], -31);
    assert_eq!(v["maximality"]["status"], "verified");
    let splits = v["splits"].as_array().unwrap();
    let ps: Vec<u64> = splits.iter().map(|s| s["p"].as_u64().unwrap()).collect();
    assert_eq!(ps, [2, 3, 5, 7]);
    for s in splits {
        let total: u64 = s["factors"]
            .as_array()
            .unwrap()
            .iter()
            .map(|q| q["e"].as_u64().unwrap() * q["f"].as_u64().unwrap())
            .sum();
        assert_eq!(total, 3);
    }
}

#[test]
fn nonmaximal_order_needs_override() {
    assert_usage_error(&run(&["field-info", "--field", "3,0,1"]));
    let r = run(&["field-info", "--field", "3,0,1", "--allow-nonmaximal"]);
    assert_eq!(r.code, EXIT_OK);
    let v = json(&r);
    assert_eq!(v["maximality"]["status"], "assumed_by_user");
    assert_eq!(v["maximality"]["failed"], serde_json::json!([2]));
    assert_eq!(v["splits"][0]["p"], 2);
    assert!(v["warning"].is_string());
}

#[test]
fn unverified_irreducibility_needs_override() {
    assert_usage_error(&run(&[
        "density",
        "--field",
        "1,0,0,0,1",
        "--n",
        "1",
        "--m",
        "2",
    ]));
}

#[test]
fn malformed_flags_exit_two() {
    assert_usage_error(&run(&["density", "--field", "1,x", "--n", "1", "--m", "2"]));
    assert_usage_error(&run(&["density", "--field", "Q", "--n", "2", "--m", "2"]));
    assert_usage_error(&run(&["density", "--field", "Q", "--n", "1"]));
    assert_usage_error(&run(&[
        "density",
        "--field",
        "Q",
        "--n",
        "1",
        "--m",
        "2",
        "--prime-bound",
        "1",
    ]));
    assert_usage_error(&run(&[
        "experiment",
        "--field",
        "Q",
        "--n",
        "1",
        "--m",
        "2",
        "--bound",
        "0",
    ]));
    assert_usage_error(&run(&[
        "experiment",
        "--field",
        "Q",
        "--n",
        "1",
        "--m",
        "2",
        "--workers",
        "0",
    ]));
    assert_usage_error(&run(&["frobnicate"]));
    assert_usage_error(&run(&[]));
}

#[test]
fn help_goes_to_stdout() {
    let r = run(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("field-info"));
}
