use std::path::Path;
use std::process::{Command, Output};

fn primemeans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_primemeans"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_prints_the_expansion() {
    let cases = [
        ("5", "e/2 + e/(4L) + e/L² + 61e/(12L³) + 1463e/(48L⁴) + 100367e/(480L⁵)"),
        ("1", "e/2 + e/(4L)"),
        ("0", "e/2"),
    ];
    for (m, want) in cases {
        let o = primemeans(&["expand", m]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want);
    }
}

#[test]
fn constants_lists_sequences_and_polynomials() {
    let o = primemeans(&["constants", "--order", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("k: 1, 3, 13, 71"));
    assert!(text.contains("r: 1/2, 3/4, 7/4, 45/8"));
    for t in ["T_1 = 1", "T_2 = 2x - 6", "T_3 = 6x² - 42x + 84"] {
        assert!(text.contains(t), "{t}");
    }
    let json: serde_json::Value =
        serde_json::from_slice(&primemeans(&["constants", "--order", "2", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["r"], serde_json::json!(["1/2", "3/4"]));
}

#[test]
fn tabulate_rows() {
    let o = primemeans(&["tabulate", "--n", "1", "--n", "5", "--n", "10", "--format", "csv"]);
    assert!(o.status.success());
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let num = |r: &csv::StringRecord, i: usize| r[i].parse::<f64>().unwrap();
    // n, p_n, A, A_err, G, G_err, D, D_err, R, R_err, ratio, ratio_err
    let first = &rows[0];
    assert_eq!((&first[0], &first[1]), ("1", "2"));
    for (i, want) in [(2, 2.0), (4, 2.0), (6, 0.0), (8, 1.0), (10, 1.0)] {
        assert!((num(first, i) - want).abs() < 1e-14, "column {i}");
    }
    assert_eq!(num(&rows[1], 2), 5.6);
    assert!((num(&rows[1], 4) - 4.70676370645477).abs() < 1e-13);
    assert_eq!(&rows[2][1], "29");
    assert_eq!(num(&rows[2], 2), 12.9);
    assert!((num(&rows[2], 10) - 1.34741488725104).abs() < 1e-13);
}

#[test]
fn tabulate_formats_agree() {
    let args = ["tabulate", "--from", "1", "--to", "200", "--step", "7"];
    let csv_out = primemeans(&[&args[..], &["--format", "csv"]].concat());
    let json_out = primemeans(&[&args[..], &["--format", "json"]].concat());
    let text_out = stdout(&primemeans(&args));
    let json: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let json_rows = json.as_array().unwrap();
    assert_eq!(rows.len(), json_rows.len());
    assert_eq!(text_out.lines().count(), rows.len() + 1);
    for ((row, j), text) in rows.iter().zip(json_rows).zip(text_out.lines().skip(1)) {
        assert_eq!(row[0], j["n"].to_string());
        for (col, key) in [(2, "a"), (4, "g"), (6, "d"), (8, "r"), (10, "ratio")] {
            let c: f64 = row[col].parse().unwrap();
            let v = j[key]["value"].as_f64().unwrap();
            assert!((c - v).abs() <= 1e-14 * v.abs().max(1.0), "n = {} {key}", &row[0]);
            assert!(text.contains(&row[col]), "text row lacks {}", &row[col]);
        }
    }
}

#[test]
fn crossover_of_d_above_one_is_ten() {
    let o = primemeans(&["crossover", "--bound", "D>1", "--to", "100000"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "10");
}

#[test]
fn exit_codes() {
    let unknown = primemeans(&["verify", "--bound", "nosuch"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("nosuch"));
    assert_eq!(primemeans(&["verify", "--bogus-flag"]).status.code(), Some(2));

    let clean = primemeans(&["verify", "--bound", "ineq-3.1", "--to", "100000"]);
    assert_eq!(clean.status.code(), Some(0));
    assert!(stdout(&clean).contains("0 violations"));

    let failing = primemeans(&["verify", "--bound", "cor-6.3", "--to", "1000"]);
    assert_eq!(failing.status.code(), Some(1));

    let too_far = Command::new(env!("CARGO_BIN_EXE_primemeans"))
        .args(["verify", "--bound", "ineq-3.1", "--to", "2000000"])
        .env("PRIMEMEANS_CAPACITY", "1000000")
        .output()
        .unwrap();
    assert_eq!(too_far.status.code(), Some(2));
}

#[test]
fn verify_formats_agree() {
    let args = [
        "verify", "--bound", "ineq-3.1", "--bound", "cor-6.3", "--bound", "thm-6.1", "--to", "20000",
    ];
    let json: serde_json::Value =
        serde_json::from_slice(&primemeans(&[&args[..], &["--format", "json"]].concat()).stdout).unwrap();
    let csv_out = primemeans(&[&args[..], &["--format", "csv"]].concat());
    let text = stdout(&primemeans(&args));
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    for (row, b) in rows.iter().zip(json["bounds"].as_array().unwrap()) {
        assert_eq!(&row[0], b["bound_id"].as_str().unwrap());
        assert_eq!(row[3], b["violation_count"].to_string());
        assert_eq!(row[4], b["indeterminate_count"].to_string());
        let m: f64 = row[5].parse().unwrap();
        assert_eq!(m, b["min_margin"]["value"].as_f64().unwrap());
        assert_eq!(row[6], b["min_margin_n"].to_string());
        assert!(text.contains(&format!("{}: ", &row[0])));
        assert!(text.contains(&format!("{} violations", &row[3])));
        assert!(text.contains(&format!("at n = {}", &row[6])));
    }
}

#[test]
fn halted_verify_resumes_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let full = dir.path().join("full.json");
    let resumed = dir.path().join("resumed.json");
    let cp_s = cp.to_str().unwrap();
    let base = [
        "verify",
        "--bound",
        "ineq-3.13",
        "--bound",
        "cor-6.5",
        "--to",
        "40000",
        "--format",
        "json",
    ];
    let o = primemeans(&[&base[..], &["--out", full.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let o = primemeans(&[&base[..], &["--checkpoint", cp_s, "--halt-at", "15000"]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(Path::new(&cp).exists());
    let o = primemeans(&[
        "resume",
        "--checkpoint",
        cp_s,
        "--format",
        "json",
        "--out",
        resumed.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&full).unwrap(), std::fs::read(&resumed).unwrap());

    std::fs::write(&cp, "{ not json").unwrap();
    let o = primemeans(&["resume", "--checkpoint", cp_s]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn monotone_reports_early_increases() {
    let o = primemeans(&["monotone", "--from", "1", "--to", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("1, 2, 3"));
    let o = primemeans(&["monotone", "--from", "226", "--to", "20000"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn catalog_lists_every_bound() {
    let o = primemeans(&["catalog", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ids: Vec<&str> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids.len(), 38);
    assert!(ids.contains(&"D>1") && ids.contains(&"ineq-3.1") && ids.contains(&"conj-monotone"));
}
