use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ordinal_latent_cli::args::InputArgs;
use ordinal_latent_cli::ingest::{ingest, write_table};
use ordinal_latent_cli::{exit, CliError};
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn ordlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordlat")).args(args).output().unwrap()
}

fn report(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--json", "-"]);
    let out = ordlat(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    serde_json::from_str(&text[text.find("{\n").unwrap()..]).unwrap()
}

fn input(path: &Path) -> InputArgs {
    InputArgs {
        input: path.to_path_buf(),
        group_col: "group".into(),
        category_col: "category".into(),
        weight_col: None,
        x: Some("A".into()),
        y: Some("B".into()),
        levels: None,
        merge: None,
        alpha: 0.05,
        json: None,
    }
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn raw_rows_become_unit_counts() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "r.csv", "group,category\nA,1\nB,2\nA,2\nB,1\n");
    let d = ingest(&input(&p)).unwrap();
    assert_eq!(d.x.counts(), &[1.0, 1.0]);
    assert_eq!(d.y.counts(), &[1.0, 1.0]);
    assert_eq!(d.x.n_raw(), 2);
    assert!(!d.x.is_weighted());
}

#[test]
fn weights_accumulate() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "w.csv",
        "group,category,w\nA,1,100.5\nA,2,50\nA,2,100\nB,1,1\nB,2,3\nC,1,9\nA,x,4\n",
    );
    let mut a = input(&p);
    a.weight_col = Some("w".into());
    let d = ingest(&a).unwrap();
    assert_eq!(d.x.total_weight(), 250.5);
    assert_eq!(d.x.n_raw(), 3);
    assert_eq!(d.skipped_rows, 1);
    let kish = 250.5f64.powi(2) / (100.5f64.powi(2) + 50.0f64.powi(2) + 100.0f64.powi(2));
    assert!((d.x.effective_n() - kish).abs() < 1e-12);
}

#[test]
fn weighted_extract_matches_reference_tabulation() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("YEAR,EDUC,HEALTH,SAMPWEIGHT\n");
    let mut reference = [[0.0f64; 5]; 2];
    let mut state = 12345u64;
    for _ in 0..3000 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let g = (state >> 33) % 2;
        let h = (state >> 40) % 5;
        let w = 500.0 + ((state >> 20) % 7919) as f64 / 3.0;
        let label = if g == 0 { "high" } else { "low" };
        body += &format!("2006,{label},{},{w}\n", h + 1);
        reference[g as usize][h as usize] += w;
    }
    let p = write(dir.path(), "nhis.csv", &body);
    let a = InputArgs {
        group_col: "EDUC".into(),
        category_col: "HEALTH".into(),
        weight_col: Some("SAMPWEIGHT".into()),
        x: Some("high".into()),
        y: Some("low".into()),
        levels: Some(5),
        ..input(&p)
    };
    let d = ingest(&a).unwrap();
    for (s, r) in [(&d.x, reference[0]), (&d.y, reference[1])] {
        let f = ordinal_latent::estimate_cdf(s).unwrap();
        let total: f64 = r.iter().sum();
        let mut acc = 0.0;
        for (v, w) in f.values().iter().zip(r) {
            acc += w;
            assert!((v - acc / total).abs() < 1e-12);
        }
    }
}

#[test]
fn ingestion_errors_exit_with_input_code() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.csv", "group,category,w\nA,1,1\nB,2,1\nA,3,1\nB,3,1\n");
    let d = dir.path();
    let cases: Vec<Vec<String>> = vec![
        vec!["--group-col".into(), "nope".into()],
        vec!["--y".into(), "Z".into()],
        vec!["--weight-col".into(), "w".into(), "--levels".into(), "2".into()],
        vec![],
    ];
    let bad_weight = write(d, "bw.csv", "group,category,w\nA,1,abc\nB,2,1\n");
    let gap = write(d, "gap.csv", "group,category\nA,1\nB,3\n");
    for extra in &cases {
        let mut args = vec!["identify".to_string(), "between".into(), ok.display().to_string(), "--x".into(), "A".into()];
        if !extra.iter().any(|e| e == "--y") {
            args.extend(["--y".into(), "B".into()]);
        }
        args.extend(extra.iter().cloned());
        let out = ordlat(&args.iter().map(String::as_str).collect::<Vec<_>>());
        if extra.is_empty() {
            assert_eq!(out.status.code(), Some(exit::OK));
        } else {
            assert_eq!(out.status.code(), Some(exit::INPUT), "{extra:?}");
        }
    }
    for (p, w) in [(&bad_weight, true), (&gap, false)] {
        let mut args = vec!["estimate", p.to_str().unwrap(), "--x", "A", "--y", "B"];
        if w {
            args.extend(["--weight-col", "w"]);
        }
        assert_eq!(ordlat(&args).status.code(), Some(exit::INPUT));
    }
    assert_eq!(ordlat(&["identify", "sideways", &fixture("education.csv")]).status.code(), Some(exit::USAGE));
}

#[test]
fn error_kinds_map_to_distinct_codes() {
    let a: CliError = ordinal_latent::Error::InvalidInput("x".into()).into();
    let b: CliError = ordinal_latent::Error::NotPositiveSemidefinite("x".into()).into();
    assert_eq!(a.exit_code(), exit::INPUT);
    assert_eq!(b.exit_code(), exit::NUMERICAL);
}

#[test]
fn identify_between_on_fixture() {
    let r = report(&["identify", "between", &fixture("education.csv")]);
    let set: Vec<[f64; 2]> = serde_json::from_value(r["result"]["set"].clone()).unwrap();
    let want = [[0.0161, 0.0287], [0.0734, 0.1205], [0.2957, 0.3905], [0.6427, 0.6731]];
    for (g, w) in set.iter().zip(want) {
        assert!((g[0] - w[0]).abs() < 1e-12 && (g[1] - w[1]).abs() < 1e-12);
    }
    assert_eq!(set.len(), 4);
    assert_eq!(r["schema_version"], 1);
    assert!(r["note"].as_str().unwrap().contains("(lo, hi]"));
    assert_eq!(r["input"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn nonsd1_rejected_on_large_education_sample() {
    let r = report(&["test", "nonsd1", &fixture("education.csv"), "--alpha", "0.05"]);
    assert_eq!(r["result"]["reject"], true);
}

#[test]
fn report_counts_round_trip_through_tabulated_input() {
    let dir = tempfile::tempdir().unwrap();
    let mut raw = String::from("group,category\n");
    for (g, counts) in [("A", [4, 9, 2, 7]), ("B", [8, 3, 6, 2])] {
        for (c, n) in counts.iter().enumerate() {
            for _ in 0..*n {
                raw += &format!("{g},{}\n", c + 1);
            }
        }
    }
    let p = write(dir.path(), "raw.csv", &raw);
    let ps = p.to_str().unwrap();
    let first = report(&["identify", "within-all", ps, "--x", "A", "--y", "B"]);
    let cx: Vec<f64> = serde_json::from_value(first["cdf"]["counts_x"].clone()).unwrap();
    let cy: Vec<f64> = serde_json::from_value(first["cdf"]["counts_y"].clone()).unwrap();
    let table = dir.path().join("table.csv");
    write_table(&table, &cx, &cy).unwrap();
    let second = report(&["identify", "within-all", table.to_str().unwrap()]);
    assert_eq!(first["result"], second["result"]);
    assert_eq!(first["cdf"]["f_x"], second["cdf"]["f_x"]);
    let b1 = report(&["identify", "between", ps, "--x", "A", "--y", "B"]);
    let b2 = report(&["identify", "between", table.to_str().unwrap()]);
    assert_eq!(b1["result"], b2["result"]);
}

#[test]
fn merge_and_plot_export() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("plot.tsv");
    let r = report(&["estimate", &fixture("education.csv"), "--merge", "1-2,3,4-5", "--tsv", tsv.to_str().unwrap()]);
    let f_x: Vec<f64> = serde_json::from_value(r["cdf"]["f_x"].clone()).unwrap();
    assert_eq!(f_x.len(), 3);
    assert!((f_x[0] - 0.0734).abs() < 1e-12 && (f_x[1] - 0.2957).abs() < 1e-12);
    let body = std::fs::read_to_string(tsv).unwrap();
    assert!(body.starts_with("category\tF_X\tF_Y\n"));
    assert_eq!(body.lines().count(), 4);
    let bad = ordlat(&["estimate", &fixture("education.csv"), "--merge", "1-2,4-5"]);
    assert_eq!(bad.status.code(), Some(exit::INPUT));
}

#[test]
fn bayes_on_weighted_data_warns_and_rescales() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "w.csv", "group,category,w\nA,1,2.5\nA,2,1\nA,2,3\nB,1,1\nB,2,1.5\nB,1,4\n");
    let out = ordlat(&["bayes", p.to_str().unwrap(), "--x", "A", "--y", "B", "--weight-col", "w", "--json", "-"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Kish"));
    let text = String::from_utf8(out.stdout).unwrap();
    let r: Value = serde_json::from_str(&text[text.find("{\n").unwrap()..]).unwrap();
    let counts: Vec<u64> = serde_json::from_value(r["result"]["counts_x"].clone()).unwrap();
    assert_eq!(counts.iter().sum::<u64>(), r["input"]["effective_n_x"].as_f64().unwrap().round() as u64);
    assert_eq!(r["parameters"]["seed"], 0);
}

#[test]
fn simulate_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let scen = write(
        dir.path(),
        "s.json",
        r#"{"study": "negative_control", "theorem": "within_group"}"#,
    );
    let tsv = dir.path().join("s.tsv");
    let r = report(&["simulate", scen.to_str().unwrap(), "--tsv", tsv.to_str().unwrap()]);
    assert!(r["result"][0]["outcome"]["violations"].as_u64().unwrap() > 0);
    assert!(std::fs::read_to_string(tsv).unwrap().lines().count() == 2);
    let bad = write(dir.path(), "bad.json", r#"{"study": "nope"}"#);
    assert_eq!(ordlat(&["simulate", bad.to_str().unwrap()]).status.code(), Some(exit::INPUT));
}
