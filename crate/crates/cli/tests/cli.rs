use std::process::{Command, Output};

use serde_json::Value;

fn nitm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nitm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn report_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| {
            let (k, v) = l.split_once('=')?;
            (k.trim() == key).then(|| v.trim().to_string())
        })
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&nitm(&["--help"])), 0);
    assert_eq!(code(&nitm(&["--version"])), 0);
    assert_eq!(code(&nitm(&["sweep", "--help"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec![],
        vec!["frobnicate"],
        vec!["blasius", "--step", "-0.1"],
        vec!["blasius", "--step", "abc"],
        vec!["blasius", "--format", "xml"],
        vec!["blasius", "--sign", "2"],
        vec!["sweep", "--problem", "moving-wall"],
        vec!["sweep", "--problem", "classic", "--values", "1"],
        vec!["sweep", "--problem", "slip", "--range", "0,1"],
        vec!["critical-b", "--b-star-min", "1"],
        vec!["target", "--problem", "slip", "--b", "1"],
        vec!["target", "--problem", "slip"],
    ] {
        let o = nitm(&args);
        assert_eq!(code(&o), 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"), "{args:?}");
    }
}

#[test]
fn topfer_pair_reports_both_boundaries() {
    // Two boundaries at step 0.1 do not agree to 1e-6, so the run fails
    // numerically but still prints what it computed.
    let o = nitm(&["blasius", "--step", "0.1", "--boundaries", "4,6"]);
    assert_eq!(code(&o), 2);
    let text = stdout(&o);
    assert!(text.contains("0.332912"), "{text}");
    assert!(text.contains("0.332058"), "{text}");

    let o = nitm(&["blasius", "--step", "0.1", "--boundaries", "4,6", "--lambda-tol", "1e-2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("accepted shear = 0.332058"));
}

#[test]
fn blasius_default_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = nitm(&["blasius", "--profile", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("accepted shear = 0.332057"));

    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.lines().all(|l| !l.ends_with(',')));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["eta", "f", "fp", "fpp"]);
    assert_eq!(&rows[0][..3], &[0.0, 0.0, 0.0]);
    assert!((rows[0][3] - 0.332_057_336_215_196_3).abs() < 1e-6);
    assert!((rows.last().unwrap()[2] - 1.0).abs() < 1e-12);
}

#[test]
fn sweep_csv_round_trips_against_json() {
    let base = ["sweep", "--problem", "slip", "--values", "0,0.1,0.5,1,5,10"];
    let csv = nitm(&[&base[..], &["--format", "csv"]].concat());
    let json = nitm(&[&base[..], &["--format", "json"]].concat());
    assert_eq!(code(&csv), 0);
    assert_eq!(code(&json), 0);
    let (header, rows) = csv_rows(&stdout(&csv));
    assert_eq!(header, ["star_param", "fp_inf_star", "lambda", "physical_param", "f0", "fp0", "fpp0"]);
    let parsed: Value = serde_json::from_str(&stdout(&json)).unwrap();
    let objects = parsed.as_array().unwrap();
    assert_eq!(objects.len(), rows.len());
    for (row, obj) in rows.iter().zip(objects) {
        for (key, v) in header.iter().zip(row) {
            // Bit-for-bit: both encodings carry every digit.
            assert_eq!(obj[key].as_f64().unwrap(), *v, "{key}");
        }
    }
}

#[test]
fn table_matches_json() {
    let base = ["sweep", "--problem", "gasification", "--values", "0,0.25,0.5,1,2"];
    let table = stdout(&nitm(&base));
    let json: Value = serde_json::from_str(&stdout(&nitm(&[&base[..], &["--format", "json"]].concat()))).unwrap();
    let mut lines = table.lines();
    let header: Vec<&str> = lines.next().unwrap().split_whitespace().collect();
    for (line, obj) in lines.zip(json.as_array().unwrap()) {
        for (key, cell) in header.iter().zip(line.split_whitespace()) {
            let shown: f64 = cell.parse().unwrap();
            let exact = obj[*key].as_f64().unwrap();
            assert!((shown - exact).abs() <= 5e-7 * exact.abs().max(1.0), "{key}: {cell} vs {exact}");
        }
    }
}

#[test]
fn gasification_sweep_rows() {
    let o = nitm(&["sweep", "--problem", "gasification", "--values", "0,0.25,0.5,1,2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    // (s*, f*'(inf), f''(0), s) from an independent fine-step integration.
    let expected = [
        (0.0, 1.655190, 0.469600, 0.0),
        (0.25, 2.025899, 0.346795, 0.506475),
        (0.5, 2.486424, 0.255057, 1.243212),
        (1.0, 3.728169, 0.138917, 3.728169),
        (2.0, 7.771217, 0.046160, 15.542434),
    ];
    for (row, (s_star, fp_inf, fpp0, s)) in rows.iter().zip(expected) {
        assert_eq!(row["star_param"].as_f64().unwrap(), s_star);
        assert!((row["fp_inf_star"].as_f64().unwrap() - fp_inf).abs() < 1e-4 * fp_inf);
        assert!((row["fpp0"].as_f64().unwrap() - fpp0).abs() < 1e-4 * fpp0);
        assert!((row["physical_param"].as_f64().unwrap() - s).abs() <= 1e-4 * s);
    }
    // Published s* = 0 shear, with its own tolerance.
    assert!((rows[0]["fpp0"].as_f64().unwrap() - 0.469553).abs() < 1e-4);
}

#[test]
fn slip_zero_is_classic() {
    let o = nitm(&["sweep", "--problem", "slip", "--values", "0", "--format", "csv"]);
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    let r = &rows[0];
    assert_eq!(r[3], 0.0);
    assert_eq!(r[5], 0.0);
    assert!((r[6] - 0.332_057_336_215_196_3).abs() < 1e-6);
}

#[test]
fn moving_wall_sweep_row() {
    let o = nitm(&["sweep", "--problem", "moving-wall", "--values", "-1", "--sign", "+1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let b = rows[0]["physical_param"].as_f64().unwrap();
    assert!((b + 0.521441).abs() < 1e-4 * 0.521441, "{b}");
}

#[test]
fn sweep_errors_are_cells() {
    // -1 on the minus branch blows up; 5 succeeds.
    let o = nitm(&["sweep", "--problem", "moving-wall", "--values", "-1,5", "--sign", "-1", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("-1,ERROR("));
    assert_eq!(lines[1].split(',').count(), 7);
    assert!(!lines[2].contains("ERROR"));

    let o = nitm(&["sweep", "--problem", "moving-wall", "--values", "-1,-3", "--sign", "-1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn critical_b_reports() {
    let o = nitm(&["critical-b"]);
    assert_eq!(code(&o), 0);
    let b_c: f64 = report_value(&stdout(&o), "b_c").parse().unwrap();
    assert!((b_c + 0.548210).abs() < 1e-3);

    let o = nitm(&["critical-b", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["b_c"].as_f64().unwrap() - b_c).abs() < 1e-6);
    assert!(v["b_star"].as_f64().unwrap() < 0.0);
}

#[test]
fn sakiadis_target() {
    let o = nitm(&["target", "--problem", "moving-wall", "--b", "1", "--sign", "-1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let fpp0: f64 = report_value(&text, "fpp0").parse().unwrap();
    assert!((fpp0 + 0.443715).abs() < 5e-4);
    assert_eq!(report_value(&text, "status"), "PASS");
}

#[test]
fn series_check_order() {
    let o = nitm(&["series-check", "--eta-max", "0.5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["fitted_order"].as_f64().unwrap() >= 13.0);
    assert_eq!(v["status"], "PASS");
}

#[test]
fn rubel_valid() {
    let o = nitm(&["rubel", "--M", "4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(report_value(&text, "status"), "VALID");
    let bound: f64 = report_value(&text, "bound").parse().unwrap();
    let err: f64 = report_value(&text, "max_error").parse().unwrap();
    assert!(err <= bound);
}

#[test]
fn single_solves() {
    let o = nitm(&["slip", "--c-star", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["physical_param"].as_f64().unwrap() - 1.562257).abs() < 1e-4 * 1.562257);

    let o = nitm(&["gasification", "--s-star", "-1"]);
    assert_eq!(code(&o), 1);
    let o = nitm(&["moving-wall", "--b-star", "-3", "--sign", "-1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("report.csv");
    std::fs::write(&cfg, format!("# run defaults\nstep = 0.1\nboundaries = 4,6\nformat = csv\nout = {}\n", out.display()))
        .unwrap();
    let cfg = cfg.to_str().unwrap();

    // Config alone: the Töpfer pair, written to the configured file.
    let o = nitm(&["blasius", "--config", cfg]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).is_empty());
    let (header, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(header, ["eta_inf_star", "lambda", "shear", "accepted"]);
    assert_eq!(rows.len(), 2);

    // Flags win over the file.
    let json_out = dir.path().join("r.json");
    let o = nitm(&["blasius", "--config", cfg, "--lambda-tol", "0.01", "--format", "json", "--out", json_out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json_out).unwrap()).unwrap();
    assert_eq!(v["boundaries"].as_array().unwrap().len(), 2);
    assert_eq!(v["eta_inf_star"].as_f64().unwrap(), 6.0);

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "colour = red\n").unwrap();
    assert_eq!(code(&nitm(&["blasius", "--config", bad.to_str().unwrap()])), 1);
    assert_eq!(code(&nitm(&["blasius", "--config", "/nonexistent/cfg"])), 1);
}
