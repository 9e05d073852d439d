use rotinv::cli::{exit, run, Outcome, SCHEMA_VERSION};
use serde_json::Value;

fn go(args: &[&str]) -> Outcome {
    run(std::iter::once("rotinv").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = go(args);
    let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {out:?}"));
    (v, out.code)
}

#[test]
fn record_envelope() {
    let (v, code) = json(&["wigner", "3j", "0", "0", "0", "0", "0", "0"]);
    assert_eq!(code, exit::OK);
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["tool"], "rotinv");
    assert_eq!(v["command"], "wigner");
    assert!(v["version"].is_string());
    assert_eq!(v["results"]["exact"], "+√1");
}

#[test]
fn wigner_symbols() {
    let (v, code) = json(&["wigner", "6j", "1", "3/2", "5/2", "3/2", "1", "1"]);
    assert_eq!(code, exit::OK);
    assert_eq!(v["results"]["exact"], "-√(1/40)");
    let (v, _) = json(&["wigner", "cg", "1/2", "1/2", "1/2", "-1/2", "0", "0"]);
    assert_eq!(v["results"]["exact"], "+√(1/2)");
    let (v, _) = json(&["wigner", "3j", "1", "1", "0", "0", "0", "0"]);
    assert_eq!(v["results"]["exact"], "-√(1/3)");
    let (v, _) = json(&["wigner", "3j", "1", "1", "2", "1", "-1", "0"]);
    assert_eq!(v["results"]["exact"], "+√(1/30)");
}

#[test]
fn strict_zeros() {
    // selection-rule zero without --strict is an ordinary result
    let (v, code) = json(&["wigner", "3j", "1", "1", "1", "0", "0", "0"]);
    assert_eq!(code, exit::OK);
    assert_eq!(v["results"]["value"], 0.0);
    let out = go(&["wigner", "3j", "1", "1", "1", "0", "0", "0", "--strict"]);
    assert_eq!(out.code, exit::STRICT_ZERO);
    let out = go(&["wigner", "cg", "1", "1", "1", "0", "2", "0", "--strict"]);
    assert_eq!(out.code, exit::STRICT_ZERO);
    let out = go(&["wigner", "6j", "1", "1", "3", "1", "1", "1", "--strict"]);
    assert_eq!(out.code, exit::STRICT_ZERO);
    // nonzero symbol passes strict
    assert_eq!(go(&["wigner", "3j", "1", "1", "0", "0", "0", "0", "--strict"]).code, exit::OK);
}

#[test]
fn usage_errors() {
    for args in [
        &["wigner", "3j", "1/2", "1", "1", "0", "0", "0"][..],
        &["wigner", "3j", "1", "1", "1", "3", "-3", "0"],
        &["wigner", "3j", "x", "1", "1", "0", "0", "0"],
        &["lmatrix", "2", "1"],
        &["geometry", "-N", "2"],
        &["geometry", "-N", "4", "--samples", "100"],
        &["classify", "-N", "4"],
        &["classify", "-N", "4", "--p", "0.5,0.5"],
        &["classify", "-N", "4", "--p", "0.9,0.2,0.1"],
        &["classify", "-N", "4", "--beta", "0,0", "--samples", "10"],
        &["frobnicate"],
    ] {
        let out = go(args);
        assert_eq!(out.code, exit::USAGE, "{args:?}: {out:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(go(&["--help"]).code, exit::OK);
    assert_eq!(go(&["--version"]).code, exit::OK);
}

#[test]
fn lmatrix_spin_one() {
    let (v, code) = json(&["lmatrix", "1", "3/2"]);
    assert_eq!(code, exit::OK);
    assert_eq!(v["results"]["methods_agree"], true);
    assert_eq!(v["results"]["columns_j"], serde_json::json!(["1/2", "3/2", "5/2"]));
    let m = &v["results"]["matrix"];
    // first row sqrt((2J+1)/(N1 N2))
    for (c, dj) in [2.0, 4.0, 6.0].iter().enumerate() {
        assert!((m[0][c].as_f64().unwrap() - (dj / 12.0f64).sqrt()).abs() < 1e-15);
    }
    let (v, _) = json(&["lmatrix", "2", "5/2", "--method", "closed-rows"]);
    assert_eq!(v["results"]["defined_rows"], serde_json::json!([true, true, true, false, false]));
    assert!(v["results"]["matrix"][3][0].is_null());
}

#[test]
fn csv_output() {
    let out = go(&["lmatrix", "1/2", "1/2", "--format", "csv"]);
    assert_eq!(out.code, exit::OK);
    let mut rd = csv::Reader::from_reader(out.stdout.as_bytes());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["K", "J=0", "J=1"]);
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    let x: f64 = rows[1][1].parse().unwrap();
    assert_eq!(x, -(3f64.sqrt()) / 2.0);
    // 17 significant digits
    assert_eq!(rows[0][1].split('e').next().unwrap().len(), 18);
}

#[test]
fn geometry_even_and_odd() {
    let (v, code) = json(&["geometry", "-N", "4"]);
    assert_eq!(code, exit::OK);
    let r = &v["results"];
    let f = r["vertices"]["F"][1].as_f64().unwrap();
    assert!((f - 0.4f64.sqrt()).abs() < 1e-12);
    assert_eq!(r["separable_region"]["exact"], false);
    assert_eq!(r["ellipse"]["points"].as_array().unwrap().len(), 101);
    assert!((r["line_h"]["beta2"].as_f64().unwrap() - f).abs() < 1e-12);

    let (v, _) = json(&["geometry", "-N", "5"]);
    let r = &v["results"];
    assert!(r["vertices"].get("F").is_none());
    assert_eq!(r["separable_region"]["equals_ppt_polygon"], true);
    assert_eq!(r["separable_region"]["vertices"], r["ppt_polygon"]);
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["geometry", "-N", "5", "--samples", "3000", "--seed", "42"];
    let a = go(&args);
    assert_eq!(a.code, exit::OK);
    assert_eq!(a, go(&args));
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    let ratio = v["results"]["cloud"]["hull_area_over_ppt_area"].as_f64().unwrap();
    assert!(ratio > 0.9 && ratio <= 1.0 + 1e-9);
    let b = go(&["geometry", "-N", "5", "--samples", "3000", "--seed", "43"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn out_file_holds_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eps.csv");
    let out = go(&["epsilon", "-N", "6", "--grid", "11", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, exit::OK);
    let table = std::fs::read_to_string(&path).unwrap();
    let mut rd = csv::Reader::from_reader(table.as_bytes());
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 11);
    let last: f64 = rows[10][1].parse().unwrap();
    let want = (8.0f64 * 4.0 / (2.0 * 7.0 * 5.0)).sqrt();
    assert!((last - want).abs() < 1e-12);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["results"]["monotone"], true);
    assert_eq!(v["results"]["convex"], true);
    assert_eq!(v["results"]["even_multiplicity"], true);
    assert!(v["results"]["slope_at_zero"].as_f64().unwrap().abs() < 1e-6);

    let bad = go(&["epsilon", "-N", "4", "--out", dir.path().join("no/such/dir.csv").to_str().unwrap()]);
    assert_eq!(bad.code, exit::FAILURE);
}

#[test]
fn classify_exit_codes() {
    let at_e = format!("0,{}", (5.0f64 / 8.0).sqrt());
    let cases = [
        (vec!["-N", "4", "--beta", "0,0"], exit::OK, "separable"),
        (vec!["-N", "4", "--beta", &at_e], exit::PPT_ENTANGLED, "ppt_entangled"),
        (vec!["-N", "4", "--p", "0,1,0"], exit::NPT_ENTANGLED, "npt_entangled"),
        (vec!["-N", "5", "--p", "0,1,0"], exit::NPT_ENTANGLED, "npt_entangled"),
        (vec!["-N", "4", "--beta", "0,3"], exit::NOT_A_STATE, "not_a_state"),
        (vec!["-N", "4", "--beta", "-0.3,0.6"], exit::PPT_ENTANGLED, "ppt_entangled"),
    ];
    for (args, code, verdict) in cases {
        let mut full = vec!["classify"];
        full.extend(args.iter().copied());
        let (v, got) = json(&full);
        assert_eq!(got, code, "{args:?}: {v}");
        assert_eq!(v["results"]["verdict"], verdict, "{args:?}");
        assert!(v["results"]["certificate"].as_str().is_some_and(|s| !s.is_empty()));
    }
}

#[test]
fn classify_from_probabilities() {
    // vertex C has INEQ-2 = -2/3
    let (v, _) = json(&["classify", "-N", "4", "--p", "0,1,0"]);
    let i2 = v["results"]["ppt_inequality_2"].as_f64().unwrap();
    assert!((i2 + 2.0 / 3.0).abs() < 1e-12);
    // maximally mixed state: p_J = (2J+1)/(N1 N2)
    let (v, code) = json(&["classify", "-N", "4", "--p", "0.16666666666666666,0.3333333333333333,0.5"]);
    assert_eq!(code, exit::OK);
    let b = &v["results"]["beta"];
    assert!(b[0].as_f64().unwrap().abs() < 1e-12 && b[1].as_f64().unwrap().abs() < 1e-12);
    assert!(v["results"]["witness"].as_f64().unwrap() > 0.0);
}

#[test]
fn classify_with_seed_is_reproducible() {
    let args = ["classify", "-N", "6", "--beta", "0.1,0.3", "--seed", "7", "--samples", "2000"];
    let a = go(&args);
    assert_eq!(a, go(&args));
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["inputs"]["samples"], 2000);
}
