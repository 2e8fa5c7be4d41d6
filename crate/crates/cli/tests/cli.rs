use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rla_core::torirank::{invariant_report, ReportOptions};
use rla_core::{Family, FamilySpec};
use serde_json::Value;

fn rla(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rla"))
        .args(args)
        .env("RLA_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn build_writes_algebra_json() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = dir.path().join("k3.json");
    let o = rla(&[
        "build",
        "--family",
        "K",
        "--n",
        "3",
        "--p",
        "5",
        "-o",
        k3.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = json_file(&k3);
    assert_eq!(v["dim"], 125);
    assert_eq!(v["torus"].as_array().unwrap().len(), 2);
    assert_eq!(v["realization"]["m"], 125);

    let o = rla(&["build", "--family", "P", "--r", "1", "--p", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["dim"], 9);
}

#[test]
fn invalid_spec_exits_2() {
    let o = rla(&["build", "--family", "K", "--n", "4", "--p", "5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd"));
    assert_eq!(
        code(&rla(&["build", "--family", "Q", "--n", "1", "--p", "3"])),
        2
    );
    assert_eq!(
        code(&rla(&["build", "--family", "W", "--n", "1", "--p", "4"])),
        2
    );
}

#[test]
fn invariants_match_in_process_report() {
    let dir = tempfile::tempdir().unwrap();
    for (family, n, p, rank) in [
        (Family::K, 3, 3, 2),
        (Family::W, 1, 3, 1),
        (Family::HPrime, 2, 3, 2),
    ] {
        let spec = FamilySpec::new(family, n, p).unwrap();
        let path = dir.path().join(format!("{}.json", n));
        let sym = family.symbol();
        let o = rla(&[
            "build",
            "--family",
            sym,
            "--n",
            &n.to_string(),
            "--p",
            &p.to_string(),
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        let o = rla(&["invariants", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let expected = serde_json::to_string_pretty(
            &invariant_report(spec, ReportOptions::default()).unwrap(),
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(o.stdout.clone()).unwrap().trim_end(),
            expected
        );
        assert_eq!(stdout_json(&o)["rank"], rank);
    }
}

#[test]
fn corrupted_or_tampered_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"p\": 3, \"name\": ").unwrap();
    assert_eq!(code(&rla(&["invariants", bad.to_str().unwrap()])), 2);
    assert_eq!(
        code(&rla(&[
            "invariants",
            dir.path().join("missing.json").to_str().unwrap()
        ])),
        2
    );

    let w1 = dir.path().join("w1.json");
    rla(&[
        "build",
        "--family",
        "W",
        "--n",
        "1",
        "--p",
        "3",
        "-o",
        w1.to_str().unwrap(),
    ]);
    let mut v = json_file(&w1);
    let c = v["bracket"][0][2][0][1].as_u64().unwrap();
    v["bracket"][0][2][0][1] = Value::from((c + 1) % 3);
    fs::write(&w1, v.to_string()).unwrap();
    let o = rla(&["invariants", w1.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("disagree"));
}

#[test]
fn rank_centralizer_weights_quotient() {
    let dir = tempfile::tempdir().unwrap();
    let w1 = dir.path().join("w1.json");
    let w1s = w1.to_str().unwrap();
    rla(&["build", "--family", "W", "--n", "1", "--p", "3", "-o", w1s]);

    let o = rla(&["rank", w1s]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["centralizer_dim"], 1);

    let o = rla(&["centralizer", w1s, "--coords", "1,1,0"]);
    assert_eq!(stdout_json(&o)["dim"], 1);
    let elem = dir.path().join("e.json");
    fs::write(&elem, r#"{"algebra":"W(1)","coords":[1,0,0]}"#).unwrap();
    let o = rla(&["centralizer", w1s, "--element", elem.to_str().unwrap()]);
    assert_eq!(stdout_json(&o)["basis"][0], "d1");
    assert_eq!(code(&rla(&["centralizer", w1s, "--coords", "1,0"])), 2);

    let o = rla(&["weights", w1s]);
    let v = stdout_json(&o);
    assert_eq!(v["zero_weight_dim"], 1);
    assert_eq!(v["common_nonzero_dim"], 1);

    let kpp = dir.path().join("kpp.json");
    rla(&[
        "build",
        "--family",
        "K''",
        "--n",
        "3",
        "--p",
        "3",
        "-o",
        kpp.to_str().unwrap(),
    ]);
    let o = rla(&["centralizer", kpp.to_str().unwrap(), "--poly", "1+x3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["dim"], 9);
    assert_eq!(
        code(&rla(&[
            "centralizer",
            kpp.to_str().unwrap(),
            "--poly",
            "x9"
        ])),
        2
    );
    assert_eq!(code(&rla(&["centralizer", w1s, "--poly", "x1"])), 2);
    assert_eq!(code(&rla(&["centralizer", w1s])), 2);

    let o = rla(&["quotient", kpp.to_str().unwrap(), "--by", "derived"]);
    assert_eq!(code(&o), 0);
    let q = stdout_json(&o);
    assert_eq!(q["dim"], 1);
    assert!(q["realization"].is_null());
    // span{d1} is not an ideal of W(1)
    assert_eq!(code(&rla(&["quotient", w1s, "--ideal", "1,0,0"])), 2);
}

#[test]
fn density_module_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    for (lambda, factors) in [(0, vec![1, 4]), (2, vec![5]), (4, vec![1, 4])] {
        let o = rla(&[
            "module",
            "--density",
            "5",
            "--lambda",
            &lambda.to_string(),
            "-o",
            m.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        assert_eq!(json_file(&m)["dimV"], 5);
        let o = rla(&["module", m.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout_json(&o)["sorted"], serde_json::json!(factors));
    }
    assert_eq!(
        code(&rla(&["module", "--density", "5", "--lambda", "5"])),
        2
    );
}

#[test]
fn verify_paper_p3() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = rla(&[
        "verify-paper",
        "--p",
        "3",
        "--max-n",
        "3",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = json_file(&report);
    assert_eq!(r["summary"]["failed"], 0);
    let claims = r["claims"].as_array().unwrap();
    let find = |id: &str| {
        claims
            .iter()
            .find(|c| c["claim"] == id)
            .unwrap_or_else(|| panic!("{id}"))
    };
    assert_eq!(find("selfcentralizing(K(3))@p3")["computed"], true);
    assert_eq!(find("rk(K(3))@p3")["computed"], 2);
    let ids: Vec<&str> = claims
        .iter()
        .map(|c| c["claim"].as_str().unwrap())
        .collect();
    assert!(ids.windows(2).all(|w| w[0] <= w[1]));
    assert!(claims.iter().all(|c| c["source"].is_string()));
}

#[test]
fn verify_paper_p7() {
    let o = rla(&["verify-paper", "--p", "7", "--max-n", "1"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.lines().any(|l| l == "PASS rk(W(1))@p7"));
    assert_eq!(code(&rla(&["verify-paper", "--p", "4"])), 2);
}
