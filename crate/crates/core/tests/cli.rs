use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semple-gw"))
        .args(args)
        .env_remove("SEMPLE_GW_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_csv_matches_reference_grid() {
    let o = run(&["table", "--max-degree", "6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "label,1,2,3,4,5,6");
    assert_eq!(lines[1], "h2hd,1,1,10,428,51040,13300176");
    assert_eq!(lines[13], "hdz.hdz,9,0,63,22860,6556140,2948122440");
    assert_eq!(lines.len(), 14);
}

#[test]
fn table_seed_column_and_json() {
    let o = run(&["table", "--max-degree", "1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["1"]["hd2z"], "-3");
    assert_eq!(v.as_object().unwrap().len(), 1);
}

#[test]
fn table_output_is_deterministic() {
    let a = run(&["table", "--max-degree", "7", "--format", "json"]);
    let b = run(&["table", "--max-degree", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let h2hd: u128 = v["7"]["h2hd"].as_str().unwrap().parse().unwrap();
    let h2z: u128 = v["7"]["h2z"].as_str().unwrap().parse().unwrap();
    assert_eq!(h2z, 3 * h2hd);
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.json");
    let p = path.to_str().unwrap();
    let a = run(&[
        "table",
        "--max-degree",
        "4",
        "--format",
        "csv",
        "--cache",
        p,
    ]);
    assert!(a.status.success());
    assert!(path.exists());
    let b = run(&[
        "table",
        "--max-degree",
        "4",
        "--format",
        "csv",
        "--cache",
        p,
    ]);
    assert_eq!(a.stdout, b.stdout);
    let ok = run(&["verify", "--max-degree", "4", "--cache", p]);
    assert!(ok.status.success(), "{}", stdout(&ok));

    std::fs::write(&path, "{\"1\": {\"h2hd\": \"7\"}}").unwrap();
    let bad = run(&["verify", "--max-degree", "4", "--cache", p]);
    assert_eq!(bad.status.code(), Some(4));
    assert!(stdout(&bad).contains("FAIL cache"));
}

#[test]
fn contact_and_count() {
    assert_eq!(
        stdout(&run(&["contact", "--degree", "4"])),
        "1452c+1284č+428κ\n"
    );
    let o = run(&[
        "contact", "--degree", "3", "--c", "2", "--class", "2", "--kappa", "0", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], "102");
    assert_eq!(v["formula"], "21c+30č+10κ");
    assert_eq!(v["degree"], 3);
    assert!(stdout(&run(&[
        "count",
        "--degree",
        "2",
        "--points",
        "4",
        "--tangent",
        "2,2,0"
    ]))
    .starts_with("6\n"));
    assert_eq!(
        stdout(&run(&["count", "--degree", "3", "--points", "8"])),
        "12\n"
    );
    let o = run(&[
        "count",
        "--degree",
        "2",
        "--points",
        "3",
        "--osculate-plucker",
        "3,0,1",
    ]);
    assert_eq!(stdout(&o), "10\nformula: 3č+κ\n");
}

#[test]
fn unsupported_profile_exit_code() {
    let o = run(&[
        "count",
        "--degree",
        "3",
        "--points",
        "4",
        "--osculate",
        "2,2,0",
        "--osculate",
        "2,2,0",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("unsupported profile"), "{err}");
    assert!(err.contains("<(h2)^4.hd2z.hd2z>_3"), "{err}");
}

#[test]
fn chow_eval() {
    assert_eq!(stdout(&run(&["chow-eval", "i*z"])), "0\n");
    assert_eq!(
        stdout(&run(&["chow-eval", "h^2*hd*z", "--integrate"])),
        "1\n"
    );
    assert_eq!(
        stdout(&run(&["chow-eval", "hz - 3*hd^2", "--basis", "i"])),
        "hi\n"
    );
    assert_eq!(run(&["chow-eval", "h + q"]).status.code(), Some(2));
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "--max-degree", "1"]);
    assert!(o.status.success());
    let o = run(&["verify", "--max-degree", "6", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 8);
    assert!(reports.iter().all(|r| r["status"] == "pass"));
}
