use std::process::Command;

fn qmbead(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qmbead"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited normally"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn multiply_prints_the_product() {
    assert_eq!(qmbead(&["multiply", "3", "5", "--exact"]), (0, "15\n".into(), String::new()));
    assert_eq!(qmbead(&["multiply", "2.5", "1.75", "--exact"]).1, "4.375\n");
    assert_eq!(qmbead(&["multiply", "-2.5", "1.75", "--exact", "--adder", "v2"]).1, "-4.375\n");
    assert_eq!(qmbead(&["multiply", "2.5", "1.75", "--exact", "--scale-base", "2"]).1, "4.375\n");
    assert_eq!(qmbead(&["multiply", "0", "1.75"]).1, "0\n");
}

#[test]
fn seeded_verified_run() {
    let (code, out, _) = qmbead(&["multiply", "3", "5", "--shots", "100000", "--seed", "7", "--verify", "--json"]);
    assert_eq!(code, 0);
    let rec: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rec["product"], "15");
    assert_eq!(rec["verified"], true);
    assert_eq!(rec["shots"], 100_000);
    assert_eq!(rec["qubits"], 4);
    let total: u64 = rec["histogram"].as_array().unwrap().iter().map(|h| h["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 100_000);
}

#[test]
fn exit_codes() {
    // Usage errors.
    for args in [
        &["multiply", "3"][..],
        &["multiply", "3", "x"],
        &["multiply", "3", "5", "--exact", "--shots", "10"],
        &["multiply", "3", "5", "--adder", "v3"],
        &["multiply", "0.3", "5", "--scale-base", "2"],
        &["multiply", "3", "5", "--scale-base", "8"],
        &["multiply", "3", "5", "--shots", "0"],
        &["reproduce-table2", "--rows", "0"],
        &["resources", "--k-range", "3..1"],
        &["frobnicate"],
    ] {
        let (code, out, err) = qmbead(args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.is_empty() && !err.is_empty(), "{args:?}");
    }
    // Too few shots to resolve the coefficients.
    let (code, out, err) = qmbead(&["multiply", "2345", "5678", "--shots", "2", "--seed", "3", "--verify"]);
    assert_eq!(code, 2);
    assert!(!out.is_empty());
    assert!(err.contains("verification failed"));
    assert_eq!(qmbead(&["--help"]).0, 0);
}

#[test]
fn distribution_tables() {
    let (code, out, _) = qmbead(&["distribution", "3", "5", "--exact"]);
    assert_eq!(code, 0);
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(
        rows.headers().unwrap().iter().collect::<Vec<_>>(),
        ["state_bits", "gamma", "count", "probability", "coefficient"]
    );
    let rows: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| &r[4] == "1"));
    assert_eq!(&rows[0][0], "000");

    let out = qmbead(&["distribution", "33", "100", "--exact"]).1;
    let gammas: Vec<String> = csv::Reader::from_reader(out.as_bytes())
        .records()
        .map(|r| r.unwrap()[1].to_string())
        .collect();
    assert_eq!(gammas, ["2", "5", "6", "7", "10", "11"]);

    let out = qmbead(&["distribution", "1", "1", "--exact", "--format", "json"]).1;
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["gamma"], 0);
}

#[test]
fn resource_tables() {
    let out = qmbead(&["resources", "--k", "4", "--adder", "v1"]).1;
    assert_eq!(out.lines().nth(1).unwrap(), "4,v1,9,34,34,44,44");
    let out = qmbead(&["resources", "--k", "1", "--adder", "v2"]).1;
    assert!(out.lines().nth(1).unwrap().starts_with("1,v2,4,8,"));
    assert_eq!(qmbead(&["resources"]).1.lines().count(), 17);

    let out = qmbead(&["resources", "--shots-curve", "--nm", "1..64", "--c0", "2000"]).1;
    let shots: Vec<u64> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(shots.len(), 64);
    assert_eq!((shots[0], shots[1], shots[2], shots[3], shots[4], shots[63]), (4000, 8000, 16000, 16000, 32000, 256_000));

    let out = qmbead(&["resources", "--scatter"]).1;
    assert_eq!(out.lines().count(), 17);
    assert_eq!(out.lines().last().unwrap(), "16,85,13,89,13");
}

#[test]
fn circuit_dump() {
    let dir = std::env::temp_dir().join(format!("qmbead-dump-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.txt");
    let (code, _, _) = qmbead(&["multiply", "1", "1", "--exact", "--dump-circuit", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("qubits 3; B=2..3 C=1 A=0..1\n"));
    assert!(text.contains("# stage rotations elided=0\nCPR x=-1 c=2 t=1\nCPR x=0 c=2 t=0\n"));
    assert_eq!(qmbead(&["multiply", "0", "1", "--dump-circuit", path.to_str().unwrap()]).0, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reproduce_selected_rows() {
    let (code, out, _) = qmbead(&["reproduce-table2", "--rows", "1-6"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("6/6 rows pass\n"));
    let (code, out, _) = qmbead(&["reproduce-table2", "--rows", "13,16", "--json"]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows[0]["qubits"], 17);
    assert_eq!(rows[0]["final_value"].as_str().unwrap().len(), 82);
    assert_eq!(rows[1]["final_value"], "320781111437.48307872789410");
    assert_eq!((rows[1]["bits"].as_u64(), rows[1]["reference_bits"].as_u64()), (Some(85), Some(89)));
    assert_eq!(rows[1]["pass"], true);
}
