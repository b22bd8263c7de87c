use std::path::PathBuf;
use std::process::{Command, Output};

fn nncalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nncalc")).args(args).output().expect("run nncalc")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nncalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn sawtooth_gadget_reports_weight_budget() {
    let out = scratch("saw.json");
    let o = nncalc(&["gadget", "sawtooth", "--j", "6", "--L", "4", "--variant", "weights", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("≤ 24·8: PASS"), "{text}");
    let net = nncalc::json::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(net.depth(), 4);
}

#[test]
fn squash_gadget_triple() {
    let out = scratch("squash.json");
    let o = nncalc(&["gadget", "squash", "--r", "2", "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = &v["complexity"];
    assert_eq!((c["W"].as_u64(), c["L"].as_u64(), c["N"].as_u64()), (Some(6), Some(2), Some(3)));
}

#[test]
fn every_gadget_kind_builds_within_budget() {
    for (kind, extra) in [
        ("bspline", vec!["--n", "3"]),
        ("mult", vec!["--d", "3", "--r", "2"]),
        ("mult", vec!["--d", "2", "--k", "3", "--r", "3"]),
        ("tensor-bspline", vec!["--d", "3", "--n", "2"]),
        ("indicator", vec!["--d", "2", "--eps", "1/8", "--r", "1"]),
        ("localize", vec!["--r", "2"]),
        ("poly", vec!["--coeffs", "1,-2,3", "--r", "2"]),
    ] {
        let out = scratch(&format!("{kind}.json"));
        let mut args = vec!["gadget", kind, "--out", out.to_str().unwrap()];
        args.extend(extra);
        let o = nncalc(&args);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn usage_errors_exit_2() {
    let out = scratch("bad.json");
    let o = nncalc(&["gadget", "mult", "--d", "2", "--r", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(nncalc(&["gadget", "hexagon"]).status.code(), Some(2));
    assert_eq!(nncalc(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(nncalc(&["census", "--family", "cubes"]).status.code(), Some(2));
    assert_eq!(nncalc(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn census_empty_range_is_header_only() {
    let o = nncalc(&["census", "--budget-range", "5..5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stdout(&o).starts_with("seed,stream,r,W,L,N,pieces"));
}

#[test]
fn sawtooth_census_pieces() {
    let o = nncalc(&["census", "--family", "sawtooth", "--budget-range", "1..=12", "--L", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let pieces: Vec<u64> = rdr.records().map(|r| r.unwrap()[6].parse().unwrap()).collect();
    let want: Vec<u64> = (1..=12).map(|j| 2 + (1u64 << j)).collect();
    assert_eq!(pieces, want);
}

#[test]
fn random_census_rows_within_bounds() {
    let out = scratch("census.csv");
    let o = nncalc(&["census", "--r", "1", "--L", "3", "--budget-range", "6..=10", "--trials", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("report:"));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| &r[11] == "true"));
}

#[test]
fn verify_is_deterministic() {
    let a = nncalc(&["verify", "crossing", "--trials", "20", "--seed", "3"]);
    let b = nncalc(&["verify", "crossing", "--trials", "20", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["pass"], true);
}
