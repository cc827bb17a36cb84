use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use gadgetry::f2core::BitMatrix;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gadgetry"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares table output with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str]) {
    let mut full = vec!["--format", "table"];
    full.extend_from_slice(args);
    let out = run(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let path = golden_path(name);
    if std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1") {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, &text).unwrap();
        return;
    }
    let want = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(text, want, "{name} drifted from its golden file");
}

#[test]
fn cycle_code_table() {
    golden("cycle_k4.txt", &["code", "cycle:k4"]);
    golden("cycle_k33.txt", &["code", "cycle:k33"]);
    golden("cycle_petersen.txt", &["code", "cycle:petersen"]);
    golden("aut_k4.txt", &["aut", "enumerate", "cycle:k4"]);
    golden("aut_petersen.txt", &["aut", "close", "petersen-edge-gens"]);
}

#[test]
fn group_algebra_table() {
    golden("aut_z7.txt", &["aut", "enumerate", "ga:z7:1+x+x3"]);
    golden("ga_d6.txt", &["code", "ga:d6:1+r+sr^-1"]);
}

#[test]
fn product_and_gadget_reports() {
    golden(
        "product_k4_k4.txt",
        &["product", "hgp", "cycle:k4", "cycle:k4"],
    );
    golden(
        "gadget_cnot.txt",
        &["gadget", "lift", "--hgp", "first", "--sigma", "(25)(46)"],
    );
    golden(
        "sector_surface.txt",
        &["check", "sector", "--left", "hgp", "rep:3", "rep:3"],
    );
    golden(
        "cup_codeword1.txt",
        &["cup", "verify", "codeword:1", "codeword:1"],
    );
}

#[test]
fn code_reports_parameters() {
    let v = json(&["code", "cycle:k4"]);
    let p = &v["report"]["params"];
    assert_eq!((p["n"].as_u64(), p["k"].as_u64()), (Some(6), Some(3)));
    assert_eq!(p["d"]["value"], 3);
    assert_eq!(p["d_dual"]["value"], 3);
    assert_eq!(
        v["manifest"]["command"],
        serde_json::json!(["code", "cycle:k4"])
    );
    assert_eq!(
        v["manifest"]["inputs"]["code cycle:k4"]
            .as_str()
            .map(str::len),
        Some(64)
    );

    let trivial = json(&["code", "rep:1"]);
    assert_eq!(
        (
            trivial["report"]["params"]["n"].as_u64(),
            trivial["report"]["params"]["k"].as_u64()
        ),
        (Some(1), Some(1))
    );
}

#[test]
fn automorphism_reports() {
    let k4 = json(&["aut", "enumerate", "cycle:k4"]);
    assert_eq!(k4["report"]["order"], 24);
    assert_eq!(k4["report"]["tanner_order"], 24);
    assert_eq!(k4["report"]["complete"], true);
    let z7 = json(&["aut", "enumerate", "ga:z7:1+x+x3"]);
    assert_eq!(z7["report"]["order"], 168);
    let pet = json(&["aut", "close", "petersen-edge-gens"]);
    assert_eq!(pet["report"]["order"], 120);
    assert_eq!(pet["report"]["complete"], false);
}

#[test]
fn generators_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gens.txt");
    fs::write(&path, "# two K4 symmetries\n(15)(34)\n(25)(46)\n").unwrap();
    let v = json(&["aut", "close", "k4", "--gens", path.to_str().unwrap()]);
    // (15)(34) and (25)(46) generate a group of order 4 acting on three logicals
    assert_eq!(v["report"]["complete"], false);
    let order = v["report"]["order"].as_u64().unwrap();
    assert!(order > 1 && 24 % order == 0, "order {order}");
    assert!(v["manifest"]["inputs"]
        .as_object()
        .unwrap()
        .keys()
        .any(|k| k.starts_with("file ")));
}

#[test]
fn product_of_k4_with_itself() {
    let v = json(&["product", "hgp", "cycle:k4", "cycle:k4"]);
    let s = &v["report"]["summary"];
    assert_eq!((s["n"].as_u64(), s["k"].as_u64()), (Some(52), Some(10)));
    assert_eq!(v["report"]["distance_x"]["value"], 3);
    assert_eq!(v["report"]["distance_z"]["value"], 3);
    let sectors: Vec<(u64, u64)> = s["sectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| {
            (
                x["qubits"].as_u64().unwrap(),
                x["logicals"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(sectors, [(36, 9), (16, 1)]);
}

#[test]
fn cnot_gadget_lifts_as_inverse_transpose() {
    let v = json(&["gadget", "lift", "--hgp", "first", "--sigma", "(25)(46)"]);
    let r = &v["report"];
    assert_eq!(r["summary"]["permutation"], true);
    let lines: Vec<&str> = r["logical_action"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_str().unwrap())
        .collect();
    // v^{-T}⊗I with v = [111;010;001]: rows 2 and 3 of the logical grid pick up row 1
    assert_eq!(lines.len(), 6);
    assert!(lines.contains(&"X̄(L4) ↦ X̄(L1)+X̄(L4)"));
    assert!(lines.contains(&"X̄(L9) ↦ X̄(L3)+X̄(L9)"));
}

#[test]
fn gadget_on_the_right_sector_and_beyond() {
    let right = json(&[
        "gadget",
        "lift",
        "--product",
        "k4*k4^T",
        "--hgp-right",
        "second",
        "--sigma",
        "(15)(34)",
    ]);
    let lines = right["report"]["logical_action"].as_array().unwrap();
    assert!(lines.iter().all(|l| l.as_str().unwrap().starts_with("X̄(R")));
    let qc = json(&[
        "gadget",
        "lift",
        "--product",
        "k4*k4^T",
        "--hgp",
        "first",
        "--sigma",
        "(15)(34)",
        "--qc",
        "k4^T",
    ]);
    assert_eq!(qc["report"]["n"], 288);
    assert_eq!(qc["report"]["summary"]["permutation"], true);
    let classical = json(&[
        "gadget",
        "lift",
        "--product",
        "k4*k4^T",
        "--qc",
        "k4^T",
        "--sigma",
        "(12)",
    ]);
    assert_eq!(classical["report"]["n"], 288);
    let qq = json(&[
        "gadget",
        "lift",
        "--product",
        "surface",
        "--hgp",
        "first",
        "--sigma",
        "(13)",
        "--qq",
        "surface",
    ]);
    assert_eq!(qq["report"]["summary"]["permutation"], true);
}

#[test]
fn sector_checks() {
    let v = json(&["check", "sector", "--left", "hgp", "rep:3", "rep:3"]);
    let entries = v["report"]["entries"].as_array().unwrap();
    assert!(entries
        .iter()
        .all(|e| e["report"]["achieved"]["value"] == 3));
    assert_eq!(v["report"]["holds"], true);
    let r = json(&["check", "sector", "--restricted", "qc", "surface", "rep:2"]);
    let got: Vec<u64> = r["report"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["report"]["achieved"]["value"].as_u64().unwrap())
        .collect();
    assert_eq!(got, [6, 3]);
}

#[test]
fn gadget_certificate() {
    let v = json(&["check", "gadget", "--hgp", "second", "--sigma", "(15)(34)"]);
    let c = &v["report"]["effective_distance"]["conclusion"];
    assert_eq!(c["kind"], "preserved");
    assert_eq!((c["d_x"].as_u64(), c["d_z"].as_u64()), (Some(3), Some(3)));
}

#[test]
fn structure_check() {
    let v = json(&["check", "structure", "cycle:k4"]);
    assert_eq!(v["report"]["order"], 24);
    assert_eq!(v["report"]["tanner_with_all_dual_checks"], 24);
    assert_eq!(v["report"]["dual_bound"]["equal_orders"], true);
}

#[test]
fn cup_from_files_and_codewords() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.txt");
    fs::write(
        &path,
        "# codeword 1 as a directed triangle\nf\nb\n.\nb\n.\n.\n",
    )
    .unwrap();
    let from_file = json(&["cup", "verify", path.to_str().unwrap(), "codeword:1"]);
    let from_word = json(&["cup", "verify", "codeword:1", "codeword:1"]);
    assert_eq!(from_file["report"]["pairs"], from_word["report"]["pairs"]);
    assert_eq!(
        from_word["report"]["links"],
        serde_json::json!([["L1", "R1"], ["R1", "L1"]])
    );
    let pairs = json(&["cup", "pairs", "codeword:1", "codeword:2"]);
    assert_eq!(pairs["report"]["pairs"].as_array().unwrap().len(), 18);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["gadget", "lift", "--hgp", "first", "--sigma", "(12)"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "distance", "qc", "k4*k4^T", "k4^T", "--cap", "3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["code", "nope:3"]).status.code(), Some(1));
    assert_eq!(
        run(&["cup", "verify", "codeword:4", "codeword:1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn distance_of_the_288_qubit_code() {
    let out = run(&["check", "distance", "qc", "k4*k4^T", "k4^T", "--cap", "3"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let b = v["report"].as_array().unwrap();
    assert_eq!(
        (
            b[0]["pauli"].as_str(),
            b[0]["lower"].as_u64(),
            b[0]["upper"].as_u64()
        ),
        (Some("X"), Some(16), Some(16))
    );
    assert_eq!(b[0]["exhaustive"], false);
    assert_eq!(b[0]["lower_source"], "formula");
    assert_eq!(
        (b[1]["lower"].as_u64(), b[1]["exhaustive"].as_bool()),
        (Some(3), Some(true))
    );
}

#[test]
fn output_does_not_depend_on_workers_or_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["--workers", "1", "product", "hgp", "k4", "k4"]);
    let b = run(&[
        "product",
        "hgp",
        "k4",
        "k4",
        "--workers",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(a.stdout, b.stdout);
    let written = fs::read(dir.path().join("product.json")).unwrap();
    assert_eq!(written, a.stdout);
    let hx = BitMatrix::from_f2m(&fs::read_to_string(dir.path().join("hx.f2m")).unwrap()).unwrap();
    assert_eq!(hx.shape(), (24, 52));
}

#[test]
fn timing_is_opt_in() {
    let plain = json(&["code", "hamming:3"]);
    assert!(plain["manifest"].get("timing_ms").is_none());
    let timed = json(&["--timing", "code", "hamming:3"]);
    assert!(timed["manifest"]["timing_ms"].is_u64());
    let seeded = json(&["--seed", "7", "code", "hamming:3"]);
    assert_eq!(seeded["manifest"]["seed"], 7);
}

#[test]
fn code_artifacts_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["code", "hamming:3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let h = BitMatrix::from_f2m(&fs::read_to_string(dir.path().join("h.f2m")).unwrap()).unwrap();
    assert_eq!(
        h,
        BitMatrix::from_strs(&["1001101", "0101011", "0010111"]).unwrap()
    );
    assert!(dir.path().join("code.json").exists());
}
