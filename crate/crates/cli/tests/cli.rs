use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

use zmetric_core::complements::AsymptoticVerdict;
use zmetric_core::map23::DistortionWitness;
use zmetric_core::nets::{CoverCertificate, NetVerdict};
use zmetric_core::{LengthResult, SignedDigitRepr};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("zmetric").chain(args.iter().copied());
    let code = zmetric_cli::run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn envelope(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let r = run(&full);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, value: Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

#[test]
fn lambda_three() {
    let e = envelope(&["lambda", "--set", "2,3", "--cap", "20", "--h", "3", "--limit", "10000"]);
    assert_eq!(e["command"], "lambda");
    assert_eq!(e["result"], 21);
    assert_eq!(e["cap"], 20);
    assert_eq!(e["params"]["set"], "P=2,3");
    assert!(e["elapsed_ms"].is_u64());
}

#[test]
fn repr_of_zero() {
    let e = envelope(&["repr", "--base", "2", "--n", "0"]);
    assert_eq!(e["result"]["digits"], json!([]));
    assert_eq!(e["result"]["length"], 0);
    let back: SignedDigitRepr = serde_json::from_value(e["result"].clone()).unwrap();
    assert!(back.is_zero());
}

#[test]
fn repr_of_negative() {
    let e = envelope(&["repr", "--base", "3", "--n", "-5"]);
    // -5 = -9 + 3 + 1
    assert_eq!(e["result"]["digits"], json!([1, 1, -1]));
    assert_eq!(e["params"]["n"], -5);
    let text = run(&["repr", "--base", "4", "--n", "10"]);
    assert_eq!(text.stdout, "10 = 4^2-4^1-2·4^0\nlength 4\n");
}

#[test]
fn distortion_one() {
    let e = envelope(&["distortion", "--r", "1"]);
    let r = &e["result"];
    assert_eq!(
        (r["m"].clone(), r["nprime"].clone(), r["d2"].clone(), r["d3"].clone()),
        (json!(9), json!(8), json!(1), json!(3))
    );
    let back: DistortionWitness = serde_json::from_value(r.clone()).unwrap();
    assert!(back.verify());
    assert_eq!(run(&["distortion", "--r", "0"]).code, 1);
}

#[test]
fn wordlen_round_trips() {
    let e = envelope(&["wordlen", "--set", "2,3", "--n", "5"]);
    let back: LengthResult = serde_json::from_value(e["result"].clone()).unwrap();
    assert_eq!(back.length, 2);
    assert!(back.is_consistent());
    assert_eq!(
        e["result"]["witness"],
        json!([{"sign":1,"base":3,"exp":1},{"sign":1,"base":2,"exp":1}])
    );
}

#[test]
fn length_and_map23() {
    assert_eq!(
        envelope(&["length", "--base", "2", "--n", "7"])["result"],
        json!({"n": 7, "length": 2})
    );
    assert_eq!(
        envelope(&["map23", "--n", "9"])["result"],
        json!({"n": 9, "f": 10, "l2": 2, "l3": 2})
    );
    assert_eq!(envelope(&["map23", "--n", "10", "--inverse"])["result"]["n"], 9);
    let big = "123456789012345678901234567890";
    let e = envelope(&["map23", "--n", big]);
    assert_eq!(e["result"]["n"], big);
    assert_eq!(e["result"]["l2"], e["result"]["l3"]);
}

#[test]
fn diophantine_sweep() {
    let e = envelope(&["dio", "--targets", "149,151", "--bound", "200"]);
    assert_eq!(e["result"], json!([]));
    let e = envelope(&["dio", "--targets", "5", "--bound", "10"]);
    assert_eq!(e["result"], json!([{"a":3,"b":1,"target":5},{"a":5,"b":3,"target":5}]));
}

#[test]
fn sphere_csv_rows() {
    let r = run(&[
        "--format", "csv", "sphere", "--set", "g=2", "--h", "1", "--lo", "-4", "--hi", "4",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "h,n\n1,-4\n1,-2\n1,-1\n1,1\n1,2\n1,4\n");
    let l = run(&["--format", "csv", "lambda", "--set", "2,3", "--h", "2"]);
    assert_eq!(l.stdout, "h,lambda\n2,5\n");
}

#[test]
fn cover_and_nets() {
    let e = envelope(&["cover", "--base", "2", "--h", "1", "--n", "7"]);
    let cert: CoverCertificate = serde_json::from_value(e["result"].clone()).unwrap();
    assert_eq!(cert.c, 39.into());

    let e = envelope(&[
        "net-check",
        "--base",
        "2",
        "--h",
        "1",
        "--lo",
        "-200",
        "--hi",
        "200",
        "--cap",
        "12",
    ]);
    let verdict: NetVerdict = serde_json::from_value(e["result"].clone()).unwrap();
    assert!(verdict.is_covered());
    assert_eq!(e["window"], json!({"lo": -200, "hi": 200}));

    let dir = TempDir::new().unwrap();
    let origin = write(&dir, "origin.json", json!({"elements": [0]}));
    let e = envelope(&[
        "net-check",
        "--base",
        "2",
        "--h",
        "1",
        "--lo",
        "0",
        "--hi",
        "10",
        "--set-file",
        origin.to_str().unwrap(),
    ]);
    assert_eq!(e["result"], json!({"verdict": "counterexample", "n": 3}));

    let e = envelope(&["net-build", "--base", "2", "--h", "1", "--lo", "-8", "--hi", "8"]);
    // The smallest positive integer with three nonzero NAF digits is 21.
    assert_eq!(e["result"]["members"], json!([0]));
}

#[test]
fn complement_files() {
    let dir = TempDir::new().unwrap();
    let w = write(&dir, "w.json", json!({"elements": [0, 1]}));
    let evens = write(
        &dir,
        "evens.json",
        json!({"period": 2, "core": {"lo": 0, "hi": 0, "members": [0]}, "pos_residues": [0], "neg_residues": [0]}),
    );
    let w = w.to_str().unwrap();
    let e = envelope(&["complement-check", "--w", w, "--c", evens.to_str().unwrap()]);
    assert_eq!(e["result"], json!({"complement": true}));

    let punctured = write(
        &dir,
        "punctured.json",
        json!({"period": 2, "core": {"lo": 0, "hi": 0, "members": []}, "pos_residues": [0], "neg_residues": [0]}),
    );
    let e = envelope(&[
        "complement-check",
        "--asymptotic",
        "--w",
        w,
        "--c",
        punctured.to_str().unwrap(),
    ]);
    let verdict: AsymptoticVerdict = serde_json::from_value(e["result"].clone()).unwrap();
    let missed: Vec<i64> = (-50..=50i64)
        .filter(|n| {
            ![0, 1].iter().any(|w| {
                let c = n - w;
                c % 2 == 0 && c != 0
            })
        })
        .collect();
    assert_eq!(verdict, AsymptoticVerdict::Asymptotic { exceptional: missed });

    let all = write(
        &dir,
        "all.json",
        json!({"period": 1, "core": {"lo": 0, "hi": 0, "members": [0]}, "pos_residues": [0], "neg_residues": [0]}),
    );
    let e = envelope(&[
        "prune",
        "--w",
        w,
        "--c",
        all.to_str().unwrap(),
        "--lo",
        "-20",
        "--hi",
        "20",
    ]);
    let odd: Vec<i64> = (-20..=20).filter(|n: &i64| n.rem_euclid(2) == 1).collect();
    assert_eq!(e["result"]["members"], json!(odd));
    assert_eq!(e["result"]["certificates"].as_array().unwrap().len(), odd.len());

    let r = run(&["complement-check", "--w", w, "--c", "/nonexistent/c.json"]);
    assert_eq!(r.code, 1);
    let r = run(&[
        "prune",
        "--w",
        w,
        "--c",
        punctured.to_str().unwrap(),
        "--lo",
        "0",
        "--hi",
        "3",
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("not a complement"), "{}", r.stderr);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["repr", "--base", "2", "--n", "1", "--bogus"]).code, 2);
    assert_eq!(run(&["repr", "--base", "2"]).code, 2);
    assert_eq!(run(&["repr", "--base", "2", "--n", "x"]).code, 2);
    assert_eq!(run(&["--format", "csv", "repr", "--base", "2", "--n", "1"]).code, 2);
    let r = run(&["repr", "--base", "1", "--n", "5"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("invalid base 1"), "{}", r.stderr);
    assert_eq!(
        run(&["sphere", "--set", "2,3", "--h", "1", "--lo", "5", "--hi", "-5"]).code,
        1
    );
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("net-check"));
}

#[test]
fn deterministic_apart_from_timing() {
    let args = ["sphere", "--set", "2,3", "--h", "3", "--lo", "-300", "--hi", "300"];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v.to_string()
    };
    let a = strip(envelope(&args));
    let b = strip(envelope(&args));
    assert_eq!(a, b);
    let mut threaded = vec!["--threads", "2"];
    threaded.extend_from_slice(&args);
    assert_eq!(strip(envelope(&threaded)), a);
}

#[test]
fn cap_from_environment() {
    let bin = env!("CARGO_BIN_EXE_zmetric");
    let out = Command::new(bin)
        .args(["--format", "json", "wordlen", "--set", "2,3", "--n", "5"])
        .env("ZMETRIC_DEFAULT_CAP", "5")
        .output()
        .unwrap();
    assert!(out.status.success());
    let e: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(e["cap"], 5);
    assert_eq!(e["result"]["cap"], 5);

    let out = Command::new(bin)
        .args(["wordlen", "--set", "2,3", "--n", "5"])
        .env("ZMETRIC_DEFAULT_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(bin)
        .args(["--format", "json", "wordlen", "--set", "2,3", "--n", "5", "--cap", "7"])
        .env("ZMETRIC_DEFAULT_CAP", "5")
        .output()
        .unwrap();
    let e: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(e["cap"], 7);
}
