use std::path::{Path, PathBuf};

use fell_cli::spec::{bundle_json, matrix_json, read_spec, GroupSpec};
use fell_core::bundle::{pullback, twisted_semidirect_bundle, verify_bundle_isomorphism};
use fell_core::catalog::{pauli_quotient, s3_matrix_action, twisted_z4};
use fell_core::duality::twisted_unitaries;
use fell_core::TwistedAction;
use serde_json::{Map, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["fellbundle"];
    full.extend_from_slice(args);
    let code = fell_cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

/// The concretized twisted semidirect bundle of `t` with its canonical unitaries, as a spec file.
fn twisted_spec(dir: &Path, name: &str, t: &TwistedAction<f64>) -> PathBuf {
    let d = twisted_semidirect_bundle(t).concretize(1e-9).unwrap();
    let u = twisted_unitaries(t, &d).unwrap();
    let mut v = bundle_json(&GroupSpec::Cyclic(2), &d.bundle);
    let m: Map<String, Value> = t.group().elements().map(|s| (s.to_string(), matrix_json(u.get(s).unwrap()))).collect();
    v["multipliers"] = Value::Object(m);
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    path
}

#[test]
fn verify_pauli_passes_five_axioms() {
    let (code, out, _) = run(&["verify", fixture("pauli.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    let axioms = v["axioms"].as_object().unwrap();
    assert_eq!(axioms.len(), 5);
    assert!(axioms.values().all(|a| a["passed"] == Value::Bool(true)));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", fixture("broken.json").to_str().unwrap()]).0, 1);
    let (code, _, err) = run(&["verify", fixture("malformed.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line"), "{err}");
    assert_eq!(run(&["verify", fixture("missing.json").to_str().unwrap()]).0, 2);
    assert_eq!(run(&["transmogrify", "x"]).0, 2);
    assert_eq!(run(&["imprimitivity", fixture("pauli.json").to_str().unwrap()]).0, 2);
    assert_eq!(run(&["imprimitivity", fixture("pauli.json").to_str().unwrap(), "--group", "symmetric:3", "--normal", "0,3,4"]).0, 0);
    assert_eq!(run(&["pullback", fixture("pauli.json").to_str().unwrap(), "--group", "cyclic:3", "--normal", "0"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn pullback_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let pauli = fixture("pauli.json");
    let (code, _, err) = run(&["pullback", pauli.to_str().unwrap(), "--group", "cyclic:4", "--normal", "0,2", "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let back = read_spec(&out, 1e-9).unwrap();
    let (q, d) = pauli_quotient::<f64>(1e-9).unwrap();
    let p = pullback(&d, &q, 1e-9).unwrap();
    let r = verify_bundle_isomorphism(&p, &back.bundle, |_, x| x.clone(), 1e-9).unwrap();
    assert!(r.holds(1e-8), "{r:?}");
    assert_eq!(run(&["verify", out.to_str().unwrap()]).0, 0);
}

#[test]
fn reports_are_deterministic() {
    let pauli = fixture("pauli.json");
    let p = pauli.to_str().unwrap();
    for args in [
        vec!["report", p],
        vec!["crossed", p],
        vec!["imprimitivity", p, "--group", "cyclic:4", "--normal", "0,2"],
        vec!["gsimple", p],
        vec!["ep", p],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.0, 0, "{args:?}: {}", a.2);
        assert_eq!(a.1, b.1, "{args:?}");
    }
}

#[test]
fn landstad_and_olesen_pedersen_commands() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = twisted_spec(dir.path(), "z4.json", &twisted_z4(-1.0, 1e-9).unwrap());
    let (code, out, err) = run(&["landstad", z4.to_str().unwrap(), "--group", "cyclic:4", "--normal", "0,2"]);
    assert_eq!(code, 0, "{err}");
    let tau = &json(&out)["tau"]["2"];
    assert!((tau[0][0][0].as_f64().unwrap() + 1.0).abs() < 1e-9);
    let (code, out, err) = run(&["olesen-pedersen", z4.to_str().unwrap(), "--group", "cyclic:4", "--normal", "0,2"]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    assert_eq!(v["semidirect_dim"], v["pullback_dim"]);

    let s3 = twisted_spec(dir.path(), "s3.json", &s3_matrix_action(1e-9).unwrap());
    let (code, _, err) = run(&["olesen-pedersen", s3.to_str().unwrap(), "--group", "symmetric:3", "--normal", "0,3,4"]);
    assert_eq!(code, 0, "{err}");

    let no_u = fixture("pauli.json");
    assert_eq!(run(&["landstad", no_u.to_str().unwrap(), "--group", "cyclic:4", "--normal", "0,2"]).0, 2);
}

#[test]
fn landstad_rejects_multipliers_of_the_wrong_order() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = twisted_spec(dir.path(), "z4.json", &twisted_z4(-1.0, 1e-9).unwrap());
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&z4).unwrap()).unwrap();
    let one = v["multipliers"]["0"].clone();
    for s in ["1", "2", "3"] {
        v["multipliers"][s] = one.clone();
    }
    std::fs::write(&z4, v.to_string()).unwrap();
    let (code, out, _) = run(&["landstad", z4.to_str().unwrap(), "--group", "cyclic:4", "--normal", "0,2"]);
    assert_eq!(code, 1);
    assert!(json(&out)["error"].is_string());
}

#[test]
fn ep_with_witness_file() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    std::fs::write(&w, r#"{"f": {"0": [[1, 0], [0, 1]]}}"#).unwrap();
    let pauli = fixture("pauli.json");
    let (code, out, _) = run(&["ep", pauli.to_str().unwrap(), "--witness", w.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["bound"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["defect"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    std::fs::write(&w, r#"{"f": {"1": [[0, 1], [1, 0]]}}"#).unwrap();
    assert_eq!(run(&["ep", pauli.to_str().unwrap(), "--witness", w.to_str().unwrap()]).0, 2);
}

#[test]
fn report_with_restriction() {
    let (code, out, err) = run(&["report", fixture("s3.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    assert_eq!(v["restriction"]["subgroup"], serde_json::json!([0, 3, 4]));
    assert_eq!(v["amenability"]["regular_rep_kernel_dim"], 0);
}
