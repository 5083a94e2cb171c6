use std::path::PathBuf;
use std::process::Command;

use curvezeta::cli::{execute, OutputDocument, EXIT_CHECK, EXIT_INPUT, EXIT_OK, EXIT_PRECISION};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (String, i32) {
    let mut argv = vec!["curvezeta".to_string()];
    argv.extend(args.iter().map(|a| a.to_string()));
    let out = execute(argv);
    (out.stdout, out.code)
}

#[test]
fn binary_zeta_single() {
    let out = Command::new(env!("CARGO_BIN_EXE_curvezeta"))
        .args(["zeta", &data("cusp_param.json"), "--single"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "Z = (1 - U^-1 T + U^-1 T^2)/(1 - U^-1 T)\n");
}

#[test]
fn binary_precision_exit() {
    let out = Command::new(env!("CARGO_BIN_EXE_curvezeta"))
        .args(["zeta", &data("s34_truncated.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("insufficient precision"));
}

#[test]
fn node_numerator_line() {
    let (out, code) = run(&["zeta", &data("node.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "Z = (1 - U^-1 T1 - U^-1 T2 + U^-1 T1 T2)/(1 - U^-1 T1)(1 - U^-1 T2)\n");
}

#[test]
fn specialize_variants() {
    let (out, _) = run(&["specialize", &data("tacnode_quintic_param.json"), "--u", "1", "--single"]);
    assert_eq!(out, "1 + T^2\n");
    let (out, _) = run(&["specialize", &data("tacnode_quintic_conditions.json"), "--u", "q", "--cartier"]);
    assert_eq!(out, "(1 - 2 T + (q + 1) T^2 - 2 q T^3 + q^2 T^4)/(1 - T)^2\n");
    let (out, _) = run(&["specialize", &data("cusp_semigroup.json"), "--u", "q=3", "--cartier"]);
    assert_eq!(out, "(1 - T + 3 T^2)/(1 - T)\n");
    let (out, _) = run(&["specialize", &data("cusp_semigroup.json"), "--u", "q"]);
    assert_eq!(out, "(1 - q^-1 T + q^-1 T^2)/(1 - q^-1 T)\n");
    let (_, code) = run(&["specialize", &data("cusp_semigroup.json"), "--u", "0"]);
    assert_eq!(code, EXIT_INPUT);
    let (_, code) = run(&["specialize", &data("cusp_semigroup.json"), "--u", "x"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn semigroup_and_poincare() {
    let (out, _) = run(&["semigroup", &data("node_box.json")]);
    assert!(out.contains("conductor: (1,1)\n"), "{out}");
    assert!(out.contains("delta: 1\n"));
    assert!(out.contains("gorenstein: true\n"));
    assert!(out.contains("elements: (0,0) (1,1) (1,2) (2,1) (2,2)\n"));
    let (out, _) = run(&["poincare", &data("cusp_semigroup.json")]);
    assert_eq!(out, "P = (U^-2 - U^-3 T + U^-3 T^2)/(1 - U^-1 T)\n");
}

#[test]
fn check_exit_codes() {
    let (out, code) = run(&["check", &data("s345.json"), "--functional-equation"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("functional_equation: expected-fail"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("declared.json");
    std::fs::write(
        &path,
        r#"{"mode":"numerical_semigroup","semigroup_generators":[3,4,5],"expect_gorenstein":true}"#,
    )
    .unwrap();
    let (out, code) = run(&["check", path.to_str().unwrap(), "--functional-equation"]);
    assert_eq!(code, EXIT_CHECK, "{out}");
    assert!(out.contains("declared_gorenstein: fail"));

    let (out, code) = run(&["check", &data("tacnode_quintic_param.json")]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(!out.contains("fail"), "{out}");
}

#[test]
fn input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"mode":"linear_conditions","branches":2,"conditions":[[[1,0,"one"]]]}"#).unwrap();
    let out = execute(["curvezeta", "zeta", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("conditions[0][0][2]"), "{}", out.stderr);
    let out = execute(["curvezeta", "zeta", "/nonexistent/file.json"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = execute(["curvezeta", "frobnicate"]);
    assert_eq!(out.code, EXIT_INPUT);
    std::fs::write(&path, r#"{"mode":"semigroup_box","conductor":[2],"elements":[[0],[3]]}"#).unwrap();
    assert_eq!(execute(["curvezeta", "zeta", path.to_str().unwrap()]).code, EXIT_INPUT);
}

#[test]
fn condition_beyond_truncation_is_precision() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("far.json");
    std::fs::write(
        &path,
        r#"{"mode":"linear_conditions","branches":1,"truncation":[3],"conditions":[[[1,5,"1"]]]}"#,
    )
    .unwrap();
    assert_eq!(execute(["curvezeta", "zeta", path.to_str().unwrap()]).code, EXIT_PRECISION);
}

#[test]
fn json_round_trip_and_determinism() {
    for (cmd, extra) in [
        ("zeta", vec![]),
        ("zeta", vec!["--single"]),
        ("poincare", vec![]),
        ("semigroup", vec![]),
        ("specialize", vec!["--u", "q", "--cartier"]),
        ("specialize", vec!["--u", "q=1/2"]),
        ("check", vec![]),
    ] {
        for file in ["tacnode_quintic_param.json", "node.json", "s345.json"] {
            let path = data(file);
            let mut args = vec![cmd, path.as_str(), "--format", "json"];
            args.extend(extra.iter().copied());
            let (first, _) = run(&args);
            let (second, _) = run(&args);
            assert_eq!(first, second, "{cmd} {file}");
            let doc = OutputDocument::from_json(&first).unwrap();
            assert_eq!(doc.to_json(), first, "{cmd} {file}");
        }
    }
}

#[test]
fn json_numerator_keys() {
    let (out, _) = run(&["zeta", &data("tacnode_quintic_conditions.json"), "--format", "json"]);
    let doc = OutputDocument::from_json(&out).unwrap();
    let zeta = doc.zeta.unwrap();
    assert_eq!(zeta.numerator["2,2"].get("-2"), Some(&1));
    assert_eq!(zeta.numerator["1,1"].len(), 2);
    let form = zeta.to_zeta_form().unwrap();
    assert_eq!(form.to_string(), zeta.text);
}

#[test]
fn input_modes_agree() {
    let texts: Vec<String> = ["cusp_semigroup.json", "cusp_param.json", "cusp_conditions.json"]
        .iter()
        .map(|f| run(&["zeta", &data(f)]).0)
        .collect();
    assert!(texts.windows(2).all(|w| w[0] == w[1]), "{texts:?}");
    let a = run(&["zeta", &data("tacnode_quintic_param.json")]).0;
    let b = run(&["zeta", &data("tacnode_quintic_conditions.json")]).0;
    assert_eq!(a, b);
}
