use std::process::Command;

use quadsum::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("quadsum").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn reference(name: &str) -> String {
    format!("{}/../../reference/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn eval_reports_the_degree_626_example() {
    let (code, out, _) = call(&["eval", "--p", "5", "--n", "1", "--coeffs", "1,2,3,4,1", "--m", "13"]);
    assert_eq!(code, 0);
    assert!(out.contains("l = 4, t = -1"), "{out}");
    assert!(out.contains("value = -g^9*p^4"), "{out}");
    assert!(out.contains("cyclotomic = "), "{out}");
    assert!(out.contains("complex = "), "{out}");
    assert!(out.contains("provenance:"), "{out}");
}

#[test]
fn eval_of_x_squared_over_f3_is_the_gauss_sum() {
    let (code, out, _) = call(&["eval", "--p", "3", "--n", "1", "--coeffs", "1", "--m", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("value = g\n"), "{out}");
    assert!(out.contains("cyclotomic = 1 + 2*z\n"), "{out}");
}

#[test]
fn invalid_input_exits_with_one() {
    let cases: [&[&str]; 5] = [
        &["eval", "--p", "5", "--n", "1", "--coeffs", "3,0,1", "--alphas", "1,2,3"],
        &["eval", "--p", "4", "--coeffs", "1"],
        &["eval", "--p", "5", "--coeffs", "1,0"],
        &["eval", "--p", "5", "--coeffs", "1", "--alphas", "0,1"],
        &["eval", "--p", "5"],
    ];
    for args in cases {
        let (code, out, err) = call(args);
        assert_eq!(code, 1, "{args:?}: {out}{err}");
        assert!(!err.is_empty(), "{args:?}: reason missing");
    }
}

#[test]
fn unsupported_degree_exits_with_two() {
    let (code, _, err) = call(&["eval", "--p", "3", "--coeffs", "1,1", "--m", "729"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("unsupported"), "{err}");
}

#[test]
fn profile_prints_divisor_pairs() {
    let (code, out, _) = call(&["profile", "--p", "5", "--n", "1", "--coeffs", "1,2,3,4,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("s = 26"), "{out}");
    assert!(out.contains("(1,0) (2,0) (13,4) (26,8)"), "{out}");
}

#[test]
fn profile_json_round_trips() {
    let (code, out, _) = call(&["profile", "--p", "5", "--coeffs", "1,2,3,4,1", "--format", "json"]);
    assert_eq!(code, 0);
    let prof: quadsum::nullity::NullityProfile = serde_json::from_str(&out).unwrap();
    assert_eq!(prof.s, 26);
    assert_eq!(prof.entries, vec![(1, 0), (2, 0), (13, 4), (26, 8)]);
}

#[test]
fn eval_json_round_trips() {
    let (code, out, _) = call(&["eval", "--p", "5", "--coeffs", "1,2,3,4,1", "--m", "26", "--format", "json"]);
    assert_eq!(code, 0);
    let res: quadsum::evaluator::EvalResult = serde_json::from_str(&out).unwrap();
    assert_eq!((res.n_total, res.l, res.t), (26, 8, -1));
    assert_eq!(res.value_exact, "-g^18*p^8");
    assert_eq!(serde_json::to_string_pretty(&res).unwrap().trim(), out.trim());
}

#[test]
fn table_diffs_against_the_reference() {
    let (code, out, _) = call(&["table", "--p", "3", "--alpha-max", "4", "--diff", &reference("table1.csv")]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "OK: 121 rows, 0 diffs");
}

#[test]
fn table_reports_a_perturbed_reference() {
    let text = std::fs::read_to_string(reference("table1.csv")).unwrap();
    let perturbed = text.replacen(";1;(1,0)", ";1;(1,1)", 1);
    assert_ne!(text, perturbed);
    let dir = std::env::temp_dir().join(format!("quadsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("perturbed.csv");
    std::fs::write(&path, perturbed).unwrap();
    let (code, out, _) = call(&["table", "--p", "3", "--alpha-max", "4", "--diff", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, 1);
    assert!(out.contains("row 1 [1]: pair (1, 0) vs (1, 1)"), "{out}");
    assert!(out.contains("DIFF: 121 rows, 1 diffs"), "{out}");
}

#[test]
fn table_csv_matches_the_reference_bytes() {
    let (code, out, _) = call(&["table", "--p", "5", "--alpha-max", "3", "--jobs", "2"]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(reference("table2.csv")).unwrap();
    assert_eq!(out.trim_end(), text.trim_end());
}

#[test]
fn monomial_reports_the_case() {
    let (code, out, _) = call(&["monomial", "--p", "3", "--a", "1", "--alpha", "1", "--N", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("case (iii)"), "{out}");
    assert!(out.contains("value = -27"), "{out}");
}

#[test]
fn verify_confirms_equality() {
    let (code, out, _) = call(&["verify", "--p", "5", "--coeffs", "1,2,3,4,1", "--m", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("equal"), "{out}");
}

#[test]
fn verify_respects_the_cap() {
    let (code, _, err) = call(&["verify", "--p", "5", "--coeffs", "1,2,3,4,1", "--m", "4", "--cap", "100"]);
    assert_ne!(code, 0);
    assert_ne!(code, 3);
    assert!(!err.is_empty());
}

#[test]
fn shift_reports_zero_and_phase() {
    let (code, out, _) = call(&["shift", "--p", "5", "--coeffs", "1,1", "--m", "2", "--b", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "zero");
    let (code, out, _) = call(&["shift", "--p", "5", "--coeffs", "1", "--b", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("phase = 4"), "{out}");
}

#[test]
fn extension_coefficients_echo_the_modulus() {
    let (code, out, _) = call(&["eval", "--p", "3", "--n", "2", "--coeffs", "1;1,0;1", "--m", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("modulus = 1,0,1\n"), "{out}");
}

#[test]
fn outputs_are_byte_deterministic() {
    let args = ["eval", "--p", "7", "--coeffs", "5,6,1", "--m", "12", "--format", "json"];
    assert_eq!(call(&args), call(&args));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_quadsum");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["eval", "--p", "5", "--coeffs", "1,2,3,4,1", "--m", "4"]), Some(0));
    assert_eq!(status(&["eval", "--p", "5", "--coeffs", "3,0,1", "--alphas", "1,2,3"]), Some(1));
    assert_eq!(status(&["eval", "--p", "3", "--coeffs", "1,1", "--m", "729"]), Some(2));
    assert_eq!(status(&["frobnicate"]), Some(1));
}
