fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = rostmot_cli::run(std::iter::once("rostmot").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn code(args: &[&str]) -> i32 {
    run(args).0
}

#[test]
fn non_prime_p() {
    let (status, out, err) = run(&["params", "-p", "4", "-n", "2"]);
    assert_eq!(status, 2);
    assert!(out.is_empty());
    assert!(err.contains("p must be prime"), "{err}");
}

#[test]
fn non_unit_degree_is_rejected() {
    let (status, out, err) = run(&["verify", "-p", "3", "-n", "2", "-e", "3", "--suite", "all"]);
    assert_eq!(status, 2);
    assert!(out.is_empty());
    assert!(err.contains("non-unit degree"), "{err}");
    assert_eq!(code(&["eval", "-p", "5", "-n", "2", "-e", "10/3", "pi"]), 2);
    assert_eq!(code(&["params", "-p", "3", "-n", "2", "-e", "1/3"]), 2);
    assert_eq!(code(&["params", "-p", "3", "-n", "2", "-e", "two"]), 2);
}

#[test]
fn bad_flags() {
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["chow", "-p", "3"]), 2);
    assert_eq!(code(&["chow", "-p", "3", "-n", "2", "--method", "guess"]), 2);
    assert_eq!(code(&["motcoh", "-p", "3", "-n", "2"]), 2);
    assert_eq!(code(&["motcoh", "-p", "3", "-n", "2", "--row", "even"]), 2);
    assert_eq!(code(&["motcoh", "-p", "3", "-n", "2", "--row", "even", "--j", "1", "--bidegree", "2", "1"]), 2);
    assert_eq!(code(&["audit", "-p", "3", "-n", "2", "-m", "1"]), 2);
    assert_eq!(code(&["audit", "-p", "3", "-n", "2", "--mainsi", "-m", "1"]), 2);
    assert_eq!(code(&["verify", "-p", "3", "-n", "2", "--suite", "everything"]), 2);
}

#[test]
fn help_and_version_succeed() {
    let (status, out, _) = run(&["--help"]);
    assert_eq!(status, 0);
    assert!(out.contains("Usage"));
    assert_eq!(run(&["--version"]).0, 0);
    assert_eq!(run(&["audit", "--help"]).0, 0);
}

#[test]
fn parse_errors_report_position() {
    let (status, out, err) = run(&["eval", "-p", "3", "-n", "2", "E(1,"]);
    assert_eq!(status, 2);
    assert!(out.is_empty());
    assert!(err.contains("1:5") && err.contains("INT"), "{err}");
    assert_eq!(code(&["eval", "-p", "3", "-n", "2", "sigma @ H^1"]), 2);
    assert_eq!(code(&["eval", "-p", "3", "-n", "2", "2 / 3"]), 2);
}

#[test]
fn eval_booleans() {
    assert_eq!(code(&["eval", "-p", "3", "-n", "2", "rational(tuple(pi))"]), 0);
    let (status, out, err) = run(&["eval", "-p", "3", "-n", "2", "rational(tuple(E(0,2)))"]);
    assert_eq!(status, 1);
    assert_eq!(out, "false\n");
    assert!(!err.is_empty());
}

#[test]
fn verify_passes() {
    let (status, out, err) = run(&["verify", "-p", "2", "-n", "4", "--suite", "all"]);
    assert_eq!(status, 0, "{err}");
    assert!(out.ends_with("all checks passed\n"));
    for suite in ["correspondences", "symmpow", "endalg", "motcoh", "chow", "steenrod"] {
        assert_eq!(code(&["verify", "-p", "3", "-n", "2", "-e", "4", "--suite", suite]), 0, "{suite}");
    }
}

#[test]
fn verify_json_shape() {
    let (status, out, _) = run(&["verify", "-p", "3", "-n", "2", "--suite", "endalg", "--format", "json"]);
    assert_eq!(status, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["p", "n", "e", "passed", "suites"]);
    assert_eq!(doc["suites"][0]["suite"], "endalg");
    assert_eq!(doc["suites"][0]["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn audits() {
    assert_eq!(code(&["audit", "-p", "3", "-n", "2", "--mainsi", "-m", "4", "-s", "8"]), 0);
    assert_eq!(code(&["audit", "-p", "2", "-n", "3", "--generators", "-m", "2", "-r", "1", "--format", "json"]), 0);
    let (status, _, err) = run(&["audit", "-p", "3", "-n", "2", "--mainsi", "-m", "8", "-s", "0"]);
    assert_eq!(status, 2);
    assert!(err.contains("bound not satisfied"), "{err}");
    assert_eq!(code(&["audit", "-p", "3", "-n", "2", "--generators", "-m", "2", "-r", "1"]), 2);
    assert_eq!(code(&["audit", "-p", "3", "-n", "2", "--mainsi", "-m", "-1", "-s", "4"]), 2);
}

#[test]
fn audit_case_listing() {
    let (status, out, _) = run(&["audit", "-p", "2", "-n", "2", "--mainsi", "-m", "0", "-s", "3", "--cases", "--format", "csv"]);
    assert_eq!(status, 0);
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rows.headers().unwrap().len(), 7);
    let verdicts: Vec<String> = rows.records().map(|r| r.unwrap()[5].to_string()).collect();
    assert_eq!(verdicts.iter().filter(|v| *v == "=1").count(), 1);
}

#[test]
fn chow_formats() {
    let (status, out, _) = run(&["chow", "-p", "3", "-n", "2"]);
    assert_eq!(status, 0);
    assert_eq!(out.lines().count(), 10);
    assert!(out.contains("Z/3"));
    let (_, traced, _) = run(&["chow", "-p", "3", "-n", "2", "--trace"]);
    assert!(traced.contains("[j=b+1]"));
}
