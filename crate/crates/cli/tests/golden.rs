use std::path::PathBuf;

const CASES: &[(&str, &[&str])] = &[
    ("params_p3_n2.json", &["params", "-p", "3", "-n", "2", "--format", "json"]),
    ("params_p5_n2_e7half.csv", &["params", "-p", "5", "-n", "2", "-e", "7/2", "--format", "csv"]),
    ("chow_p3_n2.json", &["chow", "-p", "3", "-n", "2", "--method", "both", "--format", "json"]),
    ("chow_p3_n2.csv", &["chow", "-p", "3", "-n", "2", "--method", "both", "--format", "csv"]),
    ("chow_p2_n3_trace.json", &["chow", "-p", "2", "-n", "3", "--method", "recurrence", "--trace", "--format", "json"]),
    ("chow_p5_n2_closed.csv", &["chow", "-p", "5", "-n", "2", "--method", "closed", "--format", "csv"]),
    ("motcoh_p3_n2_odd4.json", &["motcoh", "-p", "3", "-n", "2", "--row", "odd", "--j", "4", "--format", "json"]),
    ("motcoh_p2_n3_9_5.json", &["motcoh", "-p", "2", "-n", "3", "--bidegree", "9", "5", "--format", "json"]),
    ("motcoh_p3_n2_even2.csv", &["motcoh", "-p", "3", "-n", "2", "--row", "even", "--j", "2", "--format", "csv"]),
    ("eval_sigma_compose_p3.json", &["eval", "-p", "3", "-n", "2", "sigma @ sigma^2", "--format", "json"]),
    ("eval_sigma_compose_p3.csv", &["eval", "-p", "3", "-n", "2", "sigma @ sigma^2", "--format", "csv"]),
];

fn fixture(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/v1").join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn run(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = rostmot_cli::run(std::iter::once("rostmot").chain(args.iter().copied()), &mut out, &mut err);
    (code, out, err)
}

#[test]
fn outputs_match_fixtures_byte_for_byte() {
    for (name, args) in CASES {
        let (code, out, err) = run(args);
        assert_eq!(code, 0, "{name}: {}", String::from_utf8_lossy(&err));
        assert!(err.is_empty(), "{name}");
        assert_eq!(String::from_utf8(out).unwrap(), String::from_utf8(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn repeated_runs_are_identical() {
    for (_, args) in CASES {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn chow_json_key_order() {
    let text = String::from_utf8(fixture("chow_p3_n2.json")).unwrap();
    let keys = ["\"p\"", "\"n\"", "\"b\"", "\"c\"", "\"d\"", "\"e\"", "\"method\"", "\"groups\""];
    let at: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{at:?}");

    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let groups = doc["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 9);
    for (j, g) in groups.iter().enumerate() {
        assert_eq!(g["j"], j as u64);
        let keys: Vec<&String> = g.as_object().unwrap().keys().collect();
        assert!(keys == ["j", "kind"] || keys == ["j", "kind", "provenance"], "{keys:?}");
    }
    assert!(doc.get("trace").is_none());

    let traced: serde_json::Value = serde_json::from_slice(&fixture("chow_p2_n3_trace.json")).unwrap();
    let last = traced.as_object().unwrap().keys().next_back().unwrap().clone();
    assert_eq!(last, "trace");
}

#[test]
fn chow_csv_kinds_for_three_two() {
    let text = String::from_utf8(fixture("chow_p3_n2.csv")).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["j", "kind"]);
    let kinds: Vec<String> = rows.records().map(|r| r.unwrap()[1].to_string()).collect();
    assert_eq!(kinds, ["free", "zero", "cyclic_p", "zero", "p_free", "zero", "cyclic_p", "zero", "p_free"]);
}
