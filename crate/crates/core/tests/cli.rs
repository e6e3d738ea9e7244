use hicat_core::cli::run;

fn hicat(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hicat").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn counts_objects() {
    assert_eq!(
        hicat(&["count", "--model", "almost-positive", "--d", "2", "--n", "3"]),
        (0, "16\n".into(), String::new())
    );
    assert_eq!(hicat(&["count", "--d", "2", "--n", "3"]).1, "10\n");
    assert_eq!(hicat(&["count", "--what", "rigid", "--d", "1", "--n", "3"]).1, "5\n");
}

#[test]
fn lists_objects() {
    let (code, out, _) = hicat(&["objects", "--d", "1", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "13\n14\n24\n");
    let (_, json, _) =
        hicat(&["objects", "--model", "derived", "--d", "1", "--n", "1", "--window", "1:2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["kind"], "derived");
    assert_eq!(v["objects"][0], serde_json::json!([1, 3]));
}

#[test]
fn hom_and_ext_pairs() {
    assert_eq!(hicat(&["hom", "--d", "1", "--n", "2", "--from", "1,3", "--to", "1,4"]).1, "1\n");
    assert_eq!(hicat(&["hom", "--d", "1", "--n", "2", "--from", "1,4", "--to", "1,3"]).1, "0\n");
    assert_eq!(hicat(&["ext", "--d", "1", "--n", "2", "--from", "2,4", "--to", "1,3"]).1, "1\n");
}

#[test]
fn exangle_json() {
    let (code, out, _) = hicat(&["exangle", "--d", "2", "--n", "3", "--from", "2,4,6", "--to", "1,3,5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["A"], serde_json::json!([1, 3, 5]));
    assert_eq!(v["B"], serde_json::json!([2, 4, 6]));
    assert_eq!(v["middles"], serde_json::json!([[[1, 3, 6]], [[1, 4, 6]]]));
    assert_eq!(v["differentials"], serde_json::json!([[[1]], [[-1]], [[1]]]));
}

#[test]
fn exangle_without_extension_is_an_error() {
    let (code, out, err) = hicat(&["exangle", "--d", "2", "--n", "3", "--from", "1,3,5", "--to", "2,4,6"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"));
}

#[test]
fn quiver_dot() {
    let (_, out, _) = hicat(&["emit", "--content", "quiver", "--d", "2", "--n", "3"]);
    assert!(out.starts_with("digraph {\n"));
    assert!(out.contains("  \"1,4\" -> \"2,4\";\n"));
    assert!(out.ends_with("}\n"));
}

#[test]
fn quotient_lists_surviving_objects() {
    let (code, out, _) = hicat(&["quotient", "--d", "1", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "13\n14\n24\n25\n35\n");
    assert_eq!(hicat(&["quotient", "--model", "cluster", "--d", "1", "--n", "3"]).0, 2);
}

#[test]
fn verify_single_point_and_grid() {
    let (code, out, _) = hicat(&["verify", "--theorem", "equiv", "--grid", "1:2:50"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("2 of 2 passed\n"));
    let (code, out, _) =
        hicat(&["verify", "--theorem", "sanity", "--d", "1", "--n", "2", "--model", "cluster", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reports"][0]["passed"], true);
}

#[test]
fn rigid_and_mutate() {
    assert_eq!(
        hicat(&["rigid", "--model", "almost-positive", "--d", "1", "--n", "2", "--set", "1,3", "1,4"]).1,
        "true\n"
    );
    assert_eq!(
        hicat(&["rigid", "--model", "almost-positive", "--d", "1", "--n", "2", "--set", "1,3", "2,4"]).1,
        "false\n"
    );
    let args = ["mutate", "--model", "almost-positive", "--d", "1", "--n", "2", "--set", "1,3", "1,4", "--at", "1,4"];
    assert_eq!(hicat(&args).1, "{13 35}\n");
    let mut json = args.to_vec();
    json.extend(["--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&hicat(&json).1).unwrap();
    assert_eq!(v["result"], serde_json::json!([[1, 3], [3, 5]]));
    assert!(!v["exchange_exangles"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hicat(&[]).0, 2);
    assert_eq!(hicat(&["frobnicate"]).0, 2);
    assert_eq!(hicat(&["count", "--model", "triangulated"]).0, 2);
    assert_eq!(hicat(&["hom", "--from", "1,3"]).0, 2);
    assert_eq!(hicat(&["objects", "--window", "1:3"]).0, 2);
    assert_eq!(hicat(&["verify", "--theorem", "equiv", "--grid", "nonsense"]).0, 2);
    assert_eq!(hicat(&["emit", "--content", "report", "--theorem", "equiv", "--format", "dot"]).0, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = hicat(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.dot");
    let (code, out, _) =
        hicat(&["emit", "--content", "category", "--d", "1", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\"1,3\" -> \"1,4\";"));
}
