use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn topos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn record(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "record"];
    all.extend_from_slice(args);
    let out = topos(&all);
    let v = serde_json::from_slice(&out.stdout).expect("record output is JSON");
    (out.status.code().unwrap(), v)
}

fn scenario(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".scn").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

const SIGMA_Z_OPEN: &str =
    "DIM 2\nCLOSE off\nOPERATOR sigma_z\nEIGENVALUE 1 : (1, 0)\nEIGENVALUE -1 : (0, 1)\n";

#[test]
fn bundled_fixtures_validate() {
    for name in [
        "sigma_z.scn",
        "sigma_zx.scn",
        "cabello18.scn",
        "vposet.top",
        "sierpinski.top",
    ] {
        let (code, v) = record(&["validate", fixture(name).to_str().unwrap()]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["status"], "valid");
    }
}

#[test]
fn invariant_violations_exit_1() {
    let skew = scenario("DIM 2\nOPERATOR a\nEIGENVALUE 1 : (1, 1)\nEIGENVALUE 2 : (1, 0)\n");
    let (code, v) = record(&["validate", path(&skew)]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "invalid");
    assert_eq!(v["error"]["kind"], "InvariantViolation");
    assert_eq!(v["error"]["law"], "NotOrthogonal");
    assert_eq!(v["error"]["operator"], "a");

    let short = scenario("DIM 3\nOPERATOR b\nEIGENVALUE 1 : (1, 0, 0)\nEIGENVALUE 2 : (0, 1, 0)\n");
    let (code, v) = record(&["validate", path(&short)]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["law"], "IncompleteBasis");

    let unknown = scenario(&format!(
        "{SIGMA_Z_OPEN}STATE s (1, 0)\nQUERY s nope {{1}}\n"
    ));
    let (code, v) = record(&["valuate", path(&unknown)]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "UnknownName");
    assert_eq!(v["error"]["line"], 7);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let bad = scenario("DIM 2\nOPERATOR a\nEIGENVALUE 1 : (1, 0.5)\n");
    let (code, v) = record(&["validate", path(&bad)]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "parse_error");
    assert_eq!(v["error"]["line"], 3);
    assert_eq!(v["error"]["column"], 21);

    let out = topos(&["validate", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3, column 21"), "{err}");

    let (code, _) = record(&["validate", "/no/such/file.scn"]);
    assert_eq!(code, 2);
}

#[test]
fn category_counts() {
    let open = scenario(SIGMA_Z_OPEN);
    let (code, v) = record(&["category", path(&open)]);
    assert_eq!(code, 0);
    assert_eq!(v["objects"].as_array().unwrap().len(), 1);
    assert_eq!(v["arrows"].as_array().unwrap().len(), 1);

    let (_, v) = record(&["category", fixture("sigma_z.scn").to_str().unwrap()]);
    assert_eq!(v["objects"].as_array().unwrap().len(), 5);
    assert_eq!(v["arrows"].as_array().unwrap().len(), 19);
    assert_eq!(v["objects"][0]["sieves"], 3);

    let (_, v) = record(&["category", fixture("sigma_zx.scn").to_str().unwrap()]);
    let arrows = v["arrows"].as_array().unwrap();
    assert_eq!(arrows.len(), 2);
    assert!(arrows.iter().all(|a| a["dom"] == a["cod"]));
}

#[test]
fn valuate_reports_truth_values() {
    let (code, v) = record(&["valuate", fixture("sigma_z.scn").to_str().unwrap()]);
    assert_eq!(code, 0);
    let q = v["queries"].as_array().unwrap();
    assert_eq!(q[0]["truth"], "principal");
    assert_eq!(q[0]["probability"], "1");
    assert_eq!(q[1]["truth"], "intermediate");
    assert_eq!(q[1]["probability"], "1/2");
    let cods: Vec<&str> = q[1]["sieve"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["codomain"].as_str().unwrap())
        .collect();
    assert_eq!(cods, ["0", "1"]);
    assert_eq!(q[2]["truth"], "principal");
    // |(2, i)|² = 5, weight on -1 is |i|² = 1
    assert_eq!(q[3]["probability"], "1/5");
    assert!(v["func_check"]
        .as_array()
        .unwrap()
        .iter()
        .all(|f| f["holds"] == true));

    let none = scenario(SIGMA_Z_OPEN);
    let (code, _) = record(&["valuate", path(&none)]);
    assert_eq!(code, 1);
}

#[test]
fn ks_search_counts() {
    let (code, v) = record(&["ks-search", fixture("sigma_z.scn").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["section_count"], 2);
    assert_eq!(v["obstruction_certified"], false);

    let (code, v) = record(&["ks-search", fixture("cabello18.scn").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["section_count"], 0);
    assert_eq!(v["obstruction_certified"], true);

    let out = topos(&["ks-search", fixture("cabello18.scn").to_str().unwrap()]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("KS obstruction certified"));
}

#[test]
fn guard_exits_3() {
    let (code, v) = record(&[
        "--guard",
        "2",
        "ks-search",
        fixture("sigma_zx.scn").to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "size_guard");
}

#[test]
fn heyting_flags_excluded_middle() {
    let (code, v) = record(&["heyting", fixture("sierpinski.top").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        v["algebras"][0]["excluded_middle_failures"],
        serde_json::json!(["{a}"])
    );

    let discrete = tempfile::Builder::new().suffix(".top").tempfile().unwrap();
    std::fs::write(
        discrete.path(),
        "POINTS a b\nOPEN {}\nOPEN {a}\nOPEN {b}\nOPEN {a, b}\n",
    )
    .unwrap();
    let (_, v) = record(&["heyting", path(&discrete)]);
    assert_eq!(
        v["algebras"][0]["excluded_middle_failures"],
        serde_json::json!([])
    );

    let (_, v) = record(&["heyting", fixture("vposet.top").to_str().unwrap()]);
    let p = &v["algebras"][0];
    assert_eq!(p["context"], "Ω(p)");
    let fails: Vec<&str> = p["excluded_middle_failures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert!(fails.contains(&"{p->q}"));

    let (code, v) = record(&["heyting", fixture("sigma_z.scn").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["algebras"].as_array().unwrap().len(), 5);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["ks-search", "cabello18.scn"][..],
        &["ks-search", "sigma_zx.scn"],
        &["valuate", "sigma_z.scn"],
        &["heyting", "vposet.top"],
        &["category", "sigma_z.scn"],
    ] {
        let f = fixture(args[1]);
        let f = f.to_str().unwrap();
        for format in ["human", "record"] {
            let a = topos(&["--format", format, args[0], f]).stdout;
            let b = topos(&["--format", format, args[0], f]).stdout;
            let c = topos(&["--format", format, "--no-parallel", args[0], f]).stdout;
            assert_eq!(a, b, "{args:?}");
            assert_eq!(a, c, "{args:?}");
        }
    }
}

/// Human and record outputs carry the same counts and probabilities.
#[test]
fn formats_agree() {
    let f = fixture("sigma_z.scn");
    let f = f.to_str().unwrap();
    let human = String::from_utf8(topos(&["valuate", f]).stdout).unwrap();
    let (_, v) = record(&["valuate", f]);
    for q in v["queries"].as_array().unwrap() {
        let line = format!("  probability {}", q["probability"].as_str().unwrap());
        assert!(human.contains(&line));
        let sieve = format!(
            "  {} sieve, {} arrows",
            q["truth"].as_str().unwrap(),
            q["sieve"].as_array().unwrap().len()
        );
        assert!(human.contains(&sieve));
    }
    let human = String::from_utf8(topos(&["ks-search", f]).stdout).unwrap();
    let (_, v) = record(&["ks-search", f]);
    assert!(human.contains(&format!("dual presheaf: {}", v["section_count"])));
}
