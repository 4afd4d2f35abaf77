use std::fs;
use std::process::{Command, Output};

use tempfile::tempdir;

fn inobody(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inobody"))
        .args(args)
        .env_remove("INOBODY_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn body_product_of_curves() {
    let o = inobody(&["body", "product-curves", "--n", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["epsilons"], serde_json::json!(["1", "2", "3"]));
    assert_eq!(v["vol"], "6");
    let verts = v["straightened"]["vertices"].as_array().unwrap();
    assert_eq!(verts.len(), 4);
    assert!(verts.contains(&serde_json::json!(["0", "0", "3"])));
}

#[test]
fn body_blowup_svg() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("body.svg");
    let o = inobody(&[
        "body",
        "blowup-p2",
        "--u",
        "3",
        "--v",
        "1",
        "--format",
        "svg",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let svg = fs::read_to_string(path).unwrap();
    assert!(svg.contains("points=\"0,0 7,0 3,2 1,1\""), "{svg}");
}

#[test]
fn body_very_general_keeps_expected_failures_green() {
    let o = inobody(&[
        "body",
        "blowup-p2",
        "--u",
        "3",
        "--v",
        "1",
        "--very-general",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdicts"]["body_borel_fixed"]["pass"], false);
    assert_eq!(v["verdicts"]["body_borel_fixed"]["expected_failure"], true);
}

#[test]
fn body_csv_widths() {
    let o = inobody(&[
        "body",
        "blowup-pn",
        "--n",
        "2",
        "--a",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("index,t,width\n"));
    assert!(s.contains("\n2,3/2,1\n"), "{s}");
}

#[test]
fn body_usage_errors() {
    assert_eq!(
        code(&inobody(&["body", "blowup-pn", "--n", "2", "--a", "1"])),
        2
    );
    assert_eq!(code(&inobody(&["body", "no-such-family"])), 2);
    assert_eq!(code(&inobody(&["body", "quadric"])), 2);
    assert_eq!(code(&inobody(&["body", "quadric", "--n", "9"])), 2);
    assert_eq!(
        code(&inobody(&["body", "blowup-p2", "--u", "1.5", "--v", "1"])),
        2
    );
    assert_eq!(code(&inobody(&["frobnicate"])), 2);
    assert_eq!(
        code(&inobody(&["body", "jacobian-hyper", "--format", "svg"])),
        2
    );
}

#[test]
fn valset_hand_case_and_determinism() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("forms.txt");
    fs::write(
        &path,
        "# x1^2 and x1 x2 in three variables\n1:2,0,0\n1:1,1,0\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let a = inobody(&["valset", p, "--seed", "11"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(
        v["set"]["points"],
        serde_json::json!([[0, 0, 2], [0, 1, 1]])
    );
    assert_eq!(v["certificate"]["chart_seeds"].as_array().unwrap().len(), 3);
    let b = inobody(&["valset", p, "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_inobody"))
        .args(["valset", p])
        .env("INOBODY_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn valset_bad_input() {
    let dir = tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "# nothing\n").unwrap();
    assert_eq!(code(&inobody(&["valset", empty.to_str().unwrap()])), 2);
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1:2,0 3:1\n").unwrap();
    assert_eq!(code(&inobody(&["valset", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&inobody(&["valset", "/nonexistent/forms.txt"])), 2);
}

const MODEL: &str = r#"{
  "curves": ["l", "F", "E"],
  "gram": [["-1", "0", "1"], ["0", "-2", "1"], ["1", "1", "-1"]],
  "exceptional": "E",
  "pullback": ["4", "3", "7"],
  "volume": "15"
}"#;

#[test]
fn zariski_point_and_profile() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("model.json");
    fs::write(&path, MODEL).unwrap();
    let p = path.to_str().unwrap();
    let o = inobody(&["zariski", p, "--t", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["negative"],
        serde_json::json!([{"curve": "F", "multiplicity": "1/2"}])
    );
    let o = inobody(&["zariski", p, "--profile"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["breakpoints"], serde_json::json!(["1", "3", "7"]));
    assert_eq!(code(&inobody(&["zariski", p, "--t", "8"])), 1);
    assert_eq!(code(&inobody(&["zariski", p])), 2);
}

#[test]
fn zariski_rejects_asymmetric_gram() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("model.json");
    fs::write(
        &path,
        MODEL.replace(r#"["0", "-2", "1"]"#, r#"["5", "-2", "1"]"#),
    )
    .unwrap();
    assert_eq!(
        code(&inobody(&["zariski", path.to_str().unwrap(), "--t", "1"])),
        2
    );
    fs::write(&path, "{ not json").unwrap();
    assert_eq!(
        code(&inobody(&["zariski", path.to_str().unwrap(), "--profile"])),
        2
    );
}

#[test]
fn verify_suites() {
    let o = inobody(&["verify", "--suite", "borel", "--quick"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["results"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["passed"] == true));
    assert_eq!(code(&inobody(&["verify", "--suite", "nonsense"])), 2);
}

#[test]
fn verify_corrupted_fixture() {
    let dir = tempdir().unwrap();
    let good = inobody(&["body", "quadric", "--n", "2"]);
    let path = dir.path().join("fixture.json");
    fs::write(&path, &good.stdout).unwrap();
    assert_eq!(
        code(&inobody(&["verify", "--fixture", path.to_str().unwrap()])),
        0
    );
    let text = stdout(&good).replacen("\"vol\": \"2\"", "\"vol\": \"3\"", 1);
    fs::write(&path, text).unwrap();
    let o = inobody(&["verify", "--fixture", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bodies/volume"));
}
