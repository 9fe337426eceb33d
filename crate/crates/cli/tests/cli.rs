use std::fs;
use std::process::{Command, Output};

use serde_json::{Map, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aspherical"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Map<String, Value>, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    (v.as_object().unwrap().clone(), o.status.code().unwrap())
}

/// Parsed text report: every field becomes a string, a list of strings or a
/// list of `key: value` pairs.
#[derive(Debug, PartialEq)]
enum Field {
    Scalar(String),
    List(Vec<String>),
    Object(Vec<(String, String)>),
}

fn parse_text(text: &str) -> Vec<(String, Field)> {
    let mut out: Vec<(String, Field)> = Vec::new();
    let mut lines = text.lines().peekable();
    while let Some(line) = lines.next() {
        let (key, rest) = line.split_once(':').expect("key: value");
        let rest = rest.trim_start();
        let field = if rest == "|" {
            let mut block = Vec::new();
            while let Some(l) = lines.peek().and_then(|l| l.strip_prefix("  ")) {
                block.push(l.to_string());
                lines.next();
            }
            Field::Scalar(block.join("\n"))
        } else if rest == "[]" {
            Field::List(Vec::new())
        } else if rest.is_empty() {
            let mut items = Vec::new();
            let mut pairs = Vec::new();
            while let Some(l) = lines.peek().and_then(|l| l.strip_prefix("  ")) {
                if let Some(it) = l.strip_prefix("- ") {
                    items.push(it.to_string());
                } else {
                    let (k, v) = l.split_once(": ").unwrap();
                    pairs.push((k.to_string(), v.to_string()));
                }
                lines.next();
            }
            if pairs.is_empty() {
                Field::List(items)
            } else {
                Field::Object(pairs)
            }
        } else {
            Field::Scalar(rest.to_string())
        };
        out.push((key.to_string(), field));
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn from_json(m: &Map<String, Value>) -> Vec<(String, Field)> {
    m.iter()
        .map(|(k, v)| {
            let f = match v {
                Value::Array(items) => Field::List(
                    items
                        .iter()
                        .map(|it| match it {
                            Value::Object(o) => o
                                .iter()
                                .map(|(k, v)| format!("{k}={}", scalar(v)))
                                .collect::<Vec<_>>()
                                .join("; "),
                            other => scalar(other),
                        })
                        .collect(),
                ),
                Value::Object(o) => Field::Object(o.iter().map(|(k, v)| (k.clone(), scalar(v))).collect()),
                other => Field::Scalar(scalar(other)),
            };
            (k.clone(), f)
        })
        .collect()
}

fn assert_formats_agree(args: &[&str]) {
    let text = run(args);
    let (j, code) = json(args);
    assert_eq!(text.status.code().unwrap(), code, "{args:?}");
    assert_eq!(parse_text(&stdout(&text)), from_json(&j), "{args:?}");
}

#[test]
fn classify_exit_codes_and_notes() {
    let (r, code) = json(&["classify", "Z^2"]);
    assert_eq!(code, 0);
    assert_eq!(r["aspherical"], Value::Bool(true));
    assert_eq!(r["class_note"], "A\\B");
    assert_eq!(r["schema_version"], 1);

    let (r, code) = json(&["classify", "Z^3"]);
    assert_eq!(code, 3);
    assert_eq!(r["reason"], "RankThree");

    let (r, code) = json(&["classify", "Z^4+Z/2"]);
    assert_eq!(code, 0);
    assert_eq!(r["class_note"], "B\\A");
    assert_eq!(r["pi2_forced_nonzero_in_dim4"], Value::Bool(true));

    let o = run(&["classify", "Z^^2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn homology_examples() {
    let (r, _) = json(&["homology", "Z/2", "3"]);
    assert_eq!(r["homology"][3]["group"], "Z/2");
    let (r, _) = json(&["homology", "Z^4", "3"]);
    assert_eq!(r["homology"][3]["group"], "Z^4");
    let (r, _) = json(&["homology", "Z^4+Z/2", "3"]);
    assert_eq!(r["homology"][3]["group"], "Z^4 + Z/2 + Z/2 + Z/2 + Z/2 + Z/2 + Z/2 + Z/2");
    assert_eq!(r["h3_summand"]["summand"], "Z^4 + Z/2");
    assert_eq!(r["h3_summand"]["contained"], Value::Bool(true));
    let (r, _) = json(&["--max-degree", "2", "homology", "Z^3"]);
    assert_eq!(r["homology"].as_array().unwrap().len(), 3);
    assert!(r.get("h3_summand").is_none());
    assert_eq!(run(&["homology", "Z", "9"]).status.code(), Some(2));
}

#[test]
fn witness_examples() {
    let (r, code) = json(&["witness", "Z^2"]);
    assert_eq!(code, 0);
    assert_eq!(r["abelianization"], "Z^2");
    let (r, code) = json(&["witness", "Z^4+Z/2"]);
    assert_eq!(code, 0);
    assert_eq!(r["abelianization_check"], "PASS");
    let (r, code) = json(&["witness", "Z^3"]);
    assert_eq!(code, 3);
    assert_eq!(r["reason"], "RankThree");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    let o = run(&["witness", "Z^5", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let p: aspherical::Presentation = fs::read_to_string(&path).unwrap().parse().unwrap();
    assert_eq!(p.abelianization().to_string(), "Z^5");
}

#[test]
fn snf_examples() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    let id = write("id.txt", "1 0 0\n0 1 0\n0 0 1\n");
    let (r, _) = json(&["snf", &id]);
    assert_eq!(r["d"], "1 0 0\n0 1 0\n0 0 1");
    assert_eq!(r["cokernel"], "0");

    let m = write("m.txt", "# example\n2 4\n6 8\n");
    let (r, _) = json(&["snf", &m]);
    assert_eq!(r["diagonal"], serde_json::json!(["2", "4"]));
    assert_eq!(r["cokernel"], "Z/2 + Z/4");

    let z = write("z.txt", "0 0\n");
    let (r, _) = json(&["snf", &z]);
    assert_eq!(r["cokernel"], "Z^2");

    let bad = write("bad.txt", "1 2\n3\n");
    assert_eq!(run(&["snf", &bad]).status.code(), Some(2));
    assert_eq!(run(&["snf", "/nonexistent/matrix.txt"]).status.code(), Some(2));
}

#[test]
fn fibration_examples() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    let all = write("all.txt", "fibration kill\nfiber_genus 2\ncycle + a1\ncycle + b1\ncycle + a2\ncycle + b2\n");
    let (r, _) = json(&["fibration", &all]);
    assert_eq!(r["abelianization"], "0");
    assert_eq!(r["label"], "kill");

    let empty = write("empty.txt", "fiber_genus 3\n");
    let (r, _) = json(&["fibration", &empty]);
    assert_eq!(r["abelianization"], "Z^6");
    assert_eq!(r["homologically_trivial"], Value::Bool(true));
    assert_eq!(r["note"], Value::Null);

    let six = write("six.txt", &("fiber_genus 1\n".to_string() + &"cycle + a1\ncycle + b1\n".repeat(6)));
    let (r, _) = json(&["fibration", &six]);
    assert_eq!(r["homologically_trivial"], Value::Bool(true));
    assert_eq!(r["euler_characteristic"], 12);

    let bad = write("bad.txt", "cycle + a1\n");
    assert_eq!(run(&["fibration", &bad]).status.code(), Some(2));
}

#[test]
fn fibersum_examples() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.txt");
    fs::write(&x, "gens a1 b1 a2 b2\nrel [a1,b1] [a2,b2]\nrel a2^2\nrel b2\n").unwrap();
    let (r, code) = json(&["fibersum", x.to_str().unwrap(), "--base-genus", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["abelianization"], "Z^6 + Z/2");
    assert_eq!(r["check"], "PASS");

    let y = dir.path().join("y.txt");
    fs::write(&y, "gens p q\nrel p^2\n").unwrap();
    assert_eq!(run(&["fibersum", y.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn text_and_json_carry_the_same_fields() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    fs::write(&m, "2 4 4\n-6 6 12\n10 -4 -16\n").unwrap();
    let f = dir.path().join("f.txt");
    fs::write(&f, "fiber_genus 2\ncycle + a1 b1\ncycle - [a1,b2]\n").unwrap();
    let m = m.to_str().unwrap();
    let f = f.to_str().unwrap();
    for args in [
        vec!["classify", "Z^2"],
        vec!["classify", "Z^4"],
        vec!["classify", "Z^3+Z/7"],
        vec!["homology", "Z^2+Z/6", "4"],
        vec!["witness", "Z^4+Z/6"],
        vec!["witness", "Z^2+Z/2"],
        vec!["snf", m],
        vec!["fibration", f],
    ] {
        assert_formats_agree(&args);
    }
}

#[test]
fn output_is_deterministic() {
    for args in [["witness", "Z^5+Z/2"], ["homology", "Z^3+Z/4"], ["classify", "Z^6+Z/3+Z/6"]] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}
