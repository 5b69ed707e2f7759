use std::path::{Path, PathBuf};

use idm_cli::{run, ModelFile, ReportFile, EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    text: String,
}

fn idm(dir: &Path, args: &[&str]) -> Run {
    let out = dir.join(format!("out-{}.txt", args.join("_").replace(['/', ','], "-")));
    let mut full = vec!["idm".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    full.extend(["--out".to_string(), out.display().to_string()]);
    let code = run(full);
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    Run { code, text }
}

fn report(r: &Run) -> ReportFile {
    serde_json::from_str(&r.text).unwrap_or_else(|e| panic!("{e}: {}", r.text))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn export(dir: &Path, name: &str) -> PathBuf {
    let r = idm(dir, &["export", "--builtin", name]);
    assert_eq!(r.code, EXIT_OK);
    write(dir, &format!("{name}.json"), &r.text)
}

#[test]
fn exported_model_validates_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let path = export(dir.path(), "witsenhausen-xor");
    let p = path.to_str().unwrap();
    let r = idm(dir.path(), &["validate", "--model", p]);
    assert_eq!(r.code, EXIT_OK, "{}", r.text);
    assert_eq!(report(&r).verdict, "valid");

    let again = idm(dir.path(), &["export", "--model", p]);
    let first: ModelFile = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let second: ModelFile = serde_json::from_str(&again.text).unwrap();
    assert_eq!(first, second);
    assert_eq!(first.to_model().unwrap(), idm_core::model::builtin("witsenhausen-xor").unwrap());
}

#[test]
fn model_file_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let path = export(dir.path(), "common-cause");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["info"]["T"]["mask"]["decision"] = serde_json::json!(["Q"]);
    let bad = write(dir.path(), "bad.json", &v.to_string());
    assert_eq!(idm(dir.path(), &["validate", "--model", bad.to_str().unwrap()]).code, EXIT_ERROR);

    let garbage = write(dir.path(), "garbage.json", "{ not json");
    assert_eq!(idm(dir.path(), &["validate", "--model", garbage.to_str().unwrap()]).code, EXIT_ERROR);
    assert_eq!(idm(dir.path(), &["validate", "--builtin", "no-such-model"]).code, EXIT_ERROR);
    assert_eq!(idm(dir.path(), &["validate"]).code, EXIT_ERROR);
    assert_eq!(idm(dir.path(), &["separate", "--builtin", "jpcbh", "--y", "X1"]).code, EXIT_ERROR);
    assert_eq!(idm(dir.path(), &["frobnicate"]).code, EXIT_ERROR);
}

#[test]
fn foreign_noise_fails_validation_with_witness() {
    let dir = TempDir::new().unwrap();
    let path = export(dir.path(), "common-cause");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["info"]["T"]["mask"]["nature"] = serde_json::json!(["T", "Z"]);
    v.as_object_mut().unwrap().remove("policies");
    let bad = write(dir.path(), "foreign.json", &v.to_string());
    let r = idm(dir.path(), &["validate", "--model", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    let rep = report(&r);
    assert_eq!(rep.verdict, "invalid");
    assert!(rep.counterexamples[0].starts_with("T:"));
    let r = idm(dir.path(), &["validate", "--model", bad.to_str().unwrap(), "--no-local-noise"]);
    assert_eq!(r.code, EXIT_OK);
}

#[test]
fn separation_verdicts() {
    let dir = TempDir::new().unwrap();
    let r = idm(dir.path(), &["separate", "--builtin", "jpcbh", "--y", "X1", "--z", "X2", "--w", "Y1,Y2"]);
    assert_eq!(r.code, EXIT_OK);
    let cert = report(&r).certificate.unwrap();
    assert_eq!(cert.w_y, ["Y1"]);
    assert_eq!(cert.closure_y, ["xi1", "X1", "Y1"]);

    let r = idm(dir.path(), &["separate", "--builtin", "witsenhausen-xor", "--y", "X3", "--z", "X4", "--w", "X0,X1"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert_eq!(report(&r).verdict, "not separated");

    let r = idm(dir.path(), &["separate", "--builtin", "witsenhausen-xor", "--y", "X3", "--z", "X3"]);
    assert_eq!(r.code, EXIT_ERROR);

    let r = idm(dir.path(), &["closure", "--builtin", "kuh", "--set", "Y1,W", "--w", "W"]);
    assert_eq!(report(&r).verdict, "{X3,Y1,W}");

    let r = idm(dir.path(), &["dsep", "--builtin", "kuh", "--y", "Y1", "--z", "Y2", "--w", "W"]);
    assert_eq!(r.code, EXIT_OK);
    let r = idm(dir.path(), &["dsep", "--builtin", "kuh", "--y", "Y1", "--z", "Y2", "--w", "W,X1"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    let r = idm(dir.path(), &["dsep", "--builtin", "jpcbh", "--y", "X1", "--z", "X2"]);
    assert_eq!(r.code, EXIT_ERROR);
}

#[test]
fn contexts_by_pins_and_by_configuration_list() {
    let dir = TempDir::new().unwrap();
    let r = idm(dir.path(), &["precedence", "--builtin", "tikka-context", "--context", "s=0", "--format", "tsv"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.text.contains("b\t\n") || r.text.contains("b\t\r\n"), "{}", r.text);
    let r = idm(dir.path(), &["precedence", "--builtin", "tikka-context", "--context", "s=1", "--format", "tsv"]);
    assert!(r.text.contains("a\t\nb\ta\n"), "{}", r.text);

    let configs: Vec<Value> = (0..8)
        .map(|k| {
            serde_json::json!({
                "nature": { "s": (k & 1).to_string(), "a": (k >> 1 & 1).to_string(), "b": (k >> 2 & 1).to_string() },
                "decision": { "s": "0", "a": "0", "b": "0" },
            })
        })
        .collect();
    let ctx = write(dir.path(), "ctx.json", &Value::Array(configs).to_string());
    let r = idm(
        dir.path(),
        &["closure", "--builtin", "tikka-context", "--set", "b", "--context-file", ctx.to_str().unwrap()],
    );
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(report(&r).verdict, "{b}");
    let r = idm(dir.path(), &["closure", "--builtin", "tikka-context", "--set", "b", "--context", "s=7"]);
    assert_eq!(r.code, EXIT_ERROR);
}

#[test]
fn conditional_table_matches_the_published_layout() {
    let dir = TempDir::new().unwrap();
    let r = idm(
        dir.path(),
        &["dist", "--builtin", "witsenhausen-xor", "--target", "X4", "--given", "X0,X1,X2,X3", "--format", "tsv"],
    );
    assert_eq!(r.code, EXIT_OK);
    assert!(r.text.contains("X0\tX1\tX2\tX3\tX4\tp\texact\n"), "{}", r.text);
    assert!(r.text.contains("0\t0\t0\t0\t1\t0.012\t1/82\n"));
    assert!(r.text.contains("0\t0\t1\t1\t1\t0.500\t1/2\n"));
    let r = idm(dir.path(), &["dist", "--builtin", "witsenhausen-xor", "--target", "X4", "--given", "X0,X1,X3"]);
    let rows = &report(&r).tables[0].rows;
    assert!(rows.contains(&["0", "1", "1", "1", "0.474", "73/154"].map(String::from).to_vec()));
}

#[test]
fn independence_and_theorem_runs() {
    let dir = TempDir::new().unwrap();
    let xor = ["--builtin", "witsenhausen-xor"];
    let r = idm(dir.path(), &[&["ci"][..], &xor, &["--a", "X3", "--b", "X4", "--given", "X0,X1"]].concat());
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(!report(&r).counterexamples.is_empty());

    let args = [&["docalc"][..], &xor, &["--y", "X3", "--z", "X4", "--w", "X0,X1,X2", "--policy-trials", "6", "--seed", "3"]].concat();
    let r = idm(dir.path(), &args);
    assert_eq!(r.code, EXIT_OK, "{}", r.text);
    let first = report(&r);
    assert!(first.verdict.starts_with("0 failures"));
    let again = report(&idm(dir.path(), &args));
    assert_eq!(first.details, again.details);

    let r = idm(dir.path(), &["rule1", "--builtin", "tikka-context", "--y", "b", "--z", "a", "--pin", "s=0", "--policy-trials", "6"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.text);
    let r = idm(dir.path(), &["rule1", "--builtin", "tikka-context", "--y", "b", "--z", "a", "--pin", "s=1", "--policy-trials", "6"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
}

#[test]
fn solvability_and_causality() {
    let dir = TempDir::new().unwrap();
    let r = idm(dir.path(), &["solve", "--builtin", "witsenhausen-xor"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(report(&r).tables[0].rows.len(), 32);
    let r = idm(dir.path(), &["solve", "--builtin", "mutual-observation", "--all-profiles"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    let rep = report(&r);
    assert_eq!(rep.verdict, "unsolvable (exhaustive)");
    assert!(rep.details["witness"].is_object());
    let r = idm(dir.path(), &["solve", "--builtin", "common-cause", "--all-profiles"]);
    assert_eq!(r.code, EXIT_OK);

    let r = idm(dir.path(), &["causality", "--builtin", "witsenhausen-xor"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert_eq!(report(&r).verdict, "no causal ordering found (exhaustive)");
    let r = idm(dir.path(), &["causality", "--builtin", "common-cause", "--order", "Z,T,Y"]);
    assert_eq!(r.code, EXIT_OK);
    let r = idm(dir.path(), &["causality", "--builtin", "common-cause", "--order", "Y,T,Z"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    let r = idm(dir.path(), &["causality", "--builtin", "tikka-context"]);
    assert_eq!(r.code, EXIT_OK);
}

#[test]
fn intervened_model_is_a_valid_model_file() {
    let dir = TempDir::new().unwrap();
    let r = idm(dir.path(), &["intervene", "--builtin", "common-cause", "--targets", "T"]);
    assert_eq!(r.code, EXIT_OK);
    let file: ModelFile = serde_json::from_str(&r.text).unwrap();
    assert_eq!(file.agents, ["Z", "T", "Y", "I"]);
    let path = write(dir.path(), "do.json", &r.text);
    let p = path.to_str().unwrap();
    assert_eq!(idm(dir.path(), &["validate", "--model", p]).code, EXIT_OK);
    let r = idm(dir.path(), &["precedence", "--model", p, "--context", "I=1", "--format", "tsv"]);
    assert!(r.text.contains("T\t\n"), "{}", r.text);
    assert_eq!(idm(dir.path(), &["intervene", "--builtin", "common-cause", "--targets", "T", "--switch-prob", "1"]).code, EXIT_ERROR);
}

#[test]
fn golden_scenarios_pass() {
    let dir = TempDir::new().unwrap();
    for name in ["table1", "fig2", "fig3", "fig4"] {
        let r = idm(dir.path(), &["reproduce", name]);
        assert_eq!(r.code, EXIT_OK, "{name}: {}", r.text);
        assert_eq!(report(&r).verdict, "pass");
    }
    let r = idm(dir.path(), &["reproduce", "table1", "--format", "tsv"]);
    assert!(r.text.contains("b\t0,0\t0\t1/42\t0.024\t0.023\t0.023\ttrue\n"), "{}", r.text);
    let r = idm(dir.path(), &["reproduce", "equivalence", "--seed", "11"]);
    assert_eq!(r.code, EXIT_OK);
}
