use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

use dynror::json::{
    dynamic_to_doc, parse_document, problem_from_doc, problem_to_doc, signal_to_doc, Document, ProblemDoc,
};
use dynror::signal::validate;
use dynror::validate_dynamic;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn dynror(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dynror"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut input = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            input.write_all(s.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(run: &Run) -> Value {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("{e}: {}", run.stdout))
}

/// Re-ingests a signal document and checks it serializes back unchanged.
fn assert_document_roundtrip(v: &Value) {
    let doc = parse_document(v).unwrap();
    match &doc {
        Document::Static(s) => {
            assert!(validate(s).is_ok());
            assert_eq!(&serde_json::to_value(signal_to_doc(s)).unwrap(), v);
        }
        Document::Dynamic(d) => {
            assert!(validate_dynamic(d).is_ok());
            assert_eq!(&serde_json::to_value(dynamic_to_doc(d)).unwrap(), v);
        }
    }
}

#[test]
fn exit_code_table() {
    let ex = data("example1.json");
    let cases: Vec<(Vec<String>, Option<&str>, i32)> = vec![
        (vec!["validate".into(), ex.clone()], None, 0),
        (vec!["validate".into(), data("overlapping.json")], None, 2),
        (vec!["validate".into(), data("not_refining.json")], None, 2),
        (vec!["validate".into(), data("missing.json")], None, 3),
        (vec!["validate".into(), "-".into()], Some("[1, 2"), 3),
        (vec!["validate".into(), "-".into()], Some(r#"{"states":["a"],"cells":[{"id":"x","sections":{"b":[["0","1"]]}}]}"#), 3),
        (vec!["ror".into(), ex.clone(), ex.clone()], None, 0),
        (vec!["ror".into(), data("trivial.json"), data("revealing.json")], None, 1),
        (vec!["ror".into(), data("overlapping.json"), data("trivial.json")], None, 2),
        (vec!["dominates".into(), data("revealing.json"), data("trivial.json")], None, 0),
        (vec!["dominates".into(), data("blackwell_eta.json"), data("blackwell_etahat.json")], None, 1),
        (vec!["dominates".into(), "--as".into(), data("blackwell_eta.json"), data("blackwell_etahat.json")], None, 1),
        (vec!["dominates".into(), "--nonrobust".into(), data("revealing.json"), data("trivial.json")], None, 0),
        (vec!["dominates".into(), ex.clone(), data("trivial.json")], None, 2),
        (vec!["falsify".into(), data("blackwell_eta.json"), data("blackwell_etahat.json")], None, 1),
        (vec!["falsify".into(), data("revealing.json"), data("trivial.json")], None, 0),
        (vec!["value".into(), ex.clone(), data("example1_problem.json")], None, 0),
        (vec!["value".into(), ex.clone(), data("guess_problem.json")], None, 2),
        (vec!["value".into(), ex.clone(), data("example1_problem.json"), "--prior".into(), r#"{"L":"1"}"#.into()], None, 3),
        (vec!["value".into(), ex.clone(), data("example1_problem.json"), "--prior".into(), r#"{"L":"1/2","H":"1/4"}"#.into()], None, 3),
        (vec!["experiment".into(), ex.clone()], None, 0),
        (vec!["join".into(), ex.clone(), ex.clone()], None, 0),
        (vec!["gen".into(), "--kind".into(), "problem".into(), "--seed".into(), "9".into()], None, 0),
        (vec!["gen".into(), "--kind".into(), "nonsense".into()], None, 3),
        (vec!["demo-example1".into()], None, 0),
    ];
    for (args, stdin, code) in cases {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let run = dynror(&argv, stdin);
        assert_eq!(run.code, code, "{argv:?}\nstdout: {}\nstderr: {}", run.stdout, run.stderr);
    }
}

#[test]
fn demo_experiment_pipeline() {
    let demo = dynror(&["demo-example1"], None);
    let run = dynror(&["experiment", "-"], Some(&demo.stdout));
    assert_eq!(run.code, 0);
    let v = json(&run);
    let p = |a: &str, b: &str, s: &str| {
        v["table"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["path"] == serde_json::json!([a, b]) && r["state"] == s)
            .map(|r| r["p"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(p("h", "hH", "L"), "1/4");
    assert_eq!(p("h", "hH", "H"), "3/4");
    assert_eq!(p("l", "lH", "L"), "1/2");
    assert_eq!(p("l", "lH", "H"), "0");
    assert_eq!(p("l", "lL", "L"), "1/4");
    assert_eq!(p("l", "lL", "H"), "1/4");
    assert_eq!(p("h", "lL", "L"), "0");
    assert_eq!(p("h", "lL", "H"), "0");
    // the embedded table agrees with the one recomputed from the fixture
    assert_eq!(json(&demo)["experiment"], v);
}

#[test]
fn self_comparison_refines_itself() {
    let ex = data("example1.json");
    let run = dynror(&["ror", &ex, &ex], None);
    let v = json(&run);
    let lines: Vec<&str> = v["summary"].as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect();
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l.ends_with("refine (self)")), "{lines:?}");
}

#[test]
fn blackwell_falsification() {
    let run = dynror(
        &["falsify", &data("blackwell_eta.json"), &data("blackwell_etahat.json"), "--prior", "uniform", "--decimal"],
        None,
    );
    assert_eq!(run.code, 1);
    let v = json(&run);
    assert_eq!(v["status"], "counterexample");
    assert_eq!(v["construction"], "guided-swap");
    assert_eq!(v["w_dominant"], "3/4");
    assert_eq!(v["w_dominated"], "1");
    assert_eq!(v["w_dominant_decimal"], "~0.750000");
    // the emitted problem re-ingests and reproduces both values
    let doc: ProblemDoc = serde_json::from_value(v["problem"].clone()).unwrap();
    let problem = problem_from_doc(&doc, None).unwrap();
    assert_eq!(serde_json::to_value(problem_to_doc(&problem)).unwrap(), v["problem"]);
    let (eta, hat) = dynror::fixtures::blackwell_pair();
    let prior = dynror::Prior::uniform(eta.states());
    let once = |s| dynror::DynamicSignal::constant(s, 1);
    assert_eq!(dynror::value(&once(&eta), &problem, &prior).unwrap().value.to_string(), "3/4");
    assert_eq!(dynror::value(&once(&hat), &problem, &prior).unwrap().value.to_string(), "1");
}

#[test]
fn value_of_example() {
    let ex = data("example1.json");
    let run = dynror(&["value", &ex, &data("example1_problem.json"), "--decimal"], None);
    let v = json(&run);
    assert_eq!(v["value"], "3/4");
    assert_eq!(v["value_decimal"], "~0.750000");
    assert_eq!(v["strategy"][1]["(lH,*)"], "guess-L");
    let brute = dynror(&["value", &ex, &data("example1_problem.json"), "--bruteforce"], None);
    assert_eq!(json(&brute)["value"], "3/4");
    let prior_file = dynror(&["value", &ex, &data("example1_problem.json"), "--prior", &data("skewed_prior.json")], None);
    assert_eq!(prior_file.code, 0, "{}", prior_file.stderr);
}

#[test]
fn emitted_json_reingests() {
    for kind in ["signal", "dynamic"] {
        for seed in 0..5 {
            let run = dynror(&["gen", "--kind", kind, "--seed", &seed.to_string()], None);
            assert_document_roundtrip(&json(&run));
        }
    }
    for seed in 0..5 {
        let v = json(&dynror(&["gen", "--kind", "problem", "--seed", &seed.to_string()], None));
        let doc: ProblemDoc = serde_json::from_value(v.clone()).unwrap();
        let problem = problem_from_doc(&doc, None).unwrap();
        assert_eq!(serde_json::to_value(problem_to_doc(&problem)).unwrap(), v);
    }
    let ex = data("example1.json");
    assert_document_roundtrip(&json(&dynror(&["join", &ex, &data("example1.json")], None)));
    assert_document_roundtrip(&json(&dynror(&["join", &data("blackwell_eta.json"), &data("blackwell_etahat.json")], None)));
    let mut demo = json(&dynror(&["demo-example1"], None));
    demo.as_object_mut().unwrap().remove("experiment");
    assert_document_roundtrip(&demo);

    let corpus = json(&dynror(&["gen", "--kind", "dynamic", "--seed", "1", "--count", "6"], None));
    for item in corpus.as_array().unwrap() {
        assert_document_roundtrip(item);
    }
}

#[test]
fn outputs_are_byte_identical() {
    let ex = data("example1.json");
    let invocations: Vec<Vec<&str>> = vec![
        vec!["gen", "--kind", "problem", "--seed", "11", "--max-cells", "6"],
        vec!["falsify", "--seed", "3", &ex, &ex],
        vec!["experiment", &ex],
        vec!["render", &ex],
        vec!["ror", &ex, &ex],
    ];
    for args in invocations {
        assert_eq!(dynror(&args, None).stdout, dynror(&args, None).stdout, "{args:?}");
    }
}

#[test]
fn render_writes_svg() {
    let dir = std::env::temp_dir().join(format!("dynror-render-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig.svg");
    let run = dynror(&["render", &data("example1.json"), "-o", path.to_str().unwrap()], None);
    assert_eq!(run.code, 0);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("period ").count(), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn validation_messages() {
    let run = dynror(&["validate", &data("overlapping.json")], None);
    let v = json(&run);
    assert_eq!(v["valid"], false);
    assert_eq!(v["violation"]["kind"], "overlap");
    let run = dynror(&["validate", &data("not_refining.json")], None);
    assert_eq!(json(&run)["violation"]["kind"], "not-refining");
}
