use std::path::PathBuf;
use std::process::{Command, Output};

use butterfly_core::io::{parse_compact, parse_family};
use butterfly_core::search::listed_exceptions;
use butterfly_core::{Family, GroundSize};
use serde_json::Value;

fn butterfly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_butterfly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = butterfly(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "invalid JSON from {args:?}: {e}\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    });
    (code(&out), v)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("butterfly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn two_levels(n: usize, k: usize) -> Family {
    Family::two_levels(GroundSize::new(n).unwrap(), k).unwrap()
}

#[test]
fn check_reports_butterfly_witness() {
    let path = temp_file("chain.txt", "n=3\n{}\n1\n1,2\n1,2,3\n");
    let (c, v) = json(&["check", path.to_str().unwrap(), "--condition", "star"]);
    assert_eq!(c, 1);
    let verdict = &v["verdicts"][0];
    assert_eq!(verdict["satisfied"], false);
    assert_eq!(verdict["witness"]["a"], serde_json::json!([]));
    assert_eq!(verdict["witness"]["b"], serde_json::json!([1]));
    assert_eq!(verdict["witness"]["c"], serde_json::json!([1, 2]));
    assert_eq!(verdict["witness"]["d"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["exit_code"], 1);
}

#[test]
fn check_passes_two_levels() {
    for cond in ["star", "fork"] {
        let out = butterfly(&["check", "level:4:2", "--condition", cond]);
        assert_eq!(code(&out), 0, "{cond}");
    }
    assert_eq!(code(&butterfly(&["check", "two-levels:4:2"])), 0);
    assert_eq!(
        code(&butterfly(&[
            "check",
            "level:5:2",
            "--condition",
            "antichain"
        ])),
        0
    );
    assert_eq!(
        code(&butterfly(&[
            "check",
            "two-levels:3:1",
            "--condition",
            "antichain"
        ])),
        1
    );
    assert_eq!(
        code(&butterfly(&[
            "check",
            "two-levels:3:1",
            "--condition",
            "fork"
        ])),
        1
    );
}

#[test]
fn listed_n3_family_is_reported_as_violating() {
    let (c, v) = json(&["check", "exceptional-n3"]);
    assert_eq!(c, 1);
    assert_eq!(v["verdicts"][0]["witness"]["c"], serde_json::json!([1, 2]));
    assert_eq!(v["verdicts"][0]["witness"]["d"], serde_json::json!([1, 3]));
    assert_eq!(code(&butterfly(&["check", "exceptional-n4"])), 0);
}

#[test]
fn malformed_input_exits_2_with_line_number() {
    let path = temp_file("bad.txt", "n=3\n1\n1,x\n");
    let out = butterfly(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.txt:3:"), "{err}");

    let garbage = temp_file("garbage.txt", "this is not a family\n");
    assert_eq!(code(&butterfly(&["check", garbage.to_str().unwrap()])), 2);
    assert_eq!(code(&butterfly(&["check", "no-such-fixture"])), 2);
    assert_eq!(code(&butterfly(&["check", "two-levels:3:x"])), 2);
    assert_eq!(code(&butterfly(&["check"])), 2);
    assert_eq!(code(&butterfly(&["frobnicate"])), 2);
}

#[test]
fn lym_prints_exact_fractions() {
    let (c, v) = json(&["lym", "two-levels:3:1", "--theorem2"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdicts"][0]["lym_sum"], "2/1");
    assert_eq!(v["verdicts"][1]["equality"], true);
    assert_eq!(v["verdicts"][1]["hypotheses_ok"], true);

    let (_, v) = json(&["lym", "level:4:2"]);
    assert_eq!(v["verdicts"][0]["lym_sum"], "1/1");

    let (c, v) = json(&["lym", "exceptional-n3", "--theorem2"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdicts"][0]["lym_sum"], "8/3");
    assert_eq!(v["verdicts"][1]["hypotheses_ok"], false);
    assert_eq!(v["verdicts"][1]["holds"], false);

    let text = stdout(&butterfly(&["lym", "exceptional-n4", "--theorem2"]));
    assert!(text.contains("2/1"), "{text}");
}

#[test]
fn audit_double_count() {
    let (c, v) = json(&["audit", "two-levels:4:2"]);
    assert_eq!(c, 0);
    let a = &v["verdicts"][0];
    assert_eq!(a["lhs"], "48");
    assert_eq!(a["rhs"], "48");
    assert_eq!(a["pair_count"], "48");
    assert_eq!(a["equality"], true);

    let path = temp_file("with-empty.txt", "n=3\n{}\n1\n");
    let out = butterfly(&["audit", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("precondition"));
}

#[test]
fn audit_interval_sweep() {
    let out = butterfly(&["audit", "--all-intervals", "4"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("all 2^12 interval families checked, 0 counterexamples"));
    let (_, v) = json(&["audit", "--all-intervals", "3"]);
    assert_eq!(v["verdicts"][0]["families_checked"], 64);
    assert_eq!(code(&butterfly(&["audit", "--all-intervals", "5"])), 2);
    assert_eq!(code(&butterfly(&["audit"])), 2);
}

#[test]
fn search_enumerates_n4_catalog() {
    let (c, v) = json(&["search", "4", "star", "--enumerate"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdicts"][0]["optimum"], 10);
    assert_eq!(v["verdicts"][0]["proof_complete"], true);
    let catalog = v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x.get("classes").is_some())
        .expect("catalog verdict");
    assert_eq!(catalog["class_count"], 3);
    let classes: Vec<Family> = catalog["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| parse_compact(4, c.as_str().unwrap()).unwrap())
        .collect();
    for expected in [
        two_levels(4, 1),
        two_levels(4, 2),
        listed_exceptions(4).remove(0),
    ] {
        let canon = expected.canonical_form().unwrap();
        assert!(classes.contains(&canon), "{}", expected.to_compact());
    }
}

#[test]
fn search_small_optima() {
    let (c, v) = json(&["search", "3", "star"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdicts"][0]["optimum"], 6);
    assert_eq!(v["verdicts"][1]["consistent"], true);

    let (c, v) = json(&["search", "2", "star"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdicts"][0]["optimum"], 4);
    assert!(v["verdicts"][1]["note"]
        .as_str()
        .unwrap()
        .contains("n >= 3"));

    let (c, v) = json(&["search", "4", "fork-free"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdicts"][0]["optimum"], 7);
    assert_eq!(v["verdicts"][1]["value"], "18/1");
}

#[test]
fn search_budget_exhaustion_exits_3() {
    let (c, v) = json(&["search", "5", "star", "--budget", "10"]);
    assert_eq!(c, 3);
    assert_eq!(v["verdicts"][0]["proof_complete"], false);
    assert_eq!(v["status"], "budget_exhausted");
    assert_eq!(
        code(&butterfly(&["search", "5", "star", "--budget", "0s"])),
        3
    );
    assert_eq!(
        code(&butterfly(&["search", "5", "star", "--budget", "soon"])),
        2
    );
    assert_eq!(code(&butterfly(&["search", "7", "star"])), 2);
    assert_eq!(code(&butterfly(&["search", "4", "squares"])), 2);
}

#[test]
fn search_is_deterministic_across_threads() {
    let runs: Vec<Value> = ["1", "3"]
        .iter()
        .map(|t| {
            json(&["search", "5", "star", "--enumerate", "--threads", t]).1["verdicts"].clone()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn search_exports_cnf() {
    let path = std::env::temp_dir().join(format!("butterfly-{}.cnf", std::process::id()));
    let out = butterfly(&[
        "search",
        "3",
        "star",
        "--export-cnf",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let cnf = std::fs::read_to_string(&path).unwrap();
    assert!(cnf.lines().any(|l| l.starts_with("p cnf 8 ")), "{cnf}");
    std::fs::remove_file(path).ok();
}

#[test]
fn proptest_suites_pass_and_repeat() {
    let args = ["proptest", "5", "--cases", "1000", "--seed", "42"];
    let (c, a) = json(&args);
    assert_eq!(c, 0);
    assert_eq!(a["seed"], 42);
    let lym = &a["verdicts"][0];
    assert_eq!(lym["suite"], "lym_sum_at_most_2");
    assert_eq!(lym["counterexamples"], 0);
    let max = lym["max_observed"].as_str().unwrap();
    let (p, q) = max.split_once('/').unwrap();
    assert!(p.parse::<u64>().unwrap() <= 2 * q.parse::<u64>().unwrap());

    let (_, b) = json(&args);
    assert_eq!(a["verdicts"], b["verdicts"]);
    let text_a = stdout(&butterfly(&args[..]));
    let text_b = stdout(&butterfly(&args[..]));
    assert_eq!(text_a, text_b);
}

#[test]
fn proptest_two_element_sweep() {
    let (c, v) = json(&["proptest", "2"]);
    assert_eq!(c, 0);
    let sweep = &v["verdicts"][0];
    assert_eq!(sweep["suite"], "star_size_exhaustive");
    assert_eq!(sweep["max_observed"], "4");
    assert_eq!(sweep["cases"], 16);
    assert!(sweep["note"].as_str().unwrap().contains("n >= 3"));
    assert_eq!(code(&butterfly(&["proptest", "8"])), 2);
}

#[test]
fn printed_families_parse_back() {
    let out = butterfly(&["check", "exceptional-n3"]);
    let text = stdout(&out);
    let block: String = text
        .lines()
        .skip_while(|l| *l != "family")
        .skip(1)
        .map(|l| format!("{}\n", l.trim()))
        .collect();
    assert_eq!(
        parse_family(&block).unwrap(),
        listed_exceptions(3).remove(0)
    );

    let (_, v) = json(&["lym", "two-levels:5:2"]);
    let echoed: Family = serde_json::from_value(v["inputs"]["family"].clone()).unwrap();
    assert_eq!(echoed, two_levels(5, 2));

    let (_, v) = json(&["search", "4", "star"]);
    let witness: Family = serde_json::from_value(v["verdicts"][0]["witness"].clone()).unwrap();
    assert_eq!(witness.len(), 10);
}

#[test]
fn reads_family_from_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_butterfly"))
        .args(["lym", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"n=4\n1,2\n3,4\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("1/3"));
}
