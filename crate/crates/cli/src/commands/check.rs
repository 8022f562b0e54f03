use butterfly_core::conditions::{find_fork_violation, find_star_violation};
use butterfly_core::io::format_family;
use butterfly_core::Family;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input;
use crate::report::{CliError, Outcome, RunReport, Status, Table};
use crate::Condition;

#[derive(Serialize)]
struct CheckVerdict {
    condition: &'static str,
    satisfied: bool,
    witness: Option<Value>,
}

fn elements(s: butterfly_core::Subset) -> Vec<usize> {
    s.elements().collect()
}

/// First comparable pair `a ⊂ b`.
fn find_comparable(f: &Family) -> Option<(butterfly_core::Subset, butterfly_core::Subset)> {
    let m = f.members();
    m.iter().enumerate().find_map(|(i, &a)| {
        m[i + 1..]
            .iter()
            .find(|&&b| a.is_proper_subset_of(b))
            .map(|&b| (a, b))
    })
}

pub fn run(source: &str, condition: Condition) -> Result<Outcome, CliError> {
    let input = input::load(source)?;
    let f = &input.family;
    let (name, witness, shown) = match condition {
        Condition::Star => {
            let w = find_star_violation(f);
            let shown =
                w.map(|w| format!("A={} B={} C={} D={}  (A ∪ B ⊆ C ∩ D)", w.a, w.b, w.c, w.d));
            (
                "star",
                w.map(|w| serde_json::to_value(w).expect("witness")),
                shown,
            )
        }
        Condition::Fork => {
            let w = find_fork_violation(f);
            let shown = w.map(|w| format!("A={} B={} C={}  (A ⊂ B, A ⊂ C)", w.a, w.b, w.c));
            (
                "fork",
                w.map(|w| serde_json::to_value(w).expect("witness")),
                shown,
            )
        }
        Condition::Antichain => {
            let w = find_comparable(f);
            let shown = w.map(|(a, b)| format!("A={a} B={b}  (A ⊂ B)"));
            (
                "antichain",
                w.map(|(a, b)| json!({ "a": elements(a), "b": elements(b) })),
                shown,
            )
        }
    };
    let satisfied = witness.is_none();

    let mut report = RunReport::new(
        "check",
        json!({ "source": input.source, "condition": name, "family": f }),
    );
    report.verdict(CheckVerdict {
        condition: name,
        satisfied,
        witness,
    });
    report.set_status(if satisfied {
        Status::Pass
    } else {
        Status::Violation
    });

    let mut t = Table::default();
    t.row("input", &input.source)
        .row("ground size", f.n())
        .row("members", f.len())
        .row("condition", name)
        .row("verdict", if satisfied { "satisfied" } else { "violated" });
    if let Some(shown) = shown {
        t.row("witness", shown);
    }
    if !satisfied {
        t.block("family", &format_family(f));
    }
    Ok(Outcome {
        report,
        text: t.finish(),
    })
}
