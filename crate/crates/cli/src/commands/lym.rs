use butterfly_core::lym::{check_theorem2, lym_sum};
use serde_json::json;

use crate::input;
use crate::report::{CliError, Outcome, RunReport, Status, Table};

pub fn run(source: &str, bound: bool) -> Result<Outcome, CliError> {
    let input = input::load(source)?;
    let f = &input.family;
    let sum = lym_sum(f);

    let mut report = RunReport::new(
        "lym",
        json!({ "source": input.source, "theorem2": bound, "family": f }),
    );
    report.verdict(json!({ "lym_sum": sum }));

    let mut t = Table::default();
    t.row("input", &input.source)
        .row("ground size", f.n())
        .row("members", f.len())
        .row("lym sum", &sum);

    if bound {
        let v = check_theorem2(f);
        t.row("bound", format!("{} <= {}", v.lhs, v.rhs))
            .row("holds", v.holds)
            .row("equality", v.equality)
            .row("hypotheses met", v.hypotheses_ok);
        if !v.hypotheses_ok {
            t.row("hypothesis failures", v.hypothesis_failures.join(", "));
        }
        if !v.consistent() {
            report.set_status(Status::Violation);
        }
        report.verdict(&v);
    }
    Ok(Outcome {
        report,
        text: t.finish(),
    })
}
