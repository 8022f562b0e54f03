use std::path::PathBuf;
use std::time::Duration;

use butterfly_core::io::format_family;
use butterfly_core::lym::corollary2_bound;
use butterfly_core::search::{
    enumerate_max_families, export_cnf, max_family, Budget, SearchError, SearchOptions,
    SearchResult, SEARCH_MAX_N,
};
use butterfly_core::{two_largest_binomials, Predicate, Rat};
use serde_json::json;

use super::BudgetArg;
use crate::report::{CliError, Outcome, RunReport, Status, Table};

pub struct SearchArgs {
    pub n: usize,
    pub predicate: Predicate,
    pub enumerate: bool,
    pub budget: Option<BudgetArg>,
    pub threads: usize,
    pub export_cnf: Option<PathBuf>,
}

/// Applied when `--budget` is absent and the optimum is not expected to certify quickly.
const DEFAULT_N6_BUDGET: Duration = Duration::from_secs(300);

pub fn run(args: SearchArgs) -> Result<Outcome, CliError> {
    let n = args.n;
    if !(1..=SEARCH_MAX_N).contains(&n) {
        return Err(CliError(format!(
            "n={n} outside the supported range 1..={SEARCH_MAX_N}"
        )));
    }
    let budget = match args.budget {
        Some(BudgetArg(b)) => b,
        None if n == SEARCH_MAX_N => Budget::time(DEFAULT_N6_BUDGET),
        None => Budget::unlimited(),
    };
    let options = SearchOptions {
        budget,
        threads: args.threads,
    };

    let mut report = RunReport::new(
        "search",
        json!({
            "n": n,
            "predicate": args.predicate,
            "enumerate": args.enumerate,
            "max_nodes": budget.max_nodes,
            "max_time_ms": budget.max_time.map(|d| d.as_millis() as u64),
            "threads": args.threads,
            "export_cnf": args.export_cnf,
        }),
    );
    let mut t = Table::default();
    t.row("ground size", n).row("predicate", args.predicate);

    if let Some(path) = &args.export_cnf {
        let cnf = export_cnf(n, args.predicate)?;
        std::fs::write(path, cnf).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        t.row("cnf written to", path.display());
    }

    let result = match max_family(n, args.predicate, options) {
        Ok(r) => r,
        Err(SearchError::BudgetExhausted(r)) => {
            describe(&mut t, &r);
            t.row("status", "budget exhausted; optimum not certified");
            report.verdict(&*r);
            report.set_status(Status::BudgetExhausted);
            return Ok(Outcome {
                report,
                text: t.finish(),
            });
        }
        Err(e) => return Err(e.into()),
    };
    describe(&mut t, &result);
    report.verdict(&result);

    if let Some(cross) = cross_check(&result) {
        t.row(
            cross.label,
            format!(
                "{} ({})",
                cross.value,
                if cross.ok {
                    "consistent"
                } else {
                    "CONTRADICTED"
                }
            ),
        );
        if !cross.ok {
            report.set_status(Status::Violation);
        }
        report.verdict(json!({
            "reference": cross.key,
            "value": cross.value,
            "consistent": cross.ok,
            "note": cross.note,
        }));
        if let Some(note) = cross.note {
            t.row("note", note);
        }
    }

    if args.enumerate {
        match enumerate_max_families(n, args.predicate, result.optimum, options) {
            Ok(cat) => {
                t.row("classes", cat.class_count)
                    .row("enumeration nodes", cat.nodes_explored);
                for (i, c) in cat.classes.iter().enumerate() {
                    t.row(&format!("  class {}", i + 1), c.to_compact());
                }
                report.verdict(&cat);
            }
            Err(SearchError::BudgetExhausted(r)) => {
                t.row(
                    "classes",
                    format!("budget exhausted after {} nodes", r.nodes_explored),
                );
                report.verdict(json!({ "catalog": null, "nodes_explored": r.nodes_explored }));
                report.set_status(Status::BudgetExhausted);
            }
            Err(e @ SearchError::InconsistentOptimum { .. }) => {
                t.row("classes", e.to_string());
                report.verdict(json!({ "catalog": null, "error": e.to_string() }));
                report.set_status(Status::Violation);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome {
        report,
        text: t.finish(),
    })
}

fn describe(t: &mut Table, r: &SearchResult) {
    let status = if r.proof_complete {
        "certified"
    } else {
        "best found"
    };
    t.row("optimum", format!("{} ({status})", r.optimum))
        .row("nodes", r.nodes_explored)
        .block("witness", &format_family(&r.witness));
}

struct CrossCheck {
    key: &'static str,
    label: &'static str,
    value: String,
    ok: bool,
    note: Option<&'static str>,
}

/// Compares a certified optimum with the closed-form value for its predicate.
fn cross_check(r: &SearchResult) -> Option<CrossCheck> {
    match r.predicate {
        Predicate::Star => {
            let value = two_largest_binomials(r.n) as usize;
            let applies = r.n >= 3;
            Some(CrossCheck {
                key: "two_largest_binomials",
                label: "two largest binomials",
                value: value.to_string(),
                ok: !applies || r.optimum == value,
                note: (!applies)
                    .then_some("the two-largest-binomials value is only claimed for n >= 3"),
            })
        }
        Predicate::ForkFree => {
            let bound = corollary2_bound(r.n).ok()?;
            Some(CrossCheck {
                key: "fork_free_bound",
                label: "fork-free bound",
                ok: Rat::from_integer(r.optimum as u64) <= bound,
                value: bound.to_string(),
                note: None,
            })
        }
    }
}
