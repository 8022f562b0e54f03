use butterfly_core::conditions::satisfies_star;
use butterfly_core::io::format_family;
use butterfly_core::lym::{check_theorem2, corollary2_bound};
use butterfly_core::search::{random_fork_free_family, random_star_family_with, SampleOptions};
use butterfly_core::{two_largest_binomials, Family, GroundSize, Predicate, Rat};
use serde::Serialize;
use serde_json::json;

use crate::report::{CliError, Outcome, RunReport, Status, Table};

/// Largest `n` the constrained samplers support.
const MAX_N: usize = 7;
/// Exhaustive size sweep limit (`2^(2^n)` families).
const SWEEP_MAX_N: usize = 3;

#[derive(Serialize)]
struct SuiteResult {
    suite: &'static str,
    cases: u64,
    counterexamples: u64,
    /// Largest observed value, as an exact string.
    max_observed: String,
    limit: String,
    note: Option<&'static str>,
    /// Shrunk first counterexample, in the family file format.
    shrunk: Option<String>,
}

fn case_seed(seed: u64, i: u64) -> u64 {
    seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Drops members one at a time while the family still fails.
fn shrink(f: &Family, fails: impl Fn(&Family) -> bool) -> Family {
    let mut cur = f.clone();
    loop {
        let smaller = cur
            .members()
            .iter()
            .map(|&s| cur.without(s))
            .find(|g| fails(g));
        match smaller {
            Some(g) => cur = g,
            None => return cur,
        }
    }
}

struct Suite {
    name: &'static str,
    cases: u64,
    max: Rat,
    limit: Rat,
    failures: u64,
    first: Option<Family>,
    note: Option<&'static str>,
    /// Values are sizes; print integral values without a denominator.
    integral: bool,
}

impl Suite {
    fn new(name: &'static str, limit: Rat) -> Suite {
        Suite {
            name,
            cases: 0,
            max: Rat::zero(),
            limit,
            failures: 0,
            first: None,
            note: None,
            integral: false,
        }
    }

    fn sizes(name: &'static str, limit: u64) -> Suite {
        Suite {
            integral: true,
            ..Suite::new(name, Rat::from_integer(limit))
        }
    }

    fn show(&self, v: &Rat) -> String {
        if self.integral && v.is_integer() {
            v.numer().to_string()
        } else {
            v.to_string()
        }
    }

    fn observe(&mut self, value: Rat, f: &Family, fails: impl Fn(&Family) -> bool) {
        self.cases += 1;
        if value > self.max {
            self.max = value;
        }
        if fails(f) {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(shrink(f, fails));
            }
        }
    }

    fn result(&self) -> SuiteResult {
        SuiteResult {
            suite: self.name,
            cases: self.cases,
            counterexamples: self.failures,
            max_observed: self.show(&self.max),
            limit: self.show(&self.limit),
            note: self.note,
            shrunk: self.first.as_ref().map(format_family),
        }
    }
}

pub fn run(n: usize, cases: u64, seed: u64) -> Result<Outcome, CliError> {
    if !(1..=MAX_N).contains(&n) {
        return Err(CliError(format!(
            "n={n} outside the supported range 1..={MAX_N}"
        )));
    }
    let ground = GroundSize::new(n)?;
    let mut suites = Vec::new();

    if n >= 3 {
        let opts = SampleOptions {
            predicate: Predicate::Star,
            exclude_empty: true,
            exclude_full: true,
        };
        let mut s = Suite::new("lym_sum_at_most_2", Rat::from_integer(2));
        let fails = |f: &Family| {
            let v = check_theorem2(f);
            v.hypotheses_ok && !v.holds
        };
        for i in 0..cases {
            let f = random_star_family_with(ground, case_seed(seed, i), opts);
            s.observe(check_theorem2(&f).lhs, &f, fails);
        }
        suites.push(s);

        let limit = two_largest_binomials(n);
        let mut s = Suite::sizes("star_size", limit);
        let fails = |f: &Family| satisfies_star(f) && f.len() as u64 > limit;
        for i in 0..cases {
            let f = random_star_family_with(ground, case_seed(seed, i), SampleOptions::default());
            s.observe(Rat::from_integer(f.len() as u64), &f, fails);
        }
        suites.push(s);
    }

    if n >= 4 {
        let bound = corollary2_bound(n)?;
        let mut s = Suite {
            integral: true,
            ..Suite::new("fork_free_size", bound.clone())
        };
        let fails = |f: &Family| {
            !f.contains_full()
                && butterfly_core::conditions::is_fork_free(f)
                && Rat::from_integer(f.len() as u64) > bound
        };
        for i in 0..cases {
            let f = random_fork_free_family(ground, case_seed(seed, i));
            s.observe(Rat::from_integer(f.len() as u64), &f, fails);
        }
        suites.push(s);
    }

    if n <= SWEEP_MAX_N {
        // every family is enumerated, so the maximum is exact
        let limit = two_largest_binomials(n);
        let mut s = Suite::sizes("star_size_exhaustive", limit);
        let mut best = 0;
        for mask in 0u64..(1 << (1 << n)) {
            let f = Family::from_value_mask(ground, &[mask]);
            if satisfies_star(&f) {
                best = best.max(f.len());
            }
            s.cases += 1;
        }
        s.max = Rat::from_integer(best as u64);
        if best as u64 > limit {
            if n >= 3 {
                s.failures = 1;
            } else {
                s.note = Some("the two-largest-binomials bound requires n >= 3; exceeding it here is expected");
            }
        }
        suites.push(s);
    }

    let mut report = RunReport::new("proptest", json!({ "n": n, "cases": cases }));
    report.seed = Some(seed);
    let mut t = Table::default();
    t.row("ground size", n)
        .row("seed", seed)
        .row("cases per suite", cases);
    for s in &suites {
        let r = s.result();
        t.row(
            r.suite,
            format!(
                "{} cases, max {} (limit {}), {} counterexamples",
                r.cases, r.max_observed, r.limit, r.counterexamples
            ),
        );
        if let Some(note) = r.note {
            t.row("note", note);
        }
        if let Some(family) = &r.shrunk {
            t.block(&format!("{} counterexample (shrunk)", r.suite), family);
        }
        if r.counterexamples > 0 {
            report.set_status(Status::Violation);
        }
        report.verdict(&r);
    }
    Ok(Outcome {
        report,
        text: t.finish(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shrink_keeps_a_minimal_failing_core() {
        let f = Family::power_set(GroundSize::new(3).unwrap());
        let core = shrink(&f, |g| !satisfies_star(g));
        assert_eq!(core.len(), 4);
        assert!(!satisfies_star(&core));
        for &s in core.members() {
            assert!(satisfies_star(&core.without(s)));
        }
    }

    #[test]
    fn case_seeds_are_distinct() {
        let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|i| case_seed(5, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
