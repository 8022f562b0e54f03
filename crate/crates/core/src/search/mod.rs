//! Exact maximum families and extremal catalogs for the butterfly and fork-free
//! conditions at desk scale.

mod engine;
mod random;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{two_largest_binomials, Rat};
use crate::bitfamily::Guard;
use crate::conditions::{is_fork_free, satisfies_star};
use crate::family::Family;
use crate::lym::{check_theorem2, lym_sum, InequalityVerdict};
use crate::subset::{GroundSize, Subset};

use engine::{Goal, Limits, Run, Space, ENGINE_MAX_N};

pub use random::{
    random_family, random_fork_free_family, random_star_family, random_star_family_with, Density,
    SampleOptions,
};

/// Largest `n` for which an exhausted search is expected on a desktop.
pub const CERTIFIED_MAX_N: usize = 5;
/// Largest `n` the engine accepts at all.
pub const SEARCH_MAX_N: usize = ENGINE_MAX_N;

/// Decision depth at which each root branch is split into parallel tasks.
const SPLIT_DEPTH: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    /// No four distinct `A, B, C, D` with `A ∪ B ⊆ C ∩ D`.
    Star,
    /// No three distinct `A, B, C` with `A ⊂ B` and `A ⊂ C`.
    ForkFree,
}

impl Predicate {
    pub fn holds(self, f: &Family) -> bool {
        match self {
            Predicate::Star => satisfies_star(f),
            Predicate::ForkFree => is_fork_free(f),
        }
    }

    pub(crate) fn guard(self) -> Guard {
        match self {
            Predicate::Star => Guard::Star,
            Predicate::ForkFree => Guard::Fork,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::Star => "star",
            Predicate::ForkFree => "fork-free",
        })
    }
}

impl FromStr for Predicate {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "star" => Ok(Predicate::Star),
            "fork" | "fork-free" | "fork_free" => Ok(Predicate::ForkFree),
            other => Err(format!(
                "unknown predicate {other:?} (expected star or fork-free)"
            )),
        }
    }
}

/// Node and wall-clock limits. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }

    pub fn nodes(n: u64) -> Budget {
        Budget {
            max_nodes: Some(n),
            max_time: None,
        }
    }

    pub fn time(d: Duration) -> Budget {
        Budget {
            max_nodes: None,
            max_time: Some(d),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: Budget,
    /// Worker threads; 0 uses the rayon default.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: Budget::unlimited(),
            threads: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub predicate: Predicate,
    pub optimum: usize,
    pub witness: Family,
    pub nodes_explored: u64,
    /// The search space was exhausted, so `optimum` is certified.
    pub proof_complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalCatalog {
    pub n: usize,
    pub predicate: Predicate,
    pub size: usize,
    /// Canonical forms, sorted.
    #[serde(serialize_with = "ser_compact_families")]
    pub classes: Vec<Family>,
    pub class_count: usize,
    pub nodes_explored: u64,
}

fn ser_compact_families<S: serde::Serializer>(v: &[Family], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(v.iter().map(|f| f.to_compact()))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("n={n} outside the supported range 1..={max}")]
    Unsupported { n: usize, max: usize },
    #[error("budget exhausted after {} nodes; best so far {}", .0.nodes_explored, .0.optimum)]
    BudgetExhausted(Box<SearchResult>),
    #[error("found a {predicate} family of size {} above the claimed optimum {optimum}: {}", .witness.len(), .witness.to_compact())]
    InconsistentOptimum {
        predicate: Predicate,
        optimum: usize,
        witness: Family,
    },
}

fn check_n(n: usize) -> Result<GroundSize, SearchError> {
    if !(1..=SEARCH_MAX_N).contains(&n) {
        return Err(SearchError::Unsupported {
            n,
            max: SEARCH_MAX_N,
        });
    }
    Ok(GroundSize::new(n).expect("checked"))
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

fn family_of(space: &Space, mask: u64) -> Family {
    let n = GroundSize::new(space.n).expect("engine n is valid");
    Family::new(
        n,
        space
            .rank_mask_to_values(mask)
            .into_iter()
            .map(|v| Subset::from_bits(n, v).expect("value below 2^n")),
    )
    .expect("same ground size")
}

/// Best family found by greedy insertion over a few deterministic orders.
///
/// Only a starting incumbent; certification never relies on it being good.
fn greedy_incumbent(space: &Space) -> u64 {
    let n = space.n;
    let ranks: Vec<u32> = (0..space.len() as u32).collect();
    let mut orders: Vec<Vec<u32>> = vec![ranks.clone(), ranks.iter().rev().copied().collect()];
    for start in 0..=n {
        // levels start, start+1, start-1, start+2, ...
        let mut levels = vec![start];
        for d in 1..=n {
            if start + d <= n {
                levels.push(start + d);
            }
            if d <= start {
                levels.push(start - d);
            }
        }
        let order = levels
            .into_iter()
            .flat_map(|k| {
                ranks
                    .iter()
                    .copied()
                    .filter(move |&r| space.value_of[r as usize].count_ones() as usize == k)
            })
            .collect();
        orders.push(order);
    }
    orders
        .into_iter()
        .map(|order| {
            order.into_iter().fold(0u64, |chosen, r| {
                if space.can_add(chosen, r) {
                    chosen | 1 << r
                } else {
                    chosen
                }
            })
        })
        .max_by_key(|m| m.count_ones())
        .unwrap_or(0)
}

struct Outcome {
    nodes: u64,
    best: Option<u64>,
    found: Vec<u64>,
    overflow: Option<u64>,
    aborted: bool,
}

impl From<Run<'_>> for Outcome {
    fn from(run: Run<'_>) -> Outcome {
        Outcome {
            nodes: run.nodes,
            best: run.best,
            found: run.found,
            overflow: run.overflow,
            aborted: run.aborted,
        }
    }
}

fn run_search(space: &Space, budget: Budget, threads: usize, goal: Goal) -> Outcome {
    let limits = Limits::new(
        budget.max_nodes,
        budget.max_time.map(|d| Instant::now() + d),
    );
    let mut head = Run::new(space, &limits, goal);
    let mut tasks = Vec::new();
    for root in space.root_branches() {
        head.split(root, SPLIT_DEPTH, &mut tasks);
    }
    let head = head.close();

    let results: Vec<Outcome> = pool(threads).install(|| {
        tasks
            .par_iter()
            .map(|&task| {
                let mut run = Run::new(space, &limits, goal);
                run.dfs(task);
                Outcome::from(run.close())
            })
            .collect()
    });

    let mut out = Outcome::from(head);
    for r in results {
        out.nodes += r.nodes;
        if let Some(b) = r.best {
            if out.best.is_none_or(|cur| b.count_ones() > cur.count_ones()) {
                out.best = Some(b);
            }
        }
        out.found.extend(r.found);
        out.overflow = out.overflow.or(r.overflow);
        out.aborted |= r.aborted;
    }
    out.aborted |= limits.is_aborted();
    out
}

/// Largest family on `[n]` satisfying `predicate`, by exhaustive branch and bound.
pub fn max_family(
    n: usize,
    predicate: Predicate,
    options: SearchOptions,
) -> Result<SearchResult, SearchError> {
    check_n(n)?;
    let space = Space::new(n, predicate);
    let incumbent = greedy_incumbent(&space);
    let floor = incumbent.count_ones();
    let outcome = run_search(
        &space,
        options.budget,
        options.threads,
        Goal::Improve { floor },
    );
    let best = outcome.best.unwrap_or(incumbent);
    let witness = family_of(&space, best);
    debug_assert!(predicate.holds(&witness));
    let result = SearchResult {
        n,
        predicate,
        optimum: witness.len(),
        witness,
        nodes_explored: outcome.nodes,
        proof_complete: !outcome.aborted,
    };
    if outcome.aborted {
        return Err(SearchError::BudgetExhausted(Box::new(result)));
    }
    Ok(result)
}

/// All families of exactly `optimum` members satisfying `predicate`, up to relabeling.
///
/// `optimum` must be the certified maximum; finding a larger family is an error.
pub fn enumerate_max_families(
    n: usize,
    predicate: Predicate,
    optimum: usize,
    options: SearchOptions,
) -> Result<ExtremalCatalog, SearchError> {
    let ground = check_n(n)?;
    let space = Space::new(n, predicate);
    let outcome = if optimum == 0 {
        Outcome {
            nodes: 0,
            best: None,
            found: vec![0],
            overflow: (space.len() > 0).then_some(1),
            aborted: false,
        }
    } else {
        run_search(
            &space,
            options.budget,
            options.threads,
            Goal::Collect {
                target: optimum as u32,
            },
        )
    };
    if let Some(bigger) = outcome.overflow {
        return Err(SearchError::InconsistentOptimum {
            predicate,
            optimum,
            witness: family_of(&space, bigger),
        });
    }
    if outcome.aborted {
        return Err(SearchError::BudgetExhausted(Box::new(SearchResult {
            n,
            predicate,
            optimum,
            witness: Family::empty(ground),
            nodes_explored: outcome.nodes,
            proof_complete: false,
        })));
    }
    let classes: BTreeSet<Family> = pool(options.threads).install(|| {
        outcome
            .found
            .par_iter()
            .map(|&mask| {
                family_of(&space, mask)
                    .canonical_form()
                    .expect("n <= 6 is within the canonical limit")
            })
            .collect()
    });
    let classes: Vec<Family> = classes.into_iter().collect();
    Ok(ExtremalCatalog {
        n,
        predicate,
        size: optimum,
        class_count: classes.len(),
        classes,
        nodes_explored: outcome.nodes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem1Report {
    pub n: usize,
    /// `C(n, ⌊n/2⌋) + C(n, ⌊n/2⌋ + 1)`
    pub expected: usize,
    pub optimum: usize,
    pub matches: bool,
    pub proof_complete: bool,
    pub nodes_explored: u64,
    pub witness: Family,
}

/// Certified butterfly-free optimum compared with the sum of the two largest binomials.
pub fn verify_theorem1(n: usize, options: SearchOptions) -> Result<Theorem1Report, SearchError> {
    if !(3..=CERTIFIED_MAX_N).contains(&n) {
        return Err(SearchError::Unsupported {
            n,
            max: CERTIFIED_MAX_N,
        });
    }
    let r = max_family(n, Predicate::Star, options)?;
    let expected = two_largest_binomials(n) as usize;
    Ok(Theorem1Report {
        n,
        expected,
        optimum: r.optimum,
        matches: r.optimum == expected,
        proof_complete: r.proof_complete,
        nodes_explored: r.nodes_explored,
        witness: r.witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub family: String,
    pub two_consecutive_levels: bool,
    /// Image of one of the families listed as exceptional for this `n`.
    pub listed_exception: bool,
    pub lym_sum: Rat,
    pub weighted_bound: InequalityVerdict,
    /// Complement family is isomorphic to this class.
    pub self_dual: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem3Report {
    pub n: usize,
    pub optimum: usize,
    pub class_count: usize,
    pub classes: Vec<ClassReport>,
    /// Every listed family (two-level constructions and exceptions) is present.
    pub listed_present: bool,
    /// Classes that are neither two consecutive levels nor a listed exception.
    pub unlisted: Vec<String>,
    /// The catalog is closed under complementation.
    pub duality_closed: bool,
    pub nodes_explored: u64,
}

/// The exceptional extremal families listed for small `n`, as given (not canonicalized).
pub fn listed_exceptions(n: usize) -> Vec<Family> {
    match n {
        3 => vec![
            Family::from_lists(3, &[&[], &[1], &[2], &[1, 2], &[2, 3], &[1, 3]]).expect("valid"),
        ],
        4 => {
            let g = GroundSize::new(4).expect("valid");
            let extra =
                Family::from_lists(4, &[&[1], &[2, 3, 4], &[2], &[1, 3, 4]]).expect("valid");
            vec![Family::level(g, 2).expect("valid").union(&extra)]
        }
        _ => Vec::new(),
    }
}

/// Enumerates the extremal butterfly-free families and compares them with the
/// classification: two consecutive levels, plus the listed exceptions at n = 3, 4.
pub fn verify_theorem3(n: usize, options: SearchOptions) -> Result<Theorem3Report, SearchError> {
    if !(3..=CERTIFIED_MAX_N).contains(&n) {
        return Err(SearchError::Unsupported {
            n,
            max: CERTIFIED_MAX_N,
        });
    }
    let best = max_family(n, Predicate::Star, options)?;
    let catalog = enumerate_max_families(n, Predicate::Star, best.optimum, options)?;
    let ground = GroundSize::new(n).expect("valid");
    let canon = |f: &Family| f.canonical_form().expect("n <= 5");

    let exceptions: Vec<Family> = listed_exceptions(n).iter().map(canon).collect();
    let mut expected: Vec<Family> = exceptions.clone();
    for k in 0..n {
        let t = Family::two_levels(ground, k).expect("k < n");
        if t.len() == best.optimum {
            expected.push(canon(&t));
        }
    }
    let listed_present = expected.iter().all(|e| catalog.classes.contains(e));

    let mut unlisted = Vec::new();
    let mut duality_closed = true;
    let classes = catalog
        .classes
        .iter()
        .map(|c| {
            let two = c.is_two_consecutive_levels() || canon(c).is_two_consecutive_levels();
            let listed = exceptions.contains(c);
            if !two && !listed {
                unlisted.push(c.to_compact());
            }
            let dual = canon(&c.complement_family());
            duality_closed &= catalog.classes.contains(&dual);
            ClassReport {
                family: c.to_compact(),
                two_consecutive_levels: two,
                listed_exception: listed,
                lym_sum: lym_sum(c),
                weighted_bound: check_theorem2(c),
                self_dual: &dual == c,
            }
        })
        .collect();

    Ok(Theorem3Report {
        n,
        optimum: best.optimum,
        class_count: catalog.class_count,
        classes,
        listed_present,
        unlisted,
        duality_closed,
        nodes_explored: best.nodes_explored + catalog.nodes_explored,
    })
}

/// DIMACS CNF with one clause per forbidden configuration over variables
/// `1..=2^n` (variable `v + 1` is the subset with bit value `v`).
pub fn export_cnf(n: usize, predicate: Predicate) -> Result<String, SearchError> {
    check_n(n)?;
    let size = 1u32 << n;
    let sub = |a: u32, b: u32| a & !b == 0;
    let mut clauses: BTreeSet<Vec<u32>> = BTreeSet::new();
    match predicate {
        Predicate::Star => {
            for c in 0..size {
                for d in c + 1..size {
                    let meet = c & d;
                    let below: Vec<u32> = (0..size)
                        .filter(|&e| e != c && e != d && sub(e, meet))
                        .collect();
                    for (i, &a) in below.iter().enumerate() {
                        for &b in &below[i + 1..] {
                            let mut cl = vec![a, b, c, d];
                            cl.sort_unstable();
                            clauses.insert(cl);
                        }
                    }
                }
            }
        }
        Predicate::ForkFree => {
            for a in 0..size {
                let above: Vec<u32> = (0..size).filter(|&s| s != a && sub(a, s)).collect();
                for (i, &b) in above.iter().enumerate() {
                    for &c in &above[i + 1..] {
                        clauses.insert(vec![a, b, c]);
                    }
                }
            }
        }
    }
    let mut out = String::new();
    out.push_str(&format!(
        "c {predicate} families on [{n}]; variable v+1 is the subset with bit value v\n"
    ));
    out.push_str(&format!("p cnf {} {}\n", size, clauses.len()));
    for cl in &clauses {
        for v in cl {
            out.push_str(&format!("-{} ", v + 1));
        }
        out.push_str("0\n");
    }
    Ok(out)
}
