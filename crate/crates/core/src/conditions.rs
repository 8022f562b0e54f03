//! Predicates on families: the butterfly condition (no four distinct
//! `A, B, C, D` with `A ∪ B ⊆ C ∩ D`), fork-freeness and antichains, plus the
//! maximal/minimal/middle decomposition and the empty-set replacement reduction.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::family::Family;
use crate::subset::Subset;

/// Four distinct members with `a ∪ b ⊆ c ∩ d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StarViolation {
    #[serde(serialize_with = "ser_subset")]
    pub a: Subset,
    #[serde(serialize_with = "ser_subset")]
    pub b: Subset,
    #[serde(serialize_with = "ser_subset")]
    pub c: Subset,
    #[serde(serialize_with = "ser_subset")]
    pub d: Subset,
}

/// Three distinct members with `a ⊂ b` and `a ⊂ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ForkViolation {
    #[serde(serialize_with = "ser_subset")]
    pub a: Subset,
    #[serde(serialize_with = "ser_subset")]
    pub b: Subset,
    #[serde(serialize_with = "ser_subset")]
    pub c: Subset,
}

pub(crate) fn ser_subset<S: serde::Serializer>(s: &Subset, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(s.elements())
}

/// First butterfly in scan order, or `None` if the family satisfies the condition.
///
/// Pairs `(c, d)` are scanned in family order; for each, `a` and `b` are the two
/// smallest other members inside `c ∩ d`.
pub fn find_star_violation(f: &Family) -> Option<StarViolation> {
    let m = f.members();
    for (i, &c) in m.iter().enumerate() {
        for &d in &m[i + 1..] {
            let meet = c.intersect(d);
            let mut below = m
                .iter()
                .take_while(|e| e.len() <= meet.len())
                .filter(|&&e| e != c && e != d && e.is_subset_of(meet));
            if let (Some(&a), Some(&b)) = (below.next(), below.next()) {
                return Some(StarViolation { a, b, c, d });
            }
        }
    }
    None
}

pub fn satisfies_star(f: &Family) -> bool {
    find_star_violation(f).is_none()
}

/// First fork `(a, b, c)` in scan order: `a` is the first member with two proper
/// supersets, `b < c` the two smallest of them.
pub fn find_fork_violation(f: &Family) -> Option<ForkViolation> {
    let m = f.members();
    m.iter().enumerate().find_map(|(i, &a)| {
        let mut above = m[i + 1..].iter().filter(|&&s| a.is_proper_subset_of(s));
        match (above.next(), above.next()) {
            (Some(&b), Some(&c)) => Some(ForkViolation { a, b, c }),
            _ => None,
        }
    })
}

pub fn is_fork_free(f: &Family) -> bool {
    find_fork_violation(f).is_none()
}

pub fn is_antichain(f: &Family) -> bool {
    let m = f.members();
    m.iter()
        .enumerate()
        .all(|(i, &a)| m[i + 1..].iter().all(|&b| !a.is_proper_subset_of(b)))
}

/// Split into maximal members, minimal members and the rest.
///
/// A member comparable to nothing is both maximal and minimal and is placed in
/// both `m1` and `m2`; `mid` holds exactly the members with a proper subset and a
/// proper superset in the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub m1: Family,
    pub m2: Family,
    pub mid: Family,
}

pub fn decompose(f: &Family) -> Decomposition {
    let m = f.members();
    let has_above = |a: Subset| m.iter().any(|&s| a.is_proper_subset_of(s));
    let has_below = |a: Subset| m.iter().any(|&s| s.is_proper_subset_of(a));
    Decomposition {
        m1: f.filter(|s| !has_above(s)),
        m2: f.filter(|s| !has_below(s)),
        mid: f.filter(|s| has_above(s) && has_below(s)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SupersetError {
    #[error("{0} has no proper superset in the upper family")]
    NoSuperset(Subset),
    #[error("{0} has at least two proper supersets: {1} and {2}")]
    MultipleSupersets(Subset, Subset, Subset),
}

/// For each `a` in `mid`, the unique member of `upper` strictly containing it.
pub fn unique_superset_map(
    mid: &Family,
    upper: &Family,
) -> Result<BTreeMap<Subset, Subset>, SupersetError> {
    let mut map = BTreeMap::new();
    for &a in mid {
        let mut above = upper.iter().filter(|&&s| a.is_proper_subset_of(s));
        match (above.next(), above.next()) {
            (None, _) => return Err(SupersetError::NoSuperset(a)),
            (Some(&x), Some(&y)) => return Err(SupersetError::MultipleSupersets(a, x, y)),
            (Some(&x), None) => {
                map.insert(a, x);
            }
        }
    }
    Ok(map)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GerbnerError {
    #[error("precondition failed: the empty set is not a member")]
    EmptySetAbsent,
    #[error("precondition failed: the full ground set is a member")]
    FullSetPresent,
    #[error("precondition failed: all singletons are members")]
    AllSingletonsPresent,
}

/// Replace `∅` by the least singleton not in the family.
///
/// The result has the same size and satisfies the butterfly condition whenever
/// the input does.
pub fn gerbner_reduce(f: &Family) -> Result<Family, GerbnerError> {
    if !f.contains_empty() {
        return Err(GerbnerError::EmptySetAbsent);
    }
    if f.contains_full() {
        return Err(GerbnerError::FullSetPresent);
    }
    let n = f.ground();
    let empty = Subset::empty(n);
    let singleton = (1..=n.get())
        .map(|i| empty.with(i))
        .find(|s| !f.contains(*s))
        .ok_or(GerbnerError::AllSingletonsPresent)?;
    Ok(f.without(empty).with(singleton))
}
