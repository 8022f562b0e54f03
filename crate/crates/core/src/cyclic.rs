//! Cyclic arrangements of `[n]`, intervals along them, chains of intervals and
//! the incidence double count behind the weighted bound `Σ 1/C(n,|F|) <= 2`.
//!
//! A chain here is a tower `L_1 ⊂ L_2 ⊂ … ⊂ L_n` of intervals along one fixed
//! cyclic arrangement with `|L_i| = i`. Chains are enumerated explicitly by
//! growing a singleton one element at a time and keeping only interval
//! extensions, so the closed forms are checked rather than assumed.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{factorial, Rat};
use crate::conditions::satisfies_star;
use crate::family::{next_lexicographic, Family};
use crate::lym::InequalityVerdict;
use crate::subset::{GroundSize, Subset};

/// Largest ground size for routines that walk all `(n-1)!` cyclic arrangements.
pub const CYCLIC_SCAN_MAX_N: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error("not a cyclic permutation of 1..=n starting at 1: {0}")]
    InvalidOrder(String),
    #[error("ground sizes differ: {0} vs {1}")]
    GroundSizeMismatch(usize, usize),
    #[error("the empty set is not an interval")]
    EmptySet,
    #[error("{0} is not an interval along {1}")]
    NotAnInterval(Subset, CyclicPerm),
    #[error("{0} must be a proper nonempty interval")]
    NotProper(Subset),
    #[error("{0} is not a proper subset of {1}")]
    NotNested(Subset, Subset),
    #[error("need 2 <= n, got {0}")]
    TooSmall(usize),
    #[error("n={n} exceeds the scan limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// A cyclic arrangement of `[n]`, rotated so that element 1 comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicPerm {
    order: Vec<u8>,
    /// `position[e - 1]` = index of element `e` in `order`.
    position: Vec<u8>,
}

impl CyclicPerm {
    pub fn new(order: Vec<usize>) -> Result<CyclicPerm, CyclicError> {
        let n = order.len();
        let bad = || CyclicError::InvalidOrder(join(&order));
        if n == 0 || n > GroundSize::MAX || order[0] != 1 {
            return Err(bad());
        }
        let mut position = vec![u8::MAX; n];
        for (i, &e) in order.iter().enumerate() {
            if e == 0 || e > n || position[e - 1] != u8::MAX {
                return Err(bad());
            }
            position[e - 1] = i as u8;
        }
        Ok(CyclicPerm {
            order: order.iter().map(|&e| e as u8).collect(),
            position,
        })
    }

    pub fn identity(n: usize) -> CyclicPerm {
        CyclicPerm::new((1..=n).collect()).expect("identity order is valid")
    }

    /// All `(n-1)!` cyclic arrangements, tails in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = CyclicPerm> {
        let mut next = (n >= 1).then(|| (2..=n).collect::<Vec<usize>>());
        std::iter::from_fn(move || {
            let tail = next.take()?;
            let mut succ = tail.clone();
            if next_lexicographic(&mut succ) {
                next = Some(succ);
            }
            let mut order = vec![1];
            order.extend(tail);
            Some(CyclicPerm::new(order).expect("valid by construction"))
        })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().map(|&e| e as usize)
    }

    /// Element at cyclic position `p`.
    fn at(&self, p: usize) -> usize {
        self.order[p % self.n()] as usize
    }

    /// Bit mask over positions occupied by the elements of `s`.
    fn position_mask(&self, s: Subset) -> u32 {
        s.elements()
            .fold(0u32, |m, e| m | (1 << self.position[e - 1]))
    }

    /// Whether `s` (nonempty) occupies a cyclically contiguous block.
    pub fn is_interval(&self, s: Subset) -> Result<bool, CyclicError> {
        self.same_ground(s)?;
        if s.is_empty() {
            return Err(CyclicError::EmptySet);
        }
        Ok(self.is_interval_unchecked(s))
    }

    fn is_interval_unchecked(&self, s: Subset) -> bool {
        let n = self.n() as u32;
        let full = (1u32 << n) - 1;
        let p = self.position_mask(s);
        if p == full {
            return true;
        }
        // a block start is an occupied position whose predecessor is free
        let rotated = ((p << 1) | (p >> (n - 1))) & full;
        (p & !rotated).count_ones() == 1
    }

    fn same_ground(&self, s: Subset) -> Result<(), CyclicError> {
        if s.ground().get() != self.n() {
            return Err(CyclicError::GroundSizeMismatch(self.n(), s.ground().get()));
        }
        Ok(())
    }

    fn ground(&self) -> GroundSize {
        GroundSize::new(self.n()).expect("n checked at construction")
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for CyclicPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.order().collect::<Vec<_>>()))
    }
}

impl FromStr for CyclicPerm {
    type Err = CyclicError;

    /// Parses `"1,3,2,4"`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let order = text
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CyclicError::InvalidOrder(text.to_string()))?;
        CyclicPerm::new(order)
    }
}

impl Serialize for CyclicPerm {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// Members of `f` that are intervals along `cp` (the empty set never is).
pub fn intervals_of(f: &Family, cp: &CyclicPerm) -> Family {
    assert_eq!(f.n(), cp.n(), "ground size mismatch");
    f.filter(|s| !s.is_empty() && cp.is_interval_unchecked(s))
}

/// Every proper nonempty interval along `cp`, in family order.
pub fn proper_intervals(cp: &CyclicPerm) -> Family {
    let n = cp.ground();
    let mut out = Vec::new();
    for start in 0..cp.n() {
        let mut s = Subset::empty(n);
        for len in 1..cp.n() {
            s = s.with(cp.at(start + len - 1));
            out.push(s);
        }
    }
    Family::new(n, out).expect("same ground size")
}

/// A family of nonempty intervals along a fixed cyclic arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalFamily {
    cp: CyclicPerm,
    members: Family,
}

impl IntervalFamily {
    pub fn new(cp: CyclicPerm, members: Family) -> Result<IntervalFamily, CyclicError> {
        if members.n() != cp.n() {
            return Err(CyclicError::GroundSizeMismatch(cp.n(), members.n()));
        }
        for &s in &members {
            if !cp.is_interval(s)? {
                return Err(CyclicError::NotAnInterval(s, cp));
            }
        }
        Ok(IntervalFamily { cp, members })
    }

    pub fn cp(&self) -> &CyclicPerm {
        &self.cp
    }

    pub fn members(&self) -> &Family {
        &self.members
    }

    /// Complements of the members; complements of intervals are intervals.
    pub fn complemented(&self) -> Result<IntervalFamily, CyclicError> {
        IntervalFamily::new(self.cp.clone(), self.members.complement_family())
    }
}

/// Calls `visit` on every chain `L_1 ⊂ … ⊂ L_n` of intervals along `cp`.
pub fn for_each_interval_chain(cp: &CyclicPerm, mut visit: impl FnMut(&[Subset])) {
    let n = cp.ground();
    let mut chain = Vec::with_capacity(cp.n());
    for e in cp.order() {
        chain.push(Subset::empty(n).with(e));
        extend_chain(cp, &mut chain, &mut visit);
        chain.pop();
    }
}

fn extend_chain(cp: &CyclicPerm, chain: &mut Vec<Subset>, visit: &mut impl FnMut(&[Subset])) {
    let top = *chain.last().expect("chain is nonempty");
    if top.is_full() {
        visit(chain);
        return;
    }
    for e in 1..=cp.n() {
        if top.contains(e) {
            continue;
        }
        let next = top.with(e);
        if cp.is_interval_unchecked(next) {
            chain.push(next);
            extend_chain(cp, chain, visit);
            chain.pop();
        }
    }
}

/// Number of interval chains along any cyclic arrangement of `[n]` (closed form `n·2^(n-2)`).
pub fn count_interval_chains(n: usize) -> Result<u64, CyclicError> {
    if n < 2 {
        return Err(CyclicError::TooSmall(n));
    }
    if n > GroundSize::MAX {
        return Err(CyclicError::TooLarge {
            n,
            max: GroundSize::MAX,
        });
    }
    let mut count = 0u64;
    for_each_interval_chain(&CyclicPerm::identity(n), |_| count += 1);
    Ok(count)
}

fn require_proper_interval(cp: &CyclicPerm, s: Subset) -> Result<(), CyclicError> {
    if s.is_empty() || s.is_full() {
        cp.same_ground(s)?;
        return Err(CyclicError::NotProper(s));
    }
    if !cp.is_interval(s)? {
        return Err(CyclicError::NotAnInterval(s, cp.clone()));
    }
    Ok(())
}

/// Interval chains along `cp` passing through the proper interval `f` (closed form `2^(n-2)`).
pub fn count_chains_through(cp: &CyclicPerm, f: Subset) -> Result<u64, CyclicError> {
    if cp.n() < 2 {
        return Err(CyclicError::TooSmall(cp.n()));
    }
    require_proper_interval(cp, f)?;
    let mut count = 0u64;
    for_each_interval_chain(cp, |chain| {
        if chain[f.len() - 1] == f {
            count += 1;
        }
    });
    Ok(count)
}

/// Interval chains through both `a ⊊ b`; never more than `2^(n-3)`.
pub fn count_chains_through_pair(
    cp: &CyclicPerm,
    a: Subset,
    b: Subset,
) -> Result<u64, CyclicError> {
    if cp.n() < 2 {
        return Err(CyclicError::TooSmall(cp.n()));
    }
    require_proper_interval(cp, a)?;
    require_proper_interval(cp, b)?;
    if !a.is_proper_subset_of(b) {
        return Err(CyclicError::NotNested(a, b));
    }
    let mut count = 0u64;
    for_each_interval_chain(cp, |chain| {
        if chain[a.len() - 1] == a && chain[b.len() - 1] == b {
            count += 1;
        }
    });
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    /// Maximal members.
    pub m: usize,
    /// Non-maximal members.
    pub a: usize,
    /// `m + a/2 <= n`
    pub verdict: InequalityVerdict,
}

/// `m + a/2 <= n` for interval families where each member lies in at most one other
/// member and `∅, [n]` are excluded.
pub fn check_lemma1(fam: &IntervalFamily) -> Lemma1Report {
    let f = fam.members();
    let mut failures = Vec::new();
    if f.contains_full() {
        failures.push("contains_full_set".to_string());
    }
    let supersets = |a: Subset| f.iter().filter(|&&s| a.is_proper_subset_of(s)).count();
    if f.iter().any(|&a| supersets(a) > 1) {
        failures.push("member_below_two_others".to_string());
    }
    let m = f.iter().filter(|&&a| supersets(a) == 0).count();
    let a = f.len() - m;
    let lhs = Rat::from_integer(m as u64) + Rat::new(a as u64, 2);
    Lemma1Report {
        m,
        a,
        verdict: InequalityVerdict::new(lhs, Rat::from_integer(fam.cp().n() as u64), failures),
    }
}

/// Complemented form: families where each member contains at most one other member.
pub fn check_lemma1_dual(fam: &IntervalFamily) -> Result<Lemma1Report, CyclicError> {
    Ok(check_lemma1(&fam.complemented()?))
}

/// `|F| <= 2n` for butterfly-free interval families without `∅` and `[n]`.
pub fn check_lemma2(fam: &IntervalFamily) -> InequalityVerdict {
    let f = fam.members();
    let mut failures = Vec::new();
    if f.contains_full() {
        failures.push("contains_full_set".to_string());
    }
    if !satisfies_star(f) {
        failures.push("violates_star".to_string());
    }
    InequalityVerdict::new(
        Rat::from_integer(f.len() as u64),
        Rat::from_integer(2 * fam.cp().n() as u64),
        failures,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    /// `Σ |F|! (n - |F|)!`
    #[serde(serialize_with = "ser_big")]
    pub lhs: BigUint,
    /// `(n - 1)! · 2n`
    #[serde(serialize_with = "ser_big")]
    pub rhs: BigUint,
    /// Enumerated (cyclic arrangement, interval member) incidences.
    #[serde(serialize_with = "ser_big")]
    pub pair_count: BigUint,
    pub satisfies_star: bool,
    /// `lhs == pair_count`
    pub identity_holds: bool,
    /// `lhs <= rhs`
    pub bound_holds: bool,
    pub equality: bool,
    /// Largest number of interval members seen along a single arrangement.
    pub max_intervals_per_arrangement: usize,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(v)
}

/// Double counts (cyclic arrangement, member) pairs where the member is an interval.
pub fn double_count_audit(f: &Family) -> Result<AuditReport, CyclicError> {
    let n = f.n();
    if n > CYCLIC_SCAN_MAX_N {
        return Err(CyclicError::TooLarge {
            n,
            max: CYCLIC_SCAN_MAX_N,
        });
    }
    if f.contains_empty() {
        return Err(CyclicError::Precondition(
            "the empty set is a member".into(),
        ));
    }
    if f.contains_full() {
        return Err(CyclicError::Precondition(
            "the full ground set is a member".into(),
        ));
    }
    let lhs: BigUint = f
        .iter()
        .map(|s| factorial(s.len()) * factorial(n - s.len()))
        .sum();
    let rhs = factorial(n - 1) * BigUint::from(2 * n);
    let mut pairs = 0u64;
    let mut max_per = 0usize;
    for cp in CyclicPerm::all(n) {
        let here = f.iter().filter(|&&s| cp.is_interval_unchecked(s)).count();
        pairs += here as u64;
        max_per = max_per.max(here);
    }
    let pair_count = BigUint::from(pairs);
    Ok(AuditReport {
        satisfies_star: satisfies_star(f),
        identity_holds: lhs == pair_count,
        bound_holds: lhs <= rhs,
        equality: lhs == rhs,
        max_intervals_per_arrangement: max_per,
        lhs,
        rhs,
        pair_count,
    })
}

/// Results of checking every family of proper intervals along the identity arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub n: usize,
    pub families_checked: u64,
    pub lemma1_applicable: u64,
    pub lemma1_dual_applicable: u64,
    pub lemma2_applicable: u64,
    pub lemma2_max_size: usize,
    pub counterexamples: Vec<String>,
}

pub const SWEEP_MAX_N: usize = 4;

/// Exhaustive sweep over all `2^(n(n-1))` families of proper intervals (n <= 4).
pub fn sweep_interval_families(n: usize) -> Result<SweepReport, CyclicError> {
    if n < 2 {
        return Err(CyclicError::TooSmall(n));
    }
    if n > SWEEP_MAX_N {
        return Err(CyclicError::TooLarge {
            n,
            max: SWEEP_MAX_N,
        });
    }
    let cp = CyclicPerm::identity(n);
    let intervals = proper_intervals(&cp);
    let ground = cp.ground();
    let mut report = SweepReport {
        n,
        families_checked: 0,
        lemma1_applicable: 0,
        lemma1_dual_applicable: 0,
        lemma2_applicable: 0,
        lemma2_max_size: 0,
        counterexamples: Vec::new(),
    };
    for mask in 0u64..(1 << intervals.len()) {
        let members = intervals
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &s)| s);
        let fam = IntervalFamily::new(cp.clone(), Family::new(ground, members).expect("same n"))?;
        report.families_checked += 1;

        let l1 = check_lemma1(&fam);
        if l1.verdict.hypotheses_ok {
            report.lemma1_applicable += 1;
            if !l1.verdict.holds {
                report
                    .counterexamples
                    .push(format!("lemma1: {}", fam.members()));
            }
        }
        let dual = check_lemma1_dual(&fam)?;
        if dual.verdict.hypotheses_ok {
            report.lemma1_dual_applicable += 1;
            if !dual.verdict.holds {
                report
                    .counterexamples
                    .push(format!("lemma1-dual: {}", fam.members()));
            }
        }
        let l2 = check_lemma2(&fam);
        if l2.hypotheses_ok {
            report.lemma2_applicable += 1;
            report.lemma2_max_size = report.lemma2_max_size.max(fam.members().len());
            if !l2.holds {
                report
                    .counterexamples
                    .push(format!("lemma2: {}", fam.members()));
            }
        }
    }
    Ok(report)
}
