//! Exact LYM-type sums and the inequalities built on them.
//!
//! Every left/right-hand side is an exact [`Rat`]; verdicts never go through
//! floating point.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{binomial, Rat};
use crate::conditions::{is_antichain, satisfies_star};
use crate::family::Family;
use crate::subset::Subset;

/// Outcome of checking `lhs <= rhs` together with the hypotheses it depends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityVerdict {
    pub lhs: Rat,
    pub rhs: Rat,
    pub holds: bool,
    pub equality: bool,
    pub hypotheses_ok: bool,
    pub hypothesis_failures: Vec<String>,
}

impl InequalityVerdict {
    pub fn new(lhs: Rat, rhs: Rat, hypothesis_failures: Vec<String>) -> InequalityVerdict {
        InequalityVerdict {
            holds: lhs <= rhs,
            equality: lhs == rhs,
            hypotheses_ok: hypothesis_failures.is_empty(),
            lhs,
            rhs,
            hypothesis_failures,
        }
    }

    /// The inequality is claimed under the hypotheses: hypotheses met implies it holds.
    pub fn consistent(&self) -> bool {
        !self.hypotheses_ok || self.holds
    }
}

/// `Σ 1 / C(n, |F|)` over the family.
pub fn lym_sum(f: &Family) -> Rat {
    let n = f.n();
    f.level_profile()
        .into_iter()
        .enumerate()
        .filter(|&(_, count)| count > 0)
        .map(|(k, count)| Rat::new(count as u64, binomial(n as i64, k as i64)))
        .sum()
}

/// `Σ 1/C(n,|F|) <= 2` for butterfly-free families avoiding `∅` and `[n]`, `n >= 3`.
pub fn check_theorem2(f: &Family) -> InequalityVerdict {
    let mut failures = Vec::new();
    if f.n() < 3 {
        failures.push("n_below_3".to_string());
    }
    if f.contains_empty() {
        failures.push("contains_empty_set".to_string());
    }
    if f.contains_full() {
        failures.push("contains_full_set".to_string());
    }
    if !satisfies_star(f) {
        failures.push("violates_star".to_string());
    }
    InequalityVerdict::new(lym_sum(f), Rat::from_integer(2), failures)
}

/// An antichain `m`, a disjoint antichain `mid` below it, and the map sending
/// each member of `mid` to its unique superset in `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedAntichains {
    pub m: Family,
    pub mid: Family,
    pub f: BTreeMap<Subset, Subset>,
}

impl AnnotatedAntichains {
    pub fn new(m: Family, mid: Family, f: BTreeMap<Subset, Subset>) -> AnnotatedAntichains {
        AnnotatedAntichains { m, mid, f }
    }

    /// Builds `f` from containment; fails if some member of `mid` lacks a unique superset in `m`.
    pub fn from_families(
        m: Family,
        mid: Family,
    ) -> Result<AnnotatedAntichains, crate::conditions::SupersetError> {
        let f = crate::conditions::unique_superset_map(&mid, &m)?;
        Ok(AnnotatedAntichains { m, mid, f })
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    /// Hypothesis failure codes; empty when all invariants hold.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.m.ground() != self.mid.ground() {
            out.push("ground_size_mismatch".to_string());
            return out;
        }
        if !is_antichain(&self.m) {
            out.push("m_not_antichain".to_string());
        }
        if !is_antichain(&self.mid) {
            out.push("mid_not_antichain".to_string());
        }
        if self.mid.iter().any(|&a| self.m.contains(a)) {
            out.push("m_mid_not_disjoint".to_string());
        }
        if self.m.contains_full() {
            out.push("full_set_in_m".to_string());
        }
        for &a in &self.mid {
            match self.f.get(&a) {
                None => out.push(format!("f_undefined_at:{a}")),
                Some(&fa) => {
                    if !self.m.contains(fa) || !a.is_proper_subset_of(fa) {
                        out.push(format!("f_not_superset_in_m_at:{a}"));
                    } else if self.m.iter().any(|&s| s != fa && a.is_proper_subset_of(s)) {
                        out.push(format!("f_not_unique_at:{a}"));
                    }
                }
            }
        }
        if self.f.keys().any(|a| !self.mid.contains(*a)) {
            out.push("f_defined_outside_mid".to_string());
        }
        out
    }

    fn m_part(&self) -> Rat {
        lym_sum(&self.m)
    }
}

/// How one member of `mid` contributes to the two weighted sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma3Term {
    #[serde(serialize_with = "crate::conditions::ser_subset")]
    pub a: Subset,
    #[serde(serialize_with = "crate::conditions::ser_subset")]
    pub image: Subset,
    /// `|f(A)| - |A|`
    pub gap: usize,
    /// `|f(A)| = n - 1`
    pub image_is_coatom: bool,
    /// `n - |A| = C(n - |A|, n - |f(A)|)`, i.e. this term is the same in both sums.
    pub weights_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma3Report {
    /// Weights `1 - 1/(n - |A|)`.
    pub coarse: InequalityVerdict,
    /// Weights `1 - 1/C(n - |A|, n - |f(A)|)`.
    pub exact: InequalityVerdict,
    pub terms: Vec<Lemma3Term>,
}

/// Evaluates both weighted chain-count inequalities for `(M, A, f)`.
pub fn lemma3_check(x: &AnnotatedAntichains) -> Lemma3Report {
    let failures = x.validate();
    let n = x.n();
    let m_part = x.m_part();
    let mut coarse = m_part.clone();
    let mut exact = m_part;
    let mut terms = Vec::new();
    for &a in &x.mid {
        let Some(&fa) = x.f.get(&a) else { continue };
        let k = a.len();
        if k >= n || fa.len() > n {
            continue;
        }
        let base = Rat::inverse_binomial(n, k);
        let down = n - k;
        let coarse_w = if down > 0 {
            Rat::one() - Rat::new(1, down as u64)
        } else {
            Rat::zero()
        };
        let c = binomial(down as i64, (n - fa.len()) as i64);
        let exact_w = if c > 0 {
            Rat::one() - Rat::new(1, c)
        } else {
            Rat::zero()
        };
        coarse += &base * &coarse_w;
        exact += &base * &exact_w;
        terms.push(Lemma3Term {
            a,
            image: fa,
            gap: fa.len().saturating_sub(k),
            image_is_coatom: fa.len() + 1 == n,
            weights_agree: down as u64 == c,
        });
    }
    let one = Rat::one();
    Lemma3Report {
        coarse: InequalityVerdict::new(coarse, one.clone(), failures.clone()),
        exact: InequalityVerdict::new(exact, one, failures),
        terms,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corollary1Report {
    pub verdict: InequalityVerdict,
    /// Every `A` has `|A| = n - 2` and `|f(A)| = n - 1`.
    pub stated_equality_condition: bool,
}

/// `Σ_M 1/C(n,|M|) + Σ_A ½·1/C(n,|A|) <= 1`.
pub fn corollary1_check(x: &AnnotatedAntichains) -> Corollary1Report {
    let failures = x.validate();
    let n = x.n();
    let half = Rat::new(1, 2);
    let lhs = x.m_part() + &half * &lym_sum(&x.mid);
    let stated = x
        .mid
        .iter()
        .all(|&a| a.len() + 2 == n && x.f.get(&a).is_some_and(|fa| fa.len() + 1 == n));
    Corollary1Report {
        verdict: InequalityVerdict::new(lhs, Rat::one(), failures),
        stated_equality_condition: stated,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LymError {
    #[error("g(n, i) needs 0 <= i <= n - 2 and n <= 20, got n={n}, i={i}")]
    GDomain { n: usize, i: usize },
    #[error("n={0} is outside the supported range")]
    NOutOfRange(usize),
}

/// `C(n, i) · (n - i) / (n - i - 1)`.
pub fn g(n: usize, i: usize) -> Result<Rat, LymError> {
    if n > 60 || i + 2 > n {
        return Err(LymError::GDomain { n, i });
    }
    Ok(&Rat::from_integer(big_binomial(n, i)) * &Rat::new((n - i) as u64, (n - i - 1) as u64))
}

/// Binomial without the 20-element table limit (used by the `g` analysis up to n = 60).
fn big_binomial(n: usize, k: usize) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::from(1u32);
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// The `i` in `0..=n-2` maximizing `g(n, i)`; ties go to the smaller `i`.
pub fn g_argmax(n: usize) -> Result<usize, LymError> {
    if !(4..=60).contains(&n) {
        return Err(LymError::NOutOfRange(n));
    }
    Ok(g_maximizers(n)?[0])
}

/// Every `i` in `0..=n-2` attaining the maximum of `g(n, ·)`, ascending.
pub fn g_maximizers(n: usize) -> Result<Vec<usize>, LymError> {
    if !(4..=60).contains(&n) {
        return Err(LymError::NOutOfRange(n));
    }
    let values = (0..=n - 2)
        .map(|i| g(n, i).map(|v| (i, v)))
        .collect::<Result<Vec<_>, _>>()?;
    let max = values
        .iter()
        .map(|(_, v)| v)
        .max()
        .cloned()
        .expect("n >= 4");
    Ok(values
        .into_iter()
        .filter(|(_, v)| *v == max)
        .map(|(i, _)| i)
        .collect())
}

/// `C(n, floor(n/2)) · (1 + 2/(n - 3))`.
pub fn corollary2_bound(n: usize) -> Result<Rat, LymError> {
    if !(4..=20).contains(&n) {
        return Err(LymError::NOutOfRange(n));
    }
    let mid = binomial(n as i64, (n / 2) as i64);
    Ok(Rat::from_integer(mid) * (Rat::one() + Rat::new(2, (n - 3) as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::GroundSize;

    fn fam(n: usize, lists: &[&[usize]]) -> Family {
        Family::from_lists(n, lists).unwrap()
    }

    fn gs(n: usize) -> GroundSize {
        GroundSize::new(n).unwrap()
    }

    #[test]
    fn lym_sum_examples() {
        for n in 1..=8 {
            for k in 0..=n {
                assert_eq!(lym_sum(&Family::level(gs(n), k).unwrap()), Rat::one());
            }
        }
        assert_eq!(
            lym_sum(&Family::two_levels(gs(3), 1).unwrap()),
            Rat::from_integer(2)
        );
        let exceptional = fam(3, &[&[], &[1], &[2], &[1, 2], &[2, 3], &[1, 3]]);
        // 1 + 2·(1/3) + 2·(1/3)... grouped by level: 1/1 + 2/3 + 3/3
        assert_eq!(
            lym_sum(&exceptional),
            Rat::one() + Rat::new(2, 3) + Rat::new(3, 3)
        );
        assert_eq!(lym_sum(&exceptional), Rat::new(8, 3));
        assert_eq!(lym_sum(&Family::empty(gs(3))), Rat::zero());
    }

    #[test]
    fn theorem2_examples() {
        let v = check_theorem2(&Family::two_levels(gs(5), 2).unwrap());
        assert!(v.hypotheses_ok && v.holds && v.equality);

        let v = check_theorem2(&fam(3, &[&[1]]));
        assert_eq!(v.lhs, Rat::new(1, 3));
        assert!(v.holds && !v.equality);

        let v = check_theorem2(&fam(3, &[&[], &[1], &[2], &[3]]));
        assert!(!v.hypotheses_ok);
        assert_eq!(
            v.hypothesis_failures,
            vec!["contains_empty_set".to_string()]
        );
    }

    #[test]
    fn verdict_json_uses_exact_strings() {
        let v = check_theorem2(&fam(3, &[&[1]]));
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["lhs"], "1/3");
        assert_eq!(json["rhs"], "2/1");
    }

    #[test]
    fn lemma3_examples() {
        let x =
            AnnotatedAntichains::from_families(fam(4, &[&[1, 2, 3]]), fam(4, &[&[1, 2]])).unwrap();
        let r = lemma3_check(&x);
        assert!(r.coarse.hypotheses_ok);
        assert_eq!(
            r.coarse.lhs,
            Rat::new(1, 4) + Rat::new(1, 6) * Rat::new(1, 2)
        );
        assert_eq!(r.coarse.lhs, Rat::new(1, 3));
        assert_eq!(r.exact.lhs, Rat::new(1, 3));
        assert!(r.terms[0].image_is_coatom && r.terms[0].weights_agree);
        assert_eq!(r.terms[0].gap, 1);

        for n in 2..=6 {
            for k in 0..n {
                let x = AnnotatedAntichains::new(
                    Family::level(gs(n), k).unwrap(),
                    Family::empty(gs(n)),
                    BTreeMap::new(),
                );
                let r = lemma3_check(&x);
                assert!(r.coarse.equality && r.exact.equality, "n={n} k={k}");
            }
        }

        let x = AnnotatedAntichains::new(
            fam(4, &[&[1, 2, 3, 4]]),
            Family::empty(gs(4)),
            BTreeMap::new(),
        );
        let r = lemma3_check(&x);
        assert!(!r.coarse.hypotheses_ok);
        assert!(r
            .coarse
            .hypothesis_failures
            .contains(&"full_set_in_m".to_string()));
    }

    #[test]
    fn lemma3_rejects_non_unique_images() {
        let m = fam(4, &[&[1, 2], &[1, 3]]);
        let mid = fam(4, &[&[1]]);
        let s1 = Subset::from_elements(gs(4), [1]).unwrap();
        let s12 = Subset::from_elements(gs(4), [1, 2]).unwrap();
        let x = AnnotatedAntichains::new(m, mid, BTreeMap::from([(s1, s12)]));
        assert!(x.validate().iter().any(|c| c.starts_with("f_not_unique")));
    }

    #[test]
    fn corollary1_examples() {
        let x = AnnotatedAntichains::new(
            Family::level(gs(4), 2).unwrap(),
            Family::empty(gs(4)),
            BTreeMap::new(),
        );
        let r = corollary1_check(&x);
        assert!(r.verdict.equality && r.stated_equality_condition);

        let x =
            AnnotatedAntichains::from_families(fam(4, &[&[1, 2, 3]]), fam(4, &[&[1, 2]])).unwrap();
        let r = corollary1_check(&x);
        assert_eq!(r.verdict.lhs, Rat::new(1, 3));
        assert!(r.verdict.holds && !r.verdict.equality);
        assert!(r.stated_equality_condition);

        let x =
            AnnotatedAntichains::from_families(fam(5, &[&[1, 2, 3]]), fam(5, &[&[1, 2]])).unwrap();
        let r = corollary1_check(&x);
        assert_eq!(r.verdict.lhs, Rat::new(3, 20));
        assert!(!r.stated_equality_condition);
    }

    #[test]
    fn g_examples() {
        assert_eq!(g(8, 4).unwrap(), Rat::new(280, 3));
        assert_eq!(g(4, 0).unwrap(), Rat::new(4, 3));
        for n in 2..=20 {
            assert_eq!(
                g(n, n - 2).unwrap(),
                Rat::from_integer(binomial(n as i64, 2) * 2)
            );
        }
        assert!(g(5, 4).is_err());
        assert!(g(5, 5).is_err());
    }

    #[test]
    fn g_argmax_examples() {
        assert_eq!(g_argmax(8).unwrap(), 4);
        assert_eq!(g_argmax(5).unwrap(), 3);
        assert_eq!(g_argmax(4).unwrap(), 2);
        assert!(g_argmax(3).is_err());
    }

    #[test]
    fn corollary2_bound_examples() {
        assert_eq!(corollary2_bound(4).unwrap(), Rat::from_integer(18));
        assert_eq!(corollary2_bound(5).unwrap(), Rat::from_integer(20));
        assert_eq!(corollary2_bound(7).unwrap(), Rat::new(105, 2));
        assert!(corollary2_bound(3).is_err());
    }
}
