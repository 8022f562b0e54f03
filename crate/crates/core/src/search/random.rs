//! Seeded random families for the property suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitfamily::{BitFamily, BIT_FAMILY_MAX_N};
use crate::family::Family;
use crate::subset::{GroundSize, Subset};

use super::Predicate;

/// Inclusion probability for each subset.
#[derive(Clone, Debug, PartialEq)]
pub enum Density {
    Uniform(f64),
    /// Probability per cardinality `0..=n`; missing entries count as 0.
    PerLevel(Vec<f64>),
}

impl Density {
    fn probability(&self, size: usize) -> f64 {
        match self {
            Density::Uniform(p) => *p,
            Density::PerLevel(ps) => ps.get(size).copied().unwrap_or(0.0),
        }
    }
}

/// Independent inclusion of each subset of `[n]`.
pub fn random_family(n: GroundSize, density: &Density, seed: u64) -> Family {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = (0..n.power_set_len() as u32)
        .map(|v| Subset::from_bits(n, v).expect("value below 2^n"))
        .filter(|s| rng.random_bool(density.probability(s.len()).clamp(0.0, 1.0)))
        .collect::<Vec<_>>();
    Family::new(n, members).expect("same ground size")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleOptions {
    pub predicate: Predicate,
    pub exclude_empty: bool,
    pub exclude_full: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            predicate: Predicate::Star,
            exclude_empty: false,
            exclude_full: false,
        }
    }
}

/// Butterfly-free family by randomized greedy insertion (n <= 7).
pub fn random_star_family(n: GroundSize, seed: u64) -> Family {
    random_star_family_with(n, seed, SampleOptions::default())
}

/// Fork-free family avoiding `[n]` by randomized greedy insertion (n <= 7).
pub fn random_fork_free_family(n: GroundSize, seed: u64) -> Family {
    random_star_family_with(
        n,
        seed,
        SampleOptions {
            predicate: Predicate::ForkFree,
            exclude_empty: false,
            exclude_full: true,
        },
    )
}

/// Visits the subsets in a random order and keeps each with a per-family
/// acceptance rate, rejecting any that would break the predicate.
///
/// Panics if `n > 7`.
pub fn random_star_family_with(n: GroundSize, seed: u64, options: SampleOptions) -> Family {
    assert!(
        n.get() <= BIT_FAMILY_MAX_N,
        "random constrained families need n <= 7"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Subset> = (0..n.power_set_len() as u32)
        .map(|v| Subset::from_bits(n, v).expect("value below 2^n"))
        .filter(|s| !(options.exclude_empty && s.is_empty()))
        .filter(|s| !(options.exclude_full && s.is_full()))
        .collect();
    order.shuffle(&mut rng);
    // mix sparse and near-maximal samples
    let accept = if rng.random_bool(0.5) {
        1.0
    } else {
        rng.random_range(0.2..1.0)
    };
    let guard = options.predicate.guard();
    let mut fam = BitFamily::new(n);
    for s in order {
        if rng.random_bool(accept) && !fam.would_violate(s, guard) {
            fam.insert(s);
        }
    }
    fam.to_family()
}
