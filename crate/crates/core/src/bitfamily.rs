//! Families over `[n]`, `n <= 7`, packed as a 128-bit mask indexed by subset value.
//!
//! Used where many incremental membership/violation queries are needed (random
//! sampling, exhaustive sweeps). Violation tests are `O(|F|)` popcounts.

use std::sync::OnceLock;

use crate::family::Family;
use crate::subset::{GroundSize, Subset};

pub const BIT_FAMILY_MAX_N: usize = 7;

pub(crate) struct Tables {
    /// `down[v]`: all subsets of `v` (including `v`).
    down: Vec<u128>,
    /// `up[v]`: all supersets of `v` (including `v`).
    up: Vec<u128>,
}

fn tables(n: usize) -> &'static Tables {
    static CACHE: [OnceLock<Tables>; BIT_FAMILY_MAX_N + 1] =
        [const { OnceLock::new() }; BIT_FAMILY_MAX_N + 1];
    assert!(n <= BIT_FAMILY_MAX_N, "bit families support n <= 7");
    CACHE[n].get_or_init(|| {
        let size = 1usize << n;
        let mask_of = |keep: &dyn Fn(usize) -> bool| {
            (0..size)
                .filter(|&x| keep(x))
                .fold(0u128, |m, x| m | 1 << x)
        };
        let down = (0..size).map(|w| mask_of(&|v| v & !w == 0)).collect();
        let up = (0..size).map(|v| mask_of(&|w| v & !w == 0)).collect();
        Tables { down, up }
    })
}

/// Which forbidden configuration a [`BitFamily`] guards against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guard {
    /// No four distinct `A, B, C, D` with `A ∪ B ⊆ C ∩ D`.
    Star,
    /// No three distinct `A, B, C` with `A ⊂ B` and `A ⊂ C`.
    Fork,
}

#[derive(Clone, Copy)]
pub struct BitFamily {
    n: GroundSize,
    mask: u128,
    tables: &'static Tables,
}

impl BitFamily {
    pub fn new(n: GroundSize) -> BitFamily {
        BitFamily {
            n,
            mask: 0,
            tables: tables(n.get()),
        }
    }

    pub fn from_family(f: &Family) -> BitFamily {
        let mut b = BitFamily::new(f.ground());
        for s in f {
            b.insert(*s);
        }
        b
    }

    pub fn to_family(&self) -> Family {
        Family::from_value_mask(self.n, &[self.mask as u64, (self.mask >> 64) as u64])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    #[inline]
    pub fn contains(&self, s: Subset) -> bool {
        self.mask & (1 << s.bits()) != 0
    }

    #[inline]
    pub fn insert(&mut self, s: Subset) {
        self.mask |= 1 << s.bits();
    }

    #[inline]
    pub fn remove(&mut self, s: Subset) {
        self.mask &= !(1 << s.bits());
    }

    fn members(&self) -> impl Iterator<Item = usize> {
        let mut m = self.mask;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        })
    }

    /// Whether adding `x` (not yet a member) would create a forbidden configuration.
    pub fn would_violate(&self, x: Subset, guard: Guard) -> bool {
        debug_assert!(!self.contains(x));
        let x = x.bits() as usize;
        let t = self.tables;
        let f = self.mask;
        match guard {
            Guard::Star => self.members().any(|y| {
                let ybit = 1u128 << y;
                // x and y on top: two other members below x ∩ y
                (f & t.down[x & y] & !ybit).count_ones() >= 2
                    // x and y at the bottom: two other members above x ∪ y
                    || (f & t.up[x | y] & !ybit).count_ones() >= 2
            }),
            Guard::Fork => {
                // x at the bottom of a fork
                (f & t.up[x]).count_ones() >= 2
                    // x on top: some member below x already has another superset
                    || self.members().any(|a| {
                        a & !x == 0 && (f & t.up[a] & !(1u128 << a)).count_ones() >= 1
                    })
            }
        }
    }
}
