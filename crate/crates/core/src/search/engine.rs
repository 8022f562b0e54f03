//! Depth-first branch and bound over the `2^n` subsets of `[n]` (n <= 6).
//!
//! Families are `u64` masks over candidate *ranks*, where rank order is the
//! fixed (cardinality, bit value) member order. Pruning uses only facts that
//! follow directly from the forbidden configuration:
//!
//! * feasibility propagation: a candidate that would complete a forbidden
//!   configuration with the chosen members is dropped;
//! * a chain-partition bound: a chain of 4 members is a butterfly and a chain of
//!   3 members is a fork, so each chain of a fixed symmetric chain decomposition
//!   contributes at most 3 (resp. 2) members;
//! * root symmetry: a nonempty family whose smallest member has size `k` is
//!   isomorphic to one containing `{1, ..., k}` and nothing smaller.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use super::Predicate;

pub(crate) const ENGINE_MAX_N: usize = 6;

pub(crate) struct Space {
    pub n: usize,
    pub predicate: Predicate,
    /// rank -> subset bit value
    pub value_of: Vec<u32>,
    /// bit value -> rank
    pub rank_of: Vec<u32>,
    /// by value: rank mask of all subsets of it
    down: Vec<u64>,
    /// by value: rank mask of all supersets of it
    up: Vec<u64>,
    chains: Vec<u64>,
    chain_cap: u32,
}

impl Space {
    pub fn new(n: usize, predicate: Predicate) -> Space {
        assert!((1..=ENGINE_MAX_N).contains(&n));
        let size = 1usize << n;
        let mut value_of: Vec<u32> = (0..size as u32).collect();
        value_of.sort_by_key(|&v| (v.count_ones(), v));
        let mut rank_of = vec![0u32; size];
        for (r, &v) in value_of.iter().enumerate() {
            rank_of[v as usize] = r as u32;
        }
        let mut down = vec![0u64; size];
        let mut up = vec![0u64; size];
        for v in 0..size {
            for w in 0..size {
                if v & !w == 0 {
                    down[w] |= 1 << rank_of[v];
                    up[v] |= 1 << rank_of[w];
                }
            }
        }
        let chains = symmetric_chains(n)
            .into_iter()
            .map(|chain| {
                chain
                    .iter()
                    .fold(0u64, |m, &v| m | 1 << rank_of[v as usize])
            })
            .collect();
        Space {
            n,
            predicate,
            value_of,
            rank_of,
            down,
            up,
            chains,
            chain_cap: match predicate {
                Predicate::Star => 3,
                Predicate::ForkFree => 2,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.value_of.len()
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    #[inline]
    fn val(&self, rank: u32) -> usize {
        self.value_of[rank as usize] as usize
    }

    /// Whether `chosen ∪ {x}` stays feasible, assuming `chosen` is feasible.
    pub fn can_add(&self, chosen: u64, x: u32) -> bool {
        let xv = self.val(x);
        match self.predicate {
            Predicate::Star => {
                let mut rest = chosen;
                while rest != 0 {
                    let y = rest.trailing_zeros();
                    rest &= rest - 1;
                    let yv = self.val(y);
                    let ybit = 1u64 << y;
                    if (chosen & self.down[xv & yv] & !ybit).count_ones() >= 2
                        || (chosen & self.up[xv | yv] & !ybit).count_ones() >= 2
                    {
                        return false;
                    }
                }
                true
            }
            Predicate::ForkFree => {
                if (chosen & self.up[xv]).count_ones() >= 2 {
                    return false;
                }
                let mut below = chosen & self.down[xv];
                while below != 0 {
                    let a = below.trailing_zeros();
                    below &= below - 1;
                    if (chosen & self.up[self.val(a)] & !(1u64 << a)).count_ones() >= 1 {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Whether `z` stays addable after `x` joins `chosen`, given both were addable
    /// to `chosen` on their own. Only configurations using both `x` and `z` matter.
    #[inline]
    fn still_addable(&self, chosen: u64, x: u32, z: u32) -> bool {
        let xv = self.val(x);
        let zv = self.val(z);
        match self.predicate {
            Predicate::Star => {
                if (chosen & self.up[xv | zv]).count_ones() >= 2 {
                    return false;
                }
                if (chosen & self.down[xv & zv]).count_ones() >= 2 {
                    return false;
                }
                // one of x, z below the other, plus a chosen top and a chosen bottom
                for (lo, hi) in [(xv, zv), (zv, xv)] {
                    if lo & !hi != 0 {
                        continue;
                    }
                    let mut tops = chosen & self.up[lo];
                    while tops != 0 {
                        let d = tops.trailing_zeros();
                        tops &= tops - 1;
                        let dv = self.val(d);
                        if (chosen & self.down[hi & dv] & !(1u64 << d)) != 0 {
                            return false;
                        }
                    }
                }
                true
            }
            Predicate::ForkFree => {
                if xv & !zv == 0 && (chosen & self.up[xv]) != 0 {
                    return false;
                }
                if zv & !xv == 0 && (chosen & self.up[zv]) != 0 {
                    return false;
                }
                (chosen & self.down[xv & zv]) == 0
            }
        }
    }

    fn filter_after_insert(&self, chosen_before: u64, x: u32, mut cand: u64) -> u64 {
        let mut out = 0u64;
        while cand != 0 {
            let z = cand.trailing_zeros();
            cand &= cand - 1;
            if self.still_addable(chosen_before, x, z) {
                out |= 1 << z;
            }
        }
        out
    }

    /// Feasible candidates among `pool` for the feasible family `chosen`.
    pub fn filter_all(&self, chosen: u64, mut pool: u64) -> u64 {
        let mut out = 0u64;
        while pool != 0 {
            let z = pool.trailing_zeros();
            pool &= pool - 1;
            if self.can_add(chosen, z) {
                out |= 1 << z;
            }
        }
        out
    }

    #[inline]
    pub fn bound(&self, available: u64) -> u32 {
        self.chains
            .iter()
            .map(|&c| (available & c).count_ones().min(self.chain_cap))
            .sum()
    }

    pub fn rank_mask_to_values(&self, mask: u64) -> Vec<u32> {
        let mut out = Vec::new();
        let mut m = mask;
        while m != 0 {
            let r = m.trailing_zeros();
            m &= m - 1;
            out.push(self.value_of[r as usize]);
        }
        out
    }

    /// Root subproblems, one per minimum member size `k`: `{1..k}` chosen, smaller sets excluded.
    pub fn root_branches(&self) -> Vec<Node> {
        (0..=self.n)
            .map(|k| {
                let first = self.rank_of[(1usize << k) - 1];
                let chosen = 1u64 << first;
                let pool = self.full_mask() & !((1u64 << first) | ((1u64 << first) - 1));
                Node {
                    chosen,
                    cand: self.filter_all(chosen, pool),
                }
            })
            .collect()
    }
}

/// Greene–Kleitman symmetric chain decomposition of `2^[n]`, as lists of bit values.
pub(crate) fn symmetric_chains(n: usize) -> Vec<Vec<u32>> {
    let mut groups: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
    for v in 0..(1u32 << n) {
        // element i in v reads as ')', absent as '('; matched pairs are fixed along a chain
        let mut stack = Vec::new();
        let mut matched = 0u32;
        for i in 0..n {
            if v & (1 << i) == 0 {
                stack.push(i);
            } else if let Some(j) = stack.pop() {
                matched |= (1 << i) | (1 << j);
            }
        }
        groups.entry((matched, v & matched)).or_default().push(v);
    }
    groups
        .into_values()
        .map(|mut c| {
            c.sort_by_key(|v| v.count_ones());
            c
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Node {
    pub chosen: u64,
    pub cand: u64,
}

pub(crate) struct Limits {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
    pub spent: AtomicU64,
    pub aborted: AtomicBool,
    flush_every: u64,
}

impl Limits {
    pub fn new(max_nodes: Option<u64>, deadline: Option<Instant>) -> Limits {
        Limits {
            max_nodes,
            deadline,
            spent: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
            // small node budgets need frequent accounting to stop near the limit
            flush_every: max_nodes.map_or(FLUSH_EVERY, |m| (m / 64).clamp(1, FLUSH_EVERY)),
        }
    }

    fn charge(&self, nodes: u64) -> bool {
        let total = self.spent.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if self.max_nodes.is_some_and(|m| total > m)
            || self.deadline.is_some_and(|d| Instant::now() >= d)
        {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    pub fn is_aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }
}

const FLUSH_EVERY: u64 = 1 << 12;

/// What a DFS run is looking for.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Goal {
    /// Families strictly larger than `floor` (and than anything found so far in this run).
    Improve { floor: u32 },
    /// Every family of exactly `target` members.
    Collect { target: u32 },
}

pub(crate) struct Run<'a> {
    space: &'a Space,
    limits: &'a Limits,
    goal: Goal,
    pub nodes: u64,
    unflushed: u64,
    pub best: Option<u64>,
    pub found: Vec<u64>,
    /// A feasible family larger than the collection target.
    pub overflow: Option<u64>,
    pub aborted: bool,
}

impl<'a> Run<'a> {
    pub fn new(space: &'a Space, limits: &'a Limits, goal: Goal) -> Run<'a> {
        Run {
            space,
            limits,
            goal,
            nodes: 0,
            unflushed: 0,
            best: None,
            found: Vec::new(),
            overflow: None,
            aborted: false,
        }
    }

    fn threshold(&self) -> u32 {
        match self.goal {
            Goal::Improve { floor } => floor.max(self.best.map_or(0, |b| b.count_ones())),
            Goal::Collect { target } => target.saturating_sub(1),
        }
    }

    fn finish(&mut self) {
        if self.unflushed > 0 {
            self.limits.charge(self.unflushed);
            self.unflushed = 0;
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= self.limits.flush_every {
            let ok = self.limits.charge(self.unflushed);
            self.unflushed = 0;
            if !ok {
                self.aborted = true;
            }
        } else if self.limits.is_aborted() {
            self.aborted = true;
        }
        !self.aborted && self.overflow.is_none()
    }

    /// Visits `node`; returns the children to expand (include first) or none at a leaf/prune.
    fn visit(&mut self, node: Node) -> Option<(Node, Node)> {
        if !self.tick() {
            return None;
        }
        let size = node.chosen.count_ones();
        match self.goal {
            Goal::Improve { floor } => {
                if size > floor && self.best.is_none_or(|b| size > b.count_ones()) {
                    self.best = Some(node.chosen);
                }
            }
            Goal::Collect { target } => {
                if size > target {
                    self.overflow = Some(node.chosen);
                    return None;
                }
                if size == target {
                    if node.cand != 0 {
                        // any remaining candidate extends to a larger feasible family
                        let z = node.cand.trailing_zeros();
                        self.overflow = Some(node.chosen | 1 << z);
                    } else {
                        self.found.push(node.chosen);
                    }
                    return None;
                }
            }
        }
        if node.cand == 0 {
            return None;
        }
        if self.space.bound(node.chosen | node.cand) <= self.threshold() {
            return None;
        }
        let x = node.cand.trailing_zeros();
        let rest = node.cand & !(1u64 << x);
        let include = Node {
            chosen: node.chosen | 1 << x,
            cand: self.space.filter_after_insert(node.chosen, x, rest),
        };
        let exclude = Node {
            chosen: node.chosen,
            cand: rest,
        };
        Some((include, exclude))
    }

    pub fn dfs(&mut self, node: Node) {
        if let Some((include, exclude)) = self.visit(node) {
            self.dfs(include);
            self.dfs(exclude);
        }
    }

    /// Expands `node` to `depth` decisions, returning the frontier in DFS order.
    pub fn split(&mut self, node: Node, depth: u32, out: &mut Vec<Node>) {
        if depth == 0 {
            out.push(node);
            return;
        }
        if let Some((include, exclude)) = self.visit(node) {
            self.split(include, depth - 1, out);
            self.split(exclude, depth - 1, out);
        }
    }

    pub fn close(mut self) -> Self {
        self.finish();
        if self.limits.is_aborted() {
            self.aborted = true;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_chains_partition_the_cube() {
        for n in 1..=6 {
            let chains = symmetric_chains(n);
            let mut seen = vec![false; 1 << n];
            for c in &chains {
                for w in c.windows(2) {
                    assert_eq!(w[0] & !w[1], 0, "not nested");
                    assert_eq!(w[0].count_ones() + 1, w[1].count_ones());
                }
                // symmetric: sizes k..n-k
                let lo = c[0].count_ones() as usize;
                let hi = c.last().unwrap().count_ones() as usize;
                assert_eq!(lo + hi, n);
                for &v in c {
                    assert!(!seen[v as usize]);
                    seen[v as usize] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
            let middle = crate::arith::binomial(n as i64, (n / 2) as i64) as usize;
            assert_eq!(chains.len(), middle);
        }
    }

    #[test]
    fn pairwise_update_matches_full_recheck() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for predicate in [Predicate::Star, Predicate::ForkFree] {
            for n in 2..=5 {
                let space = Space::new(n, predicate);
                for _ in 0..400 {
                    // random feasible family by greedy insertion
                    let mut chosen = 0u64;
                    for r in 0..space.len() as u32 {
                        if rng.random_bool(0.4) && space.can_add(chosen, r) {
                            chosen |= 1 << r;
                        }
                    }
                    let cand = space.filter_all(chosen, space.full_mask() & !chosen);
                    let mut c = cand;
                    while c != 0 {
                        let x = c.trailing_zeros();
                        c &= c - 1;
                        let rest = cand & !(1u64 << x);
                        assert_eq!(
                            space.filter_after_insert(chosen, x, rest),
                            space.filter_all(chosen | 1 << x, rest),
                            "{predicate:?} n={n}"
                        );
                    }
                }
            }
        }
    }
}
