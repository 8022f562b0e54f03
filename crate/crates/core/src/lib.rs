//! Families of subsets of `[n]` that contain no four distinct members
//! `A, B, C, D` with `A ∪ B ⊆ C ∩ D`.
//!
//! * [`subset`], [`family`], [`arith`], [`io`]: the set/family algebra, exact
//!   rationals and the text format.
//! * [`conditions`]: butterfly, fork and antichain checkers with witnesses.
//! * [`lym`]: exact weighted sums `Σ 1/C(n,|F|)` and the inequalities on them.
//! * [`cyclic`]: intervals along cyclic arrangements, chain counts and the
//!   incidence double count.
//! * [`search`]: exact maximum families and extremal catalogs.

pub mod arith;
pub mod bitfamily;
pub mod conditions;
pub mod cyclic;
pub mod error;
pub mod family;
pub mod io;
pub mod lym;
pub mod search;
pub mod subset;

pub use arith::{binomial, factorial, two_largest_binomials, Rat};
pub use error::{Error, Result};
pub use family::{Family, Permutation};
pub use lym::InequalityVerdict;
pub use search::Predicate;
pub use subset::{GroundSize, Subset};
