pub mod audit;
pub mod check;
pub mod lym;
pub mod proptest;
pub mod search;

use std::str::FromStr;
use std::time::Duration;

use butterfly_core::search::Budget;

/// `--budget` value: a node count, or seconds/milliseconds with a unit suffix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetArg(pub Budget);

impl FromStr for BudgetArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad =
            || format!("invalid budget {s:?}: expected a node count or a time like 30s or 250ms");
        let budget = if let Some(ms) = s.strip_suffix("ms") {
            Budget::time(Duration::from_millis(ms.parse().map_err(|_| bad())?))
        } else if let Some(secs) = s.strip_suffix('s') {
            let secs: f64 = secs.parse().map_err(|_| bad())?;
            if !secs.is_finite() || secs < 0.0 {
                return Err(bad());
            }
            Budget::time(Duration::from_secs_f64(secs))
        } else {
            Budget::nodes(s.parse().map_err(|_| bad())?)
        };
        Ok(BudgetArg(budget))
    }
}
