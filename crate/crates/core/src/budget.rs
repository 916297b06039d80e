//! Work counters that turn runaway searches into errors.

use crate::error::{HurwitzError, Result};

/// A countdown of elementary steps for one query.
///
/// Searches call [`Budget::spend`] as they go; once the limit is crossed
/// the search stops with [`HurwitzError::BudgetExceeded`] instead of
/// silently truncating.
#[derive(Debug, Clone)]
pub struct Budget {
    module: &'static str,
    limit: u64,
    used: u64,
}

impl Budget {
    /// Creates a budget of `limit` steps charged to `module`.
    pub fn new(module: &'static str, limit: u64) -> Self {
        Budget { module, limit, used: 0 }
    }

    /// Records `n` more steps.
    pub fn spend(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            return Err(self.exceeded(format!("more than {} steps", self.limit)));
        }
        Ok(())
    }

    /// Steps recorded so far.
    pub fn used(&self) -> u64 {
        self.used
    }

    /// The configured limit.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Builds the error value for this budget with a custom message.
    pub fn exceeded(&self, detail: String) -> HurwitzError {
        HurwitzError::BudgetExceeded { module: self.module, detail }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trips_after_limit() {
        let mut b = Budget::new("test", 10);
        assert!(b.spend(10).is_ok());
        assert!(matches!(b.spend(1), Err(HurwitzError::BudgetExceeded { module: "test", .. })));
    }
}
