use crate::error::{Error, Result};

/// Work budget in abstract units (roughly one 2x2 modular matrix product or
/// one residue probe each).
///
/// Budgeted operations estimate their cost up front from the input sizes and
/// refuse to start when the estimate exceeds the budget. Estimating instead
/// of metering keeps truncation points identical under any parallelism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    ops: u64,
}

impl Budget {
    pub const DEFAULT_OPS: u64 = 100_000_000;

    pub fn new(ops: u64) -> Self {
        Budget { ops }
    }

    pub fn unlimited() -> Self {
        Budget { ops: u64::MAX }
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }

    pub fn allows(&self, estimate: u128) -> bool {
        estimate <= self.ops as u128
    }

    pub fn check(&self, estimate: u128, what: &str) -> Result<()> {
        if self.allows(estimate) {
            Ok(())
        } else {
            Err(Error::BudgetExceeded(format!(
                "{what} needs ~{estimate} work units, budget is {}",
                self.ops
            )))
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { ops: Self::DEFAULT_OPS }
    }
}
