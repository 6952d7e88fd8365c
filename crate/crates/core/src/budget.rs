use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Cap on the number of objects any single enumeration may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(10_000_000);

    pub fn unlimited() -> Self {
        Budget(u64::MAX)
    }

    pub fn check(self, needed: &BigUint) -> Result<u64> {
        match needed.to_u64() {
            Some(n) if n <= self.0 => Ok(n),
            _ => Err(Error::BudgetExceeded {
                needed: needed.to_string(),
                budget: self.0,
            }),
        }
    }

    pub fn check_u64(self, needed: u64) -> Result<u64> {
        self.check(&BigUint::from(needed))
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}
