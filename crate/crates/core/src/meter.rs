//! Step accounting for bounded searches.

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("step budget of {limit} exhausted")]
pub struct Exhausted {
    pub limit: u64,
}

/// Counts abstract work steps against a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    pub fn new(limit: u64) -> Self {
        Meter { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Meter::new(u64::MAX)
    }

    pub fn charge(&mut self, steps: u64) -> Result<(), Exhausted> {
        self.used = self.used.saturating_add(steps);
        if self.used > self.limit {
            Err(Exhausted { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.limit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charges_until_limit() {
        let mut m = Meter::new(10);
        assert!(m.charge(4).is_ok());
        assert!(m.charge(6).is_ok());
        assert_eq!(m.remaining(), 0);
        assert!(m.charge(1).is_err());
        assert!(Meter::unlimited().charge(u64::MAX).is_ok());
    }
}
