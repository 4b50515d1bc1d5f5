use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::sigterm::FreshScope;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Cap on Diophantine candidate vectors and basis-subset combinations.
    pub dioph_cap: usize,
    /// Rewrite steps allowed in one normalization.
    pub step_budget: usize,
    /// Retained variants allowed in one variant tree.
    pub variant_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dioph_cap: 1_000_000,
            step_budget: 100_000,
            variant_cap: 10_000,
        }
    }
}

/// Per-query mutable state: the fresh-variable scope, resource limits and an
/// optional deadline. Never shared between concurrent queries.
#[derive(Debug, Clone, Default)]
pub struct Ctx {
    pub fresh: FreshScope,
    pub limits: Limits,
    pub deadline: Option<Instant>,
}

impl Ctx {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_limits(limits: Limits) -> Self {
        Ctx {
            limits,
            ..Self::default()
        }
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.deadline = timeout.map(|d| Instant::now() + d);
        self
    }

    pub fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }
}
