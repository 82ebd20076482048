//! Step and wall-clock limits shared by the long-running symbolic routines.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Default cap on the number of rounds of the invariant-set fixed point.
pub const DEFAULT_MAX_ROUNDS: usize = 32;

/// A computation budget. Reduction steps are counted with an atomic so one
/// budget can be shared by checks running on several threads.
#[derive(Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    max_steps: Option<u64>,
    steps: AtomicU64,
    pub max_rounds: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self::unlimited()
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            deadline: None,
            max_steps: None,
            steps: AtomicU64::new(0),
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }

    pub fn with_timeout(limit: Duration) -> Self {
        Budget {
            deadline: Instant::now().checked_add(limit),
            ..Self::unlimited()
        }
    }

    pub fn with_steps(max_steps: u64) -> Self {
        Budget {
            max_steps: Some(max_steps),
            ..Self::unlimited()
        }
    }

    pub fn steps(mut self, max_steps: u64) -> Self {
        self.max_steps = Some(max_steps);
        self
    }

    pub fn rounds(mut self, max_rounds: usize) -> Self {
        self.max_rounds = max_rounds;
        self
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    /// Records one unit of work and fails once any limit is hit.
    pub fn tick(&self) -> Result<()> {
        let n = self.steps.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(max) = self.max_steps {
            if n > max {
                return Err(Error::BudgetExceeded(format!("more than {max} steps")));
            }
        }
        // Clock reads are comparatively expensive; sample every 64 ticks.
        if n.is_multiple_of(64) {
            self.check_deadline()?;
        }
        Ok(())
    }

    pub fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => {
                Err(Error::BudgetExceeded("time limit reached".into()))
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_limit_trips() {
        let b = Budget::with_steps(3);
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert!(b.tick().unwrap_err().is_budget_exceeded());
    }

    #[test]
    fn zero_timeout_trips_on_check() {
        let b = Budget::with_timeout(Duration::ZERO);
        assert!(b.check_deadline().is_err());
    }
}
