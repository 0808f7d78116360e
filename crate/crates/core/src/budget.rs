//! Work limits for the exhaustive searches.
//!
//! Every enumeration in the crate charges a shared [`Budget`]. When either
//! the step count or the wall-clock limit runs out the search stops with
//! [`Error::BudgetExceeded`]; no search ever truncates silently.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Debug)]
pub struct Budget {
    max_steps: Option<u64>,
    deadline: Option<Instant>,
    steps: AtomicU64,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_steps: None,
            deadline: None,
            steps: AtomicU64::new(0),
        }
    }

    pub fn new(max_steps: Option<u64>, max_time: Option<Duration>) -> Self {
        Budget {
            max_steps,
            deadline: max_time.map(|d| Instant::now() + d),
            steps: AtomicU64::new(0),
        }
    }

    pub fn with_steps(max_steps: u64) -> Self {
        Self::new(Some(max_steps), None)
    }

    /// Steps charged so far.
    pub fn used(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    /// Charge `n` steps of work done inside `what`.
    pub fn charge(&self, n: u64, what: &str) -> Result<()> {
        let used = self.steps.fetch_add(n, Ordering::Relaxed) + n;
        if let Some(max) = self.max_steps {
            if used > max {
                return Err(Error::BudgetExceeded(format!(
                    "{what}: more than {max} subsets examined"
                )));
            }
        }
        // Checking the clock on every charge is measurable in tight loops.
        if used & 0x3ff < n.max(1) {
            self.check_time(what)?;
        }
        Ok(())
    }

    pub fn check_time(&self, what: &str) -> Result<()> {
        match self.deadline {
            Some(deadline) if Instant::now() > deadline => {
                Err(Error::BudgetExceeded(format!("{what}: time limit reached")))
            }
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::unlimited()
    }
}
