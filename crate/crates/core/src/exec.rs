//! Execution policy and time budgets shared by the search routines.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// How embarrassingly parallel loops are run. `Parallel` degrades to
/// `Sequential` when the crate is built without the `parallel` feature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Order-preserving map over `0..n`.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }
}

/// A wall-clock cap, checked cooperatively by long searches.
#[derive(Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
    expired: AtomicBool,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_limit(limit: Duration) -> Self {
        Budget {
            deadline: Instant::now().checked_add(limit),
            expired: AtomicBool::new(false),
        }
    }

    pub fn from_secs(secs: Option<f64>) -> Self {
        match secs {
            Some(s) => Budget::with_limit(Duration::from_secs_f64(s.max(0.0))),
            None => Budget::unlimited(),
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.expired.load(Ordering::Relaxed) {
            return Err(Error::Interrupted);
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                self.expired.store(true, Ordering::Relaxed);
                return Err(Error::Interrupted);
            }
        }
        Ok(())
    }
}

/// Calls [`Budget::check`] once every `PERIOD` ticks.
pub(crate) struct Ticker<'a> {
    budget: &'a Budget,
    count: u32,
    pub nodes: u64,
}

impl<'a> Ticker<'a> {
    const PERIOD: u32 = 4096;

    pub fn new(budget: &'a Budget) -> Self {
        Ticker {
            budget,
            count: Self::PERIOD - 1,
            nodes: 0,
        }
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        self.count += 1;
        if self.count >= Self::PERIOD {
            self.count = 0;
            self.budget.check()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_budget_expires() {
        let b = Budget::with_limit(Duration::ZERO);
        assert_eq!(b.check(), Err(Error::Interrupted));
        assert!(Budget::unlimited().check().is_ok());
    }

    #[test]
    fn map_range_preserves_order() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(exec.map_range(100, |i| i * i), (0..100).map(|i| i * i).collect::<Vec<_>>());
        }
    }
}
