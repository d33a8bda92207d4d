use std::time::{Duration, Instant};

use lff_core::eval::Clock;

/// Wall-clock time since construction.
#[derive(Clone, Copy, Debug)]
pub struct InstantClock(Instant);

impl InstantClock {
    pub fn new() -> Self {
        InstantClock(Instant::now())
    }
}

impl Default for InstantClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for InstantClock {
    fn now(&self) -> Duration {
        self.0.elapsed()
    }
}
