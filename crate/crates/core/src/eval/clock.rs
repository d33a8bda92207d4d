//! Time source for evaluation timeouts.

use core::time::Duration;

/// A monotonic time source. Only differences between readings matter.
pub trait Clock: Send + Sync {
    fn now(&self) -> Duration;
}

/// A clock that never advances, so wall-clock timeouts never fire and only
/// the step budget limits evaluation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now(&self) -> Duration {
        Duration::ZERO
    }
}
