use std::time::Duration;

/// Retry schedule: `max_attempts` total tries with exponential backoff
/// between them. Defaults to 3 attempts starting at 1 s, doubling.
#[derive(Debug, Clone, PartialEq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
    pub multiplier: f64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            base_delay: Duration::from_secs(1),
            multiplier: 2.0,
        }
    }
}

impl RetryPolicy {
    /// No waiting between attempts; for replay-backed tests.
    pub fn immediate(max_attempts: u32) -> Self {
        RetryPolicy {
            max_attempts,
            base_delay: Duration::ZERO,
            multiplier: 2.0,
        }
    }

    /// Delay before attempt `n` (1-based; attempt 1 has no delay).
    pub fn delay_before(&self, attempt: u32) -> Duration {
        if attempt <= 1 {
            return Duration::ZERO;
        }
        let factor = self.multiplier.max(1.0).powi(attempt as i32 - 2);
        self.base_delay.mul_f64(factor)
    }
}

/// Injection point for waiting, so tests can observe delays without
/// actually sleeping.
pub trait Sleeper: Send + Sync {
    fn sleep(&self, d: Duration);
}

/// Real sleeper backed by `std::thread::sleep`.
pub struct ThreadSleeper;

impl Sleeper for ThreadSleeper {
    fn sleep(&self, d: Duration) {
        if !d.is_zero() {
            std::thread::sleep(d);
        }
    }
}
