use std::sync::Mutex;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

/// Time source used by the rate limiter and retry backoff, so tests can
/// substitute a virtual clock.
pub trait Clock: Send + Sync {
    fn now_ms(&self) -> u64;
    fn sleep_ms(&self, ms: u64);
}

pub struct SystemClock;

impl Clock for SystemClock {
    fn now_ms(&self) -> u64 {
        SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default().as_millis() as u64
    }

    fn sleep_ms(&self, ms: u64) {
        std::thread::sleep(Duration::from_millis(ms));
    }
}

/// Manual clock: sleeping advances time instantly.
pub struct VirtualClock {
    now: Mutex<u64>,
}

impl VirtualClock {
    pub fn new() -> Self {
        Self { now: Mutex::new(0) }
    }

    pub fn advance(&self, ms: u64) {
        *self.now.lock().unwrap() += ms;
    }
}

impl Default for VirtualClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for VirtualClock {
    fn now_ms(&self) -> u64 {
        *self.now.lock().unwrap()
    }

    fn sleep_ms(&self, ms: u64) {
        self.advance(ms);
    }
}
