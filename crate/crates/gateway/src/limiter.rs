//! Sliding-window rate limiter and a counting semaphore for bounded
//! parallelism. Both are clock-agnostic so tests can run virtual time.

use std::collections::VecDeque;
use std::sync::{Arc, Condvar, Mutex};

use crate::clock::Clock;

const WINDOW_MS: u64 = 60_000;

/// At most `per_minute` acquisitions in any sliding 60-second window.
pub struct RateLimiter {
    per_minute: usize,
    stamps: Mutex<VecDeque<u64>>,
    clock: Arc<dyn Clock>,
}

impl RateLimiter {
    pub fn new(per_minute: usize, clock: Arc<dyn Clock>) -> Self {
        assert!(per_minute >= 1);
        Self { per_minute, stamps: Mutex::new(VecDeque::new()), clock }
    }

    /// Blocks (sleeping on the clock) until a slot is free, then claims it.
    pub fn acquire(&self) {
        loop {
            let wait = {
                let mut stamps = self.stamps.lock().unwrap();
                let now = self.clock.now_ms();
                while stamps.front().is_some_and(|&t| t + WINDOW_MS <= now) {
                    stamps.pop_front();
                }
                if stamps.len() < self.per_minute {
                    stamps.push_back(now);
                    return;
                }
                stamps.front().unwrap() + WINDOW_MS - now
            };
            self.clock.sleep_ms(wait.max(1));
        }
    }

    /// Timestamps of granted slots that are still inside the window.
    pub fn issued(&self) -> Vec<u64> {
        self.stamps.lock().unwrap().iter().copied().collect()
    }
}

/// Counting semaphore; the guard releases on drop.
pub struct Semaphore {
    permits: Mutex<usize>,
    available: Condvar,
}

impl Semaphore {
    pub fn new(permits: usize) -> Self {
        assert!(permits >= 1);
        Self { permits: Mutex::new(permits), available: Condvar::new() }
    }

    pub fn acquire(&self) -> SemaphoreGuard<'_> {
        let mut permits = self.permits.lock().unwrap();
        while *permits == 0 {
            permits = self.available.wait(permits).unwrap();
        }
        *permits -= 1;
        SemaphoreGuard { semaphore: self }
    }
}

pub struct SemaphoreGuard<'a> {
    semaphore: &'a Semaphore,
}

impl Drop for SemaphoreGuard<'_> {
    fn drop(&mut self) {
        let mut permits = self.semaphore.permits.lock().unwrap();
        *permits += 1;
        self.semaphore.available.notify_one();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::VirtualClock;

    #[test]
    fn limiter_never_exceeds_rate_in_any_window() {
        let clock = Arc::new(VirtualClock::new());
        let limiter = RateLimiter::new(5, clock.clone());
        let mut granted = Vec::new();
        for i in 0..23 {
            limiter.acquire();
            granted.push(clock.now_ms());
            // Uneven arrival pattern.
            clock.advance((i % 3) * 700);
        }
        assert_eq!(granted.len(), 23);
        for (i, &start) in granted.iter().enumerate() {
            let in_window =
                granted[i..].iter().filter(|&&t| t >= start && t < start + WINDOW_MS).count();
            assert!(in_window <= 5, "window at {start} has {in_window} calls");
        }
    }

    #[test]
    fn limiter_blocks_then_releases_after_window() {
        let clock = Arc::new(VirtualClock::new());
        let limiter = RateLimiter::new(2, clock.clone());
        limiter.acquire();
        limiter.acquire();
        // Third acquisition must advance virtual time past the window.
        limiter.acquire();
        assert!(clock.now_ms() >= WINDOW_MS);
    }

    #[test]
    fn semaphore_bounds_concurrency() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        let semaphore = Arc::new(Semaphore::new(3));
        let in_flight = Arc::new(AtomicUsize::new(0));
        let peak = Arc::new(AtomicUsize::new(0));
        let handles: Vec<_> = (0..16)
            .map(|_| {
                let (s, f, p) = (semaphore.clone(), in_flight.clone(), peak.clone());
                std::thread::spawn(move || {
                    let _guard = s.acquire();
                    let now = f.fetch_add(1, Ordering::SeqCst) + 1;
                    p.fetch_max(now, Ordering::SeqCst);
                    std::thread::sleep(std::time::Duration::from_millis(5));
                    f.fetch_sub(1, Ordering::SeqCst);
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        assert!(peak.load(Ordering::SeqCst) <= 3);
        assert_eq!(in_flight.load(Ordering::SeqCst), 0);
    }
}
