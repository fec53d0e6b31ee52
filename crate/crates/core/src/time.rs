//! Integer-millisecond time arithmetic and injectable clocks.
//!
//! Everything that touches time goes through [`Clock`] so that budgets,
//! TTL sweeps, submission windows, and score decay are testable with a
//! scripted timeline instead of the wall clock.

use std::ops::Add;
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

/// A span of time in whole milliseconds.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct DurationMillis(pub u64);

impl DurationMillis {
    pub const ZERO: DurationMillis = DurationMillis(0);

    pub const fn from_millis(ms: u64) -> Self {
        DurationMillis(ms)
    }

    pub const fn from_secs(secs: u64) -> Self {
        DurationMillis(secs * 1_000)
    }

    pub const fn from_minutes(minutes: u64) -> Self {
        DurationMillis(minutes * 60_000)
    }

    pub const fn as_millis(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1_000.0
    }

    /// Integer half, rounding down.
    pub const fn halved(self) -> Self {
        DurationMillis(self.0 / 2)
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn saturating_sub(self, other: DurationMillis) -> DurationMillis {
        DurationMillis(self.0.saturating_sub(other.0))
    }

    pub fn saturating_mul(self, factor: u64) -> DurationMillis {
        DurationMillis(self.0.saturating_mul(factor))
    }

    pub fn min(self, other: DurationMillis) -> DurationMillis {
        DurationMillis(self.0.min(other.0))
    }

    pub fn to_std(self) -> std::time::Duration {
        std::time::Duration::from_millis(self.0)
    }
}

impl Add for DurationMillis {
    type Output = DurationMillis;

    fn add(self, rhs: DurationMillis) -> DurationMillis {
        DurationMillis(self.0.saturating_add(rhs.0))
    }
}

/// An instant in whole milliseconds since the Unix epoch.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct TimestampMillis(pub u64);

impl TimestampMillis {
    pub const fn from_millis(ms: u64) -> Self {
        TimestampMillis(ms)
    }

    pub const fn as_millis(self) -> u64 {
        self.0
    }

    /// Time elapsed since `earlier`, saturating at zero if `earlier` is later.
    pub fn elapsed_since(self, earlier: TimestampMillis) -> DurationMillis {
        DurationMillis(self.0.saturating_sub(earlier.0))
    }
}

impl Add<DurationMillis> for TimestampMillis {
    type Output = TimestampMillis;

    fn add(self, rhs: DurationMillis) -> TimestampMillis {
        TimestampMillis(self.0.saturating_add(rhs.0))
    }
}

/// Source of time for every component that budgets, decays, or expires.
pub trait Clock: Send + Sync {
    fn now(&self) -> TimestampMillis;

    /// Blocks (or, for simulated clocks, logically advances) for `span`.
    fn sleep(&self, span: DurationMillis);
}

/// Wall-clock time; `sleep` actually blocks the calling thread.
#[derive(Debug, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> TimestampMillis {
        let since_epoch = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .unwrap_or_default();
        TimestampMillis(since_epoch.as_millis() as u64)
    }

    fn sleep(&self, span: DurationMillis) {
        std::thread::sleep(span.to_std());
    }
}

/// Deterministic clock for scripted runs. `sleep` advances the timeline
/// instead of blocking, so scripted scenarios replay identically.
#[derive(Debug)]
pub struct SimClock {
    now_ms: Mutex<u64>,
}

impl SimClock {
    pub fn new(start: TimestampMillis) -> Self {
        SimClock {
            now_ms: Mutex::new(start.as_millis()),
        }
    }

    pub fn advance(&self, span: DurationMillis) {
        let mut now = self.now_ms.lock().expect("clock poisoned");
        *now = now.saturating_add(span.as_millis());
    }

    /// Jumps forward to `target`; never moves backwards.
    pub fn advance_to(&self, target: TimestampMillis) {
        let mut now = self.now_ms.lock().expect("clock poisoned");
        if target.as_millis() > *now {
            *now = target.as_millis();
        }
    }
}

impl Default for SimClock {
    fn default() -> Self {
        SimClock::new(TimestampMillis(0))
    }
}

impl Clock for SimClock {
    fn now(&self) -> TimestampMillis {
        TimestampMillis(*self.now_ms.lock().expect("clock poisoned"))
    }

    fn sleep(&self, span: DurationMillis) {
        self.advance(span);
    }
}
