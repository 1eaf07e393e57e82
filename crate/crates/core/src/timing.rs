//! Elapsed and CPU time around a measured call.

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    /// Monotonic elapsed seconds.
    pub wall_clock_s: f64,
    /// CPU seconds consumed by the calling thread.
    pub cpu_time_s: f64,
}

pub struct Stopwatch {
    wall: Instant,
    cpu: f64,
}

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch {
            wall: Instant::now(),
            cpu: thread_cpu_seconds(),
        }
    }

    pub fn stop(&self) -> Timing {
        Timing {
            wall_clock_s: self.wall.elapsed().as_secs_f64(),
            cpu_time_s: thread_cpu_seconds() - self.cpu,
        }
    }
}

/// Measures `f` on the current thread.
pub fn timed<R>(f: impl FnOnce() -> R) -> (R, Timing) {
    let sw = Stopwatch::start();
    let r = f();
    (r, sw.stop())
}

#[cfg(unix)]
fn thread_cpu_seconds() -> f64 {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    // SAFETY: `ts` is a valid, writable timespec for the duration of the call.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return f64::NAN;
    }
    ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9
}

#[cfg(not(unix))]
fn thread_cpu_seconds() -> f64 {
    f64::NAN
}
