//! User plus system CPU time of the calling thread.

use std::time::Duration;

/// CPU time consumed so far by the calling thread, at nanosecond resolution.
/// `getrusage` is tick-based on many kernels, too coarse for millisecond
/// searches, so this reads the thread CPU clock instead.
pub fn thread_cpu_time() -> Duration {
    // SAFETY: timespec is plain old data and clock_gettime only writes into it.
    let mut ts: libc::timespec = unsafe { std::mem::zeroed() };
    if unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) } != 0 {
        return Duration::ZERO;
    }
    Duration::new(ts.tv_sec.max(0) as u64, ts.tv_nsec.clamp(0, 999_999_999) as u32)
}
