// SPDX-License-Identifier: Apache-2.0

//! Thread-pool configuration for the exhaustive scans.

use std::sync::OnceLock;

/// Environment variable consulted when no explicit thread count is given.
pub const THREADS_ENV: &str = "RM_METRIC_THREADS";

static CONFIGURED: OnceLock<usize> = OnceLock::new();

/// Sets the global pool size once; later calls are ignored.
/// `None` falls back to `RM_METRIC_THREADS`, then to rayon's default.
pub fn configure_threads(requested: Option<usize>) -> usize {
    *CONFIGURED.get_or_init(|| {
        let n = requested
            .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()))
            .filter(|&n| n > 0);
        if let Some(n) = n {
            // a pool may already exist (e.g. inside tests); keep it then
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        rayon::current_num_threads()
    })
}
