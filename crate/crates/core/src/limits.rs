//! Global size cap for exhaustive structures and worker-count control.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default cap on any exhaustively enumerated structure: 2^24 cells.
pub const DEFAULT_MAX_CELLS: u64 = 1 << 24;

static MAX_CELLS: AtomicU64 = AtomicU64::new(DEFAULT_MAX_CELLS);

pub fn max_cells() -> u64 {
    MAX_CELLS.load(Ordering::Relaxed)
}

/// Overrides the process-wide cap. Values above 2^32 are clamped, since
/// element indices are stored as `u32`.
pub fn set_max_cells(cap: u64) {
    MAX_CELLS.store(cap.min(1 << 32), Ordering::Relaxed);
}

/// Fails with `SizeCapExceeded` when `cells` is above the current cap.
pub fn check_cells(cells: u128) -> Result<()> {
    let cap = max_cells();
    if cells > cap as u128 {
        return Err(Error::SizeCapExceeded { requested: cells, cap });
    }
    Ok(())
}

/// Runs `op` on a dedicated rayon pool with exactly `workers` threads.
///
/// Every parallel kernel in the crate merges per-worker results under a
/// total order, so the output does not depend on `workers`.
pub fn with_workers<R, F>(workers: usize, op: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("failed to build worker pool");
    pool.install(op)
}
