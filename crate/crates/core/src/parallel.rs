//! Worker pools for the concurrent search paths.

/// Runs `op` inside a rayon pool with exactly `workers` threads.
pub(crate) fn install<R, F>(workers: usize, op: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(op),
        // Pool creation only fails on thread spawn errors; the global pool still works.
        Err(_) => op(),
    }
}
