use crate::error::{Error, Result};

/// Runs `f` on a dedicated rayon pool with `threads` workers (0 = one per
/// available core).
pub fn with_threads<R, F>(threads: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(f))
}
