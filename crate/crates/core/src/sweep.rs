//! Independent solves mapped over a list of inputs.
//!
//! With the `parallel` feature the inputs are spread over a rayon pool;
//! without it (or with `jobs == 1`) they run in order on the calling
//! thread. Output order always follows input order.

#[cfg(feature = "parallel")]
use crate::error::Error;
use crate::error::Result;

/// Runs `f` over `items` sequentially.
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Runs `f` over `items` on the global rayon pool.
#[cfg(feature = "parallel")]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    map_sequential(items, f)
}

/// Runs `f` over `items` with at most `jobs` workers. `jobs == 0` means
/// one worker per available core.
pub fn map_jobs<T, R, F>(items: &[T], jobs: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if jobs == 1 || items.len() <= 1 {
        return Ok(map_sequential(items, f));
    }
    pooled(items, jobs, f)
}

#[cfg(feature = "parallel")]
fn pooled<T, R, F>(items: &[T], jobs: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(|| map_parallel(items, f)))
}

#[cfg(not(feature = "parallel"))]
fn pooled<T, R, F>(items: &[T], _jobs: usize, f: F) -> Result<Vec<R>>
where
    F: Fn(&T) -> R,
{
    Ok(map_sequential(items, f))
}

/// True when the crate was built with the rayon backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..100).collect();
        let sq = |x: &u64| x * x;
        let a = map_sequential(&items, sq);
        assert_eq!(map_parallel(&items, sq), a);
        for jobs in [0, 1, 3] {
            assert_eq!(map_jobs(&items, jobs, sq).unwrap(), a);
        }
    }
}
