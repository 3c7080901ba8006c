//! Execution policy for the data-parallel kernels.
//!
//! Every exhaustive loop in the crate goes through these helpers. With the
//! `parallel` feature the `Parallel` policy runs on the current rayon pool;
//! without it both policies run sequentially. Results are always collected
//! in index order, so output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How an exhaustive kernel distributes its work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this build can actually run in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// Map `f` over `0..len`, keeping output in index order.
    pub fn map_range<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().map(f).collect(),
            _ => (0..len).map(f).collect(),
        }
    }

    /// Indices in `0..len` (as u64) for which `keep` holds, ascending.
    pub fn filter_range<F>(self, len: u64, keep: F) -> Vec<u64>
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().filter(|&i| keep(i)).collect(),
            _ => (0..len).filter(|&i| keep(i)).collect(),
        }
    }

    /// Map over a slice, keeping output order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// True iff `pred` holds on every index in `0..len`.
    pub fn all_range<F>(self, len: usize, pred: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().all(pred),
            _ => (0..len).all(pred),
        }
    }
}

/// Run `f` on a pool with `jobs` threads (0 = rayon default).
///
/// Without the `parallel` feature this just calls `f`.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        if jobs == 0 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        f()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let a = Exec::Sequential.map_range(1000, |i| i * i % 7);
        let b = Exec::Parallel.map_range(1000, |i| i * i % 7);
        assert_eq!(a, b);
        let a = Exec::Sequential.filter_range(5000, |i| i % 13 == 3);
        let b = Exec::Parallel.filter_range(5000, |i| i % 13 == 3);
        assert_eq!(a, b);
        assert!(Exec::Parallel.all_range(100, |i| i < 100));
        assert!(!Exec::Sequential.all_range(100, |i| i < 99));
    }
}
