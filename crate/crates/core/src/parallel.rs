//! Worker-pool sizing for the enumeration kernels.
//!
//! Results never depend on the worker count: callers reduce per-task
//! results in task order with exact arithmetic.

/// Number of worker threads a computation may use. `threads == 1` runs
/// on the calling thread.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parallelism {
    pub threads: usize,
}

impl Parallelism {
    pub fn sequential() -> Self {
        Parallelism { threads: 1 }
    }

    pub fn new(threads: usize) -> Self {
        Parallelism {
            threads: threads.max(1),
        }
    }

    /// One worker per available core.
    pub fn available() -> Self {
        Self::new(std::thread::available_parallelism().map_or(1, usize::from))
    }

    /// Applies `f` to every task and returns the results in task order.
    pub fn map<T, R, F>(&self, tasks: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.threads > 1 {
            use rayon::prelude::*;
            if let Ok(pool) = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
            {
                return pool.install(|| tasks.into_par_iter().map(&f).collect());
            }
        }
        tasks.into_iter().map(f).collect()
    }
}

impl Default for Parallelism {
    fn default() -> Self {
        Self::available()
    }
}
