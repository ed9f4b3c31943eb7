//! Data-parallel map over independent jobs.
//!
//! With the `parallel` feature the jobs run on a rayon pool whose size is
//! taken from `MAPF_THREADS` (all cores when unset). Without it, or with
//! [`Execution::Sequential`], they run in order on the calling thread.
//! Results always come back in input order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Worker count requested through `MAPF_THREADS`, if set to a positive number.
pub fn requested_threads() -> Option<usize> {
    std::env::var("MAPF_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

#[cfg(feature = "parallel")]
fn pool() -> &'static rayon::ThreadPool {
    use std::sync::OnceLock;
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(requested_threads().unwrap_or(0))
            .thread_name(|i| format!("mapf-worker-{i}"))
            .build()
            .expect("thread pool")
    })
}

pub fn par_map<T, R, F>(items: &[T], execution: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            pool().install(|| items.par_iter().map(&f).collect())
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_preserve_order() {
        let xs: Vec<u64> = (0..100).collect();
        let seq = par_map(&xs, Execution::Sequential, |x| x * x);
        let par = par_map(&xs, Execution::Parallel, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
    }
}
