//! Data-parallel helpers for the exhaustive sweeps. Without the `parallel`
//! feature everything runs on the calling thread.

/// How a sweep distributes its cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `threads: None` uses rayon's global pool.
    Parallel { threads: Option<usize> },
}

impl Default for Execution {
    fn default() -> Self {
        Execution::Parallel { threads: None }
    }
}

impl Execution {
    /// Reads `DUALITY_THREADS`: `1` means sequential, `k > 1` caps the pool at
    /// k threads, anything else (or unset) uses the default pool.
    pub fn from_env() -> Self {
        match std::env::var("DUALITY_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(1) => Execution::Sequential,
            Some(k) if k > 1 => Execution::Parallel { threads: Some(k) },
            _ => Execution::default(),
        }
    }

    /// `f(i)` for `i in 0..n`, keeping the `Some` results in index order.
    pub fn filter_map<R, F>(self, n: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> Option<R> + Send + Sync,
    {
        match self {
            Execution::Sequential => (0..n).filter_map(f).collect(),
            Execution::Parallel { threads } => parallel_filter_map(threads, n, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_filter_map<R, F>(threads: Option<usize>, n: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Send + Sync,
{
    use rayon::prelude::*;
    let run = || (0..n).into_par_iter().filter_map(&f).collect();
    match threads {
        None => run(),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_filter_map<R, F>(_threads: Option<usize>, n: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Send + Sync,
{
    (0..n).filter_map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: u64| (i % 7 == 3).then_some(i * i);
        let seq = Execution::Sequential.filter_map(1000, f);
        assert_eq!(seq, Execution::default().filter_map(1000, f));
        assert_eq!(seq, Execution::Parallel { threads: Some(2) }.filter_map(1000, f));
        assert_eq!(seq.len(), 143);
        assert!(Execution::Sequential.filter_map(0, f).is_empty());
    }
}
