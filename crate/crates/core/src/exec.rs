//! Data-parallel evaluation of independent samples.
//!
//! With the `parallel` feature the work is spread over the rayon pool;
//! without it `ExecMode::Parallel` quietly runs sequentially.

/// How to evaluate a batch of independent samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// True when batches actually run on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// `(0..n).map(f).collect()`, possibly in parallel. Output order is always
/// index order.
pub fn map_indexed<T, F>(mode: ExecMode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| (i as f64).sin();
        assert_eq!(
            map_indexed(ExecMode::Sequential, 1000, f),
            map_indexed(ExecMode::Parallel, 1000, f)
        );
    }
}
