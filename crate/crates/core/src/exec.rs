//! Execution policy for grid-shaped work.
//!
//! With the `parallel` feature enabled the [`Execution::Parallel`] policy
//! fans work out over the rayon pool. Without it, both policies run on the
//! calling thread. Results are bit-identical between the two policies:
//! every parallel map preserves index order and reductions are performed
//! sequentially over fixed-size chunks.

/// How to schedule independent per-point work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Order-preserving map over `0..len`.
    pub(crate) fn map_range<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }

    /// Order-preserving map over a slice.
    pub(crate) fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Maps fixed-size chunks of `items`, returning per-chunk results in order.
    pub(crate) fn map_chunks<S, T, F>(self, items: &[S], chunk: usize, f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(usize, &[S]) -> T + Sync + Send,
    {
        let chunk = chunk.max(1);
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items
                    .par_chunks(chunk)
                    .enumerate()
                    .map(|(i, c)| f(i * chunk, c))
                    .collect()
            }
            _ => items
                .chunks(chunk)
                .enumerate()
                .map(|(i, c)| f(i * chunk, c))
                .collect(),
        }
    }
}
