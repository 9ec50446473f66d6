use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Worker pool used by the parallel stages. With one thread no pool is
/// created and everything runs on the caller's thread.
pub struct Workers {
    threads: usize,
    pool: Option<ThreadPool>,
}

impl Workers {
    pub fn new(threads: usize) -> Self {
        let threads = threads.max(1);
        let pool = if threads > 1 {
            ThreadPoolBuilder::new()
                .num_threads(threads)
                .thread_name(|i| format!("jau-worker-{i}"))
                .build()
                .ok()
        } else {
            None
        };
        Self { threads, pool }
    }

    pub fn single() -> Self {
        Self::new(1)
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn is_parallel(&self) -> bool {
        self.pool.is_some()
    }

    /// Runs `op` inside the pool (or inline when single-threaded).
    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(op),
            None => op(),
        }
    }

    /// `(0..len).map(f)` collected positionally.
    pub fn map_indexed<R, F>(&self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match &self.pool {
            Some(pool) => pool.install(|| (0..len).into_par_iter().map(f).collect()),
            None => (0..len).map(f).collect(),
        }
    }

    /// Like [`Workers::map_indexed`] with per-worker scratch state built by `init`.
    pub fn map_indexed_with<S, R, I, F>(&self, len: usize, init: I, f: F) -> Vec<R>
    where
        R: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, usize) -> R + Sync + Send,
    {
        match &self.pool {
            Some(pool) => pool.install(|| (0..len).into_par_iter().map_init(&init, &f).collect()),
            None => {
                let mut state = init();
                (0..len).map(|i| f(&mut state, i)).collect()
            }
        }
    }

    /// Calls `f(index, chunk)` for consecutive `chunk`-sized pieces of `data`.
    pub fn for_each_chunk_mut<T, F>(&self, data: &mut [T], chunk: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        if chunk == 0 {
            return;
        }
        match &self.pool {
            Some(pool) => pool.install(|| {
                data.par_chunks_mut(chunk)
                    .enumerate()
                    .for_each(|(i, c)| f(i, c))
            }),
            None => data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c)),
        }
    }
}

impl std::fmt::Debug for Workers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Workers").field("threads", &self.threads).finish()
    }
}
