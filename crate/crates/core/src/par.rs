//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers dispatch to rayon unless the
//! process-wide mode has been switched to [`Mode::Sequential`]. Without the
//! feature everything runs on the calling thread. Reductions are always
//! formed from fixed-size chunks combined left to right, so the floating-point
//! result is identical in both modes and for any thread count.

use std::sync::atomic::{AtomicBool, Ordering};

/// Chunk length used by the ordered reductions.
pub const REDUCE_CHUNK: usize = 4096;

static FORCE_SEQUENTIAL: AtomicBool = AtomicBool::new(false);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

/// Selects the execution mode for subsequent calls.
pub fn set_mode(mode: Mode) {
    FORCE_SEQUENTIAL.store(mode == Mode::Sequential, Ordering::SeqCst);
}

pub fn mode() -> Mode {
    if cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.load(Ordering::SeqCst) {
        Mode::Parallel
    } else {
        Mode::Sequential
    }
}

/// Evaluates `f(i)` for `i in 0..n`, preserving index order in the output.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Applies `f(chunk_index, chunk)` to consecutive chunks of `data`.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i, c));
        return;
    }
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Ordered sum of `f(i)` over `0..n`.
pub fn sum_range<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(REDUCE_CHUNK);
    let partials = map_range(chunks, |c| {
        let lo = c * REDUCE_CHUNK;
        let hi = (lo + REDUCE_CHUNK).min(n);
        (lo..hi).map(&f).sum::<f64>()
    });
    partials.into_iter().sum()
}

/// Ordered dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    sum_range(a.len(), |i| a[i] * b[i])
}

/// Maximum of `f(i)` over `0..n`; `None` when `n == 0`.
pub fn max_range<F>(n: usize, f: F) -> Option<f64>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(REDUCE_CHUNK);
    map_range(chunks, |c| {
        let lo = c * REDUCE_CHUNK;
        let hi = (lo + REDUCE_CHUNK).min(n);
        (lo..hi).map(&f).fold(f64::NEG_INFINITY, f64::max)
    })
    .into_iter()
    .reduce(f64::max)
}
