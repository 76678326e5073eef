//! Deterministic execution helpers shared by the parallel and sequential
//! builds.
//!
//! Every data-parallel loop in the crate goes through one of these functions.
//! Work is split into fixed index chunks whose boundaries depend only on the
//! problem size, each chunk is processed in ascending index order, and chunk
//! results are combined in ascending chunk order. Because none of that
//! depends on thread count or schedule, builds with and without the
//! `parallel` feature produce bit-identical floating-point results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk width for range-partitioned reductions. Large enough to amortize
/// scheduling, small enough to balance skewed per-node work (hub nodes).
const CHUNK: usize = 2048;

/// Map `f` over `0..n`, returning results in index order.
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Apply `f` to each fixed-size chunk of `0..n` and return the per-chunk
/// results in chunk order. Callers fold the returned partials sequentially,
/// which keeps reductions associative-order-stable.
pub(crate) fn map_chunks<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    let ranges: Vec<std::ops::Range<usize>> = (0..n)
        .step_by(CHUNK.max(1))
        .map(|start| start..(start + CHUNK).min(n))
        .collect();
    #[cfg(feature = "parallel")]
    {
        ranges.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ranges.into_iter().map(f).collect()
    }
}

/// Run `f(row_index, row)` over consecutive `row_len`-sized rows of `buf`.
/// Each row is written by exactly one task, so the result is independent of
/// the schedule.
pub(crate) fn for_each_row_mut<T, F>(buf: &mut [T], row_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    debug_assert!(row_len > 0 && buf.len() % row_len == 0);
    #[cfg(feature = "parallel")]
    {
        buf.par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
    }
    #[cfg(not(feature = "parallel"))]
    {
        buf.chunks_mut(row_len).enumerate().for_each(|(i, row)| f(i, row));
    }
}
