//! Data-parallel loop helpers with a sequential fallback.
//!
//! Every parallel loop in the crate goes through this module, so the
//! `parallel` feature swaps rayon in and out in one place. Helpers return
//! per-index results in order; callers that need a scalar reduce the vector
//! sequentially, which keeps floating-point output bit-identical across
//! thread counts.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
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

/// Sequential twin of [`map_indexed`]. Always compiled; the bench suite uses
/// it to compare both execution paths in one binary.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Mutate disjoint fixed-size chunks (e.g. matrix rows) in parallel.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    debug_assert!(chunk > 0);
    #[cfg(feature = "parallel")]
    {
        data.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
    }
}

/// Sequential twin of [`for_each_chunk_mut`].
pub fn for_each_chunk_mut_seq<T, F>(data: &mut [T], chunk: usize, f: F)
where
    F: Fn(usize, &mut [T]),
{
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Sum a slice left to right. Deterministic regardless of thread count.
pub fn sum(values: &[f64]) -> f64 {
    values.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_matches_seq() {
        let a = map_indexed(100, |i| (i as f64).sqrt());
        let b = map_indexed_seq(100, |i| (i as f64).sqrt());
        assert_eq!(a, b);
    }

    #[test]
    fn chunk_mutation() {
        let mut data = vec![0.0; 12];
        for_each_chunk_mut(&mut data, 3, |i, c| c.iter_mut().for_each(|x| *x = i as f64));
        assert_eq!(data[0], 0.0);
        assert_eq!(data[11], 3.0);
    }
}
