//! Data-parallel helpers. With the `parallel` feature the loops fan out over
//! rayon once the slice is long enough to amortize scheduling; without it
//! everything runs on the calling thread.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many elements the sequential loop is faster than rayon.
pub const PAR_MIN_LEN: usize = 1 << 14;

/// Calls `f(chunk_index, chunk)` for every `size`-element chunk.
pub fn for_each_chunk<T, F>(data: &mut [T], size: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if data.len() >= PAR_MIN_LEN && data.len() / size >= 2 {
        data.par_chunks_mut(size).enumerate().for_each(|(i, c)| f(i, c));
        return;
    }
    data.chunks_mut(size).enumerate().for_each(|(i, c)| f(i, c));
}

/// Calls `f(index, element)` for every element.
pub fn for_each_indexed<T, F>(data: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if data.len() >= PAR_MIN_LEN {
        data.par_iter_mut().enumerate().for_each(|(i, x)| f(i, x));
        return;
    }
    data.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
}

/// Sum of `f(index, element)` over the slice.
pub fn sum_indexed<T, F>(data: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(usize, &T) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if data.len() >= PAR_MIN_LEN {
        return data.par_iter().enumerate().map(|(i, x)| f(i, x)).sum();
    }
    data.iter().enumerate().map(|(i, x)| f(i, x)).sum()
}

/// Order-preserving map over independent tasks (replications, sweep cells).
pub fn map_tasks<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}
