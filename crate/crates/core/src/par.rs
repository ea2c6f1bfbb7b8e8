// Row-parallel helpers. Partial results are always combined in row order by
// the caller, so the thread count never changes a floating-point sum.

use alloc::vec::Vec;

/// Evaluates `f(row)` for `row in 0..rows`, in parallel when enabled, and
/// returns the results in row order.
pub(crate) fn map_rows<T, F>(rows: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..rows).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..rows).map(f).collect()
    }
}

/// Fills `out` chunk by chunk (`chunk` elements per row) with `f(row, chunk)`.
pub(crate) fn fill_rows<T, F>(out: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        out.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(row, slice)| f(row, slice));
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (row, slice) in out.chunks_mut(chunk).enumerate() {
            f(row, slice);
        }
    }
}
