//! Data-parallel helpers.
//!
//! With the `parallel` feature (the default) these run on rayon's pool;
//! without it they are plain iterator loops. Results always come back in
//! input order, so callers stay deterministic either way. The [`seq`]
//! module is always sequential and exists mainly for benchmarks.

pub mod seq {
    pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        (0..n).map(f).collect()
    }

    pub fn flat_map_range<R, F>(n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> Vec<R> + Sync + Send,
    {
        (0..n).flat_map(f).collect()
    }

    pub fn any_range<F>(n: usize, f: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        (0..n).any(f)
    }
}

#[cfg(feature = "parallel")]
pub mod parallel {
    use rayon::prelude::*;

    pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.par_iter().map(f).collect()
    }

    pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        (0..n).into_par_iter().map(f).collect()
    }

    pub fn flat_map_range<R, F>(n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> Vec<R> + Sync + Send,
    {
        (0..n).into_par_iter().flat_map_iter(f).collect()
    }

    pub fn any_range<F>(n: usize, f: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        (0..n).into_par_iter().any(f)
    }
}

#[cfg(feature = "parallel")]
pub use parallel::*;
#[cfg(not(feature = "parallel"))]
pub use seq::*;

#[cfg(test)]
mod tests {
    #[test]
    fn order_is_preserved() {
        let v: Vec<usize> = (0..1000).collect();
        assert_eq!(super::map(&v, |x| x * 2), super::seq::map(&v, |x| x * 2));
        assert_eq!(
            super::flat_map_range(50, |i| vec![i; i % 3]),
            super::seq::flat_map_range(50, |i| vec![i; i % 3])
        );
    }
}
