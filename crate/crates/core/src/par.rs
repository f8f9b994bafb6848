//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature these run on the current rayon pool; without
//! it they are plain iterator loops. Results never depend on scheduling:
//! searches return the lowest matching index and maps preserve order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `"parallel"` or `"sequential"`, depending on how the crate was built.
pub fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

/// Number of worker threads scans will use.
pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Run `f` inside a pool of `threads` workers (ignored when sequential).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

pub fn map_range<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Lowest index whose item satisfies `f`.
pub fn position_first<T, F>(items: &[T], f: F) -> Option<usize>
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().position_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().position(f)
    }
}

/// Lowest `i < len` with `f(i)`.
pub fn find_first_index<F>(len: usize, f: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().find_first(|&i| f(i))
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).find(|&i| f(i))
    }
}

pub fn all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().all(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().all(f)
    }
}

pub fn all_range<F>(len: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().all(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).all(f)
    }
}

/// Sum of `f(i)` over `0..len`.
pub fn sum_range<F>(len: usize, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn searches_return_lowest_index() {
        let v: Vec<u32> = (0..1000).collect();
        assert_eq!(position_first(&v, |&x| x % 97 == 96), Some(96));
        assert_eq!(find_first_index(1000, |i| i > 10 && i % 7 == 0), Some(14));
        assert_eq!(find_first_index(10, |_| false), None);
    }

    #[test]
    fn maps_preserve_order() {
        let v = map_range(100, |i| i * i);
        assert_eq!(v[7], 49);
        let w = with_threads(1, || map(&v, |x| x + 1));
        assert_eq!(w[7], 50);
        assert_eq!(sum_range(4, |i| i as u64), 6);
    }
}
