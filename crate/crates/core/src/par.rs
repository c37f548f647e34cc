//! Data-parallel helpers. With the `parallel` feature the slice iterator is
//! rayon's; without it, the standard one. Callers use the same adapter chain.

#[cfg(feature = "parallel")]
pub use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn parallelizable_slice_iter<T: Sync>(data: &[T]) -> rayon::slice::Iter<'_, T> {
    data.par_iter()
}

#[cfg(not(feature = "parallel"))]
pub fn parallelizable_slice_iter<T>(data: &[T]) -> std::slice::Iter<'_, T> {
    data.iter()
}

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "PFAFFLAB_THREADS";

/// Thread cap from `PFAFFLAB_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

/// Configures the global pool once; later calls are no-ops.
#[cfg(feature = "parallel")]
pub fn init_threads() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = thread_cap() {
            b = b.num_threads(n);
        }
        // another pool may already be installed (tests, benches)
        let _ = b.build_global();
    });
}

#[cfg(not(feature = "parallel"))]
pub fn init_threads() {}

/// Number of workers a parallel map will use.
pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Order-preserving map over a slice, parallel when the feature is on.
pub fn par_map<T, R, F>(data: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    parallelizable_slice_iter(data).map(f).collect()
}

/// Sequential order-preserving map, for comparisons against [`par_map`].
pub fn seq_map<T, R, F>(data: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    data.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let xs: Vec<u64> = (0..1000).collect();
        assert_eq!(par_map(&xs, |x| x * x), seq_map(&xs, |x| x * x));
    }
}
