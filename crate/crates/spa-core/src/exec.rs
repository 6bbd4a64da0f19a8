//! Execution strategy for the embarrassingly parallel scan loops.
//!
//! With the `parallel` feature (default) the maps run on the rayon pool;
//! without it they run sequentially with identical results. `map_seq` is
//! always sequential and exists so benchmarks can compare both paths in one
//! build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
/// Output order always matches input order.
pub fn map<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential map, regardless of enabled features.
pub fn map_seq<T, U, F: Fn(&T) -> U>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn parallel_and_sequential_agree() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.01).collect();
        let a = super::map(&xs, |x| (x * 1.7).sin() * x.exp());
        let b = super::map_seq(&xs, |x| (x * 1.7).sin() * x.exp());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
