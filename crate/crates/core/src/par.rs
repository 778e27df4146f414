//! Data-parallel helpers. The heavy per-tridegree matrix work is
//! embarrassingly parallel; results are collected in input order so output
//! is bitwise identical with or without the `parallel` feature.
//!
//! `RSSS_THREADS` caps the rayon pool size without affecting output bytes.

#[cfg(feature = "parallel")]
fn init_pool() {
    use std::sync::Once;
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        if let Ok(n) = std::env::var("RSSS_THREADS") {
            if let Ok(n) = n.parse::<usize>() {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    });
}

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
pub fn map_indexed<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        init_pool();
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Sequential reference path, kept callable regardless of features so the
/// benchmark suite can compare both.
pub fn map_indexed_sequential<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
