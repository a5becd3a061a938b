//! Parallel/sequential dispatch. With the `parallel` feature (default) the
//! batch helpers fan out on the rayon pool; without it they run the same
//! closures sequentially. Results never depend on the schedule: callers
//! only combine values with commutative, associative, exact operations or
//! collect into order-preserving vectors.

/// Maps `items` and collects results in input order.
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Always-sequential twin of [`map_collect`], kept callable in parallel
/// builds so benches can compare both code paths.
pub fn map_collect_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Folds mapped items into an accumulator with an associative,
/// commutative merge.
pub fn map_reduce<T, A, MF, FF, RF>(items: Vec<T>, make_acc: MF, fold: FF, reduce: RF) -> A
where
    T: Send,
    A: Send,
    MF: Fn() -> A + Sync + Send,
    FF: Fn(A, T) -> A + Sync + Send,
    RF: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().fold(&make_acc, &fold).reduce(&make_acc, &reduce)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &reduce;
        items.into_iter().fold(make_acc(), fold)
    }
}

/// Always-sequential twin of [`map_reduce`].
pub fn map_reduce_seq<T, A, MF, FF>(items: Vec<T>, make_acc: MF, fold: FF) -> A
where
    MF: Fn() -> A,
    FF: Fn(A, T) -> A,
{
    items.into_iter().fold(make_acc(), fold)
}
