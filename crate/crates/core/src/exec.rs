//! Sequential / data-parallel execution of the scan loops.
//!
//! Every helper returns the same value in both modes: searches report the
//! first match in input order, maps preserve order. With the `parallel`
//! feature disabled, [`Exec::Parallel`] silently runs sequentially.

use std::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

thread_local! {
    static CURRENT: Cell<Option<Exec>> = const { Cell::new(None) };
}

impl Exec {
    /// Mode in effect on this thread.
    pub fn current() -> Exec {
        CURRENT.with(|c| c.get()).unwrap_or_default()
    }

    #[cfg(feature = "parallel")]
    fn parallel_enabled() -> bool {
        cfg!(feature = "parallel") && Exec::current() == Exec::Parallel
    }
}

/// Runs `f` with `mode` in effect on the calling thread.
///
/// Sequential mode is inherited by everything `f` calls, since no work
/// leaves the thread.
pub fn scoped<R>(mode: Exec, f: impl FnOnce() -> R) -> R {
    let prev = CURRENT.with(|c| c.replace(Some(mode)));
    struct Restore(Option<Exec>);
    impl Drop for Restore {
        fn drop(&mut self) {
            CURRENT.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(prev);
    f()
}

/// Sizes the global worker pool. Must run before any parallel work;
/// a no-op without the `parallel` feature.
pub fn configure_threads(threads: usize) -> Result<(), String> {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(())
    }
}

/// First `Some` in index order.
pub fn find_map_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if Exec::parallel_enabled() {
        use rayon::prelude::*;
        return items.par_iter().find_map_first(f);
    }
    items.iter().find_map(f)
}

/// First `Some` over `0..len` in index order.
pub fn find_map_first_index<R, F>(len: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if Exec::parallel_enabled() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().find_map_first(f);
    }
    (0..len).find_map(f)
}

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if Exec::parallel_enabled() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

pub fn map_index<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if Exec::parallel_enabled() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    (0..len).map(f).collect()
}

pub fn all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    find_map_first(items, |t| if f(t) { None } else { Some(()) }).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_on_first_match() {
        let v: Vec<u32> = (0..10_000).collect();
        let pick = |x: &u32| (x % 977 == 500).then_some(*x);
        let seq = scoped(Exec::Sequential, || find_map_first(&v, pick));
        let par = scoped(Exec::Parallel, || find_map_first(&v, pick));
        assert_eq!(seq, Some(500));
        assert_eq!(seq, par);
        let m1 = scoped(Exec::Sequential, || map_index(100, |i| i * i));
        let m2 = scoped(Exec::Parallel, || map_index(100, |i| i * i));
        assert_eq!(m1, m2);
    }

    #[test]
    fn scope_restores_previous_mode() {
        assert_eq!(Exec::current(), Exec::Parallel);
        scoped(Exec::Sequential, || {
            assert_eq!(Exec::current(), Exec::Sequential);
            scoped(Exec::Parallel, || assert_eq!(Exec::current(), Exec::Parallel));
            assert_eq!(Exec::current(), Exec::Sequential);
        });
        assert_eq!(Exec::current(), Exec::Parallel);
    }
}
