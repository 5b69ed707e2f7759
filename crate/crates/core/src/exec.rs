//! Execution mode for the data-parallel inner loops.
//!
//! Every parallel helper preserves input order, so callers get identical
//! results from [`Exec::Sequential`] and [`Exec::Parallel`]. Without the
//! `parallel` feature the parallel mode silently runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// True when this mode will actually fan out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Ordered map over `0..n`.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Ordered map over a slice.
    pub fn map_slice<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Smallest `i < n` whose `f(i)` is `Some`, together with its value.
    /// The parallel mode returns the same element as the sequential scan.
    pub fn find_first<R, F>(self, n: usize, f: F) -> Option<(usize, R)>
    where
        R: Send,
        F: Fn(usize) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n)
                .into_par_iter()
                .filter_map(|i| f(i).map(|r| (i, r)))
                .find_first(|_| true);
        }
        (0..n).find_map(|i| f(i).map(|r| (i, r)))
    }

    /// `true` iff `f(i)` holds for every `i < n`.
    pub fn all<F>(self, n: usize, f: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().all(f);
        }
        (0..n).all(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for mode in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(mode.map_range(5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(mode.find_first(100, |i| (i % 7 == 3 && i > 20).then_some(i)), Some((24, 24)));
            assert!(mode.all(10, |i| i < 10));
            assert_eq!(mode.map_slice(&[1, 2, 3], |x| x + 1), vec![2, 3, 4]);
        }
    }
}
