//! Data-parallel helpers. With the `parallel` feature the work is spread over
//! the rayon pool; without it, or with `Mode::Sequential`, it runs in order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Auto,
    Sequential,
}

impl Mode {
    fn parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Mode::Auto
    }
}

/// Map `f` over `0..n`, preserving order.
pub fn map_range<T, F>(mode: Mode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode.parallel();
    (0..n).map(f).collect()
}

/// Map `f` over a slice, preserving order.
pub fn map_slice<S, T, F>(mode: Mode, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode.parallel();
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let a = map_range(Mode::Auto, 100, |i| i * i);
        let b = map_range(Mode::Sequential, 100, |i| i * i);
        assert_eq!(a, b);
        let c = map_slice(Mode::Auto, &a, |x| x + 1);
        assert_eq!(c[3], 10);
    }
}
