//! Data-parallel mapping with a sequential fallback.
//!
//! Results always come back in input order, so reports do not depend on the mode.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// The parallel mode when the `parallel` feature is compiled in.
    pub fn available_parallel() -> Exec {
        if cfg!(feature = "parallel") { Exec::Parallel } else { Exec::Sequential }
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}
