//! Data-parallel map used by the enumeration and the pairwise counts. Without the
//! `parallel` feature every call runs sequentially.

/// Execution strategy for a batch of independent jobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Worker pool; `0` threads lets the pool decide.
    Parallel(usize),
}

impl Exec {
    pub fn from_jobs(jobs: usize) -> Self {
        if cfg!(feature = "parallel") && jobs != 1 {
            Exec::Parallel(jobs)
        } else {
            Exec::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<I, T, F>(exec: Exec, items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    match exec {
        Exec::Sequential => items.into_iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel(n) => {
            use rayon::prelude::*;
            let run = || items.into_par_iter().map(&f).collect();
            if n == 0 {
                run()
            } else {
                match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                    Ok(pool) => pool.install(run),
                    Err(_) => run(),
                }
            }
        }
        #[cfg(not(feature = "parallel"))]
        Exec::Parallel(_) => items.into_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v: Vec<u64> = (0..1000).collect();
        let seq = map(Exec::Sequential, v.clone(), |x| x * x);
        let par = map(Exec::Parallel(3), v, |x| x * x);
        assert_eq!(seq, par);
    }
}
