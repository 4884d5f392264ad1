//! Parallel drivers over the core scans.
//!
//! Work is split into independent chunks and merged by the canonical sort, so
//! results do not depend on the number of worker threads.

use std::ops::Range;

use cubic_orders_core::order::{enumerate_fast, scan_range};
use cubic_orders_core::thue_mahler::{census_level, finish_census};
use cubic_orders_core::{
    find_primitive_solutions, is_monogenic_bounded, Census, CensusParams, Method, OrderTriple,
    PrimeContext, ScanLimits,
};
use num_traits::ToPrimitive;
use rayon::prelude::*;

/// Environment variable capping the worker count; `0` or unset means one
/// worker per core.
pub const THREADS_ENV: &str = "CUBIC_ORDERS_THREADS";

const CHUNK: u64 = 2048;

pub struct Workers {
    pool: rayon::ThreadPool,
}

impl Workers {
    pub fn new(threads: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to start worker threads");
        Workers { pool }
    }

    pub fn from_env() -> Result<Self, String> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => v
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))?,
            _ => 0,
        };
        Ok(Workers::new(threads))
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }

    /// Same result as [`cubic_orders_core::enumerate_orders`].
    pub fn enumerate(
        &self,
        ctx: &PrimeContext,
        n: u32,
        method: Method,
        limits: ScanLimits,
    ) -> cubic_orders_core::Result<Vec<OrderTriple>> {
        let Some(classify) = method.classifier() else {
            return Ok(enumerate_fast(ctx, n));
        };
        limits.check(ctx, n)?;
        let blocks = beta_blocks(ctx, n);
        let mut out: Vec<OrderTriple> = self.install(|| {
            blocks
                .into_par_iter()
                .flat_map_iter(|(i, betas)| scan_range(ctx, n, i, betas, classify))
                .collect()
        });
        out.sort();
        Ok(out)
    }

    /// Same result as [`cubic_orders_core::monogenic_census`].
    pub fn census(
        &self,
        ctx: &PrimeContext,
        params: &CensusParams,
    ) -> cubic_orders_core::Result<Census> {
        let mut levels = Vec::new();
        let mut b = 0;
        for n in 0..=params.n_max {
            let orders = enumerate_fast(ctx, n);
            let found = self.install(|| {
                orders
                    .par_iter()
                    .map(|t| {
                        Ok(is_monogenic_bounded(ctx, t, params.search_bound)?
                            .witness()
                            .map(|w| (t.clone(), w)))
                    })
                    .collect::<cubic_orders_core::Result<Vec<_>>>()
            })?;
            let level = census_level(
                ctx,
                n,
                orders.len(),
                found.into_iter().flatten().collect(),
                b,
            )?;
            b = level.cumulative_b;
            levels.push(level);
        }
        let box_solutions = find_primitive_solutions(ctx, params.tm_height, params.tm_n_max);
        finish_census(levels, box_solutions, params)
    }
}

/// `(i, β-range)` blocks covering every lattice of index `p^n`. The caller
/// has already checked that `p^n` fits in `u64`.
pub fn beta_blocks(ctx: &PrimeContext, n: u32) -> Vec<(u32, Range<u64>)> {
    let mut blocks = Vec::new();
    for i in 0..=n {
        let bound = ctx
            .pow(i)
            .to_u64()
            .expect("scan size checked by ScanLimits");
        let mut start = 0;
        while start < bound {
            let end = (start + CHUNK).min(bound);
            blocks.push((i, start..end));
            start = end;
        }
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use cubic_orders_core::{enumerate_orders, make_field, make_prime_context, monogenic_census};

    fn ctx(m: i64, p: u64) -> PrimeContext {
        make_prime_context(&make_field(m).unwrap(), p).unwrap()
    }

    #[test]
    fn parallel_enumeration_matches_sequential() {
        let limits = ScanLimits::default();
        for threads in [1, 3] {
            let w = Workers::new(threads);
            for (m, p) in [(2, 5), (6, 7), (12, 11)] {
                let c = ctx(m, p);
                for n in 0..=4 {
                    for method in Method::ALL {
                        assert_eq!(
                            w.enumerate(&c, n, method, limits).unwrap(),
                            enumerate_orders(&c, n, method, limits).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn parallel_census_matches_sequential() {
        let c = ctx(2, 5);
        let params = CensusParams {
            search_bound: 15,
            ..CensusParams::new(5)
        };
        assert_eq!(
            Workers::new(4).census(&c, &params).unwrap(),
            monogenic_census(&c, &params).unwrap()
        );
    }

    #[test]
    fn blocks_cover_every_beta() {
        let c = ctx(2, 11);
        let blocks = beta_blocks(&c, 4);
        for i in 0..=4u32 {
            let total: u64 = blocks
                .iter()
                .filter(|(bi, _)| *bi == i)
                .map(|(_, r)| r.end - r.start)
                .sum();
            assert_eq!(total, 11u64.pow(i));
        }
    }
}
