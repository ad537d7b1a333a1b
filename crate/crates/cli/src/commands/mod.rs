pub mod cache;
pub mod fracdiff;
pub mod solve;
pub mod validate;

use fracspec_core::fracderiv::assemble_ladder;
use fracspec_core::{AssemblyBudget, CacheKey, FracOpMatrix, OperatorCache};

use crate::error::Result;
use crate::Context;

/// Largest `N · 2^m` assembled without `--full-scale`.
pub const DESK_ASSEMBLY_WORK: u64 = 1 << 17;

pub fn budget(ctx: &Context) -> AssemblyBudget {
    if ctx.full_scale {
        AssemblyBudget::unlimited()
    } else {
        AssemblyBudget { max_work: DESK_ASSEMBLY_WORK }
    }
}

/// Loads the operator from the configured cache, building and storing it on
/// a miss, or assembles it in memory when no cache is configured.
pub fn operator(ctx: &Context, key: &CacheKey) -> Result<FracOpMatrix> {
    match &ctx.config.cache.dir {
        Some(dir) => Ok(OperatorCache::new(dir).with_budget(budget(ctx)).get_or_build(key)?),
        None => Ok(assemble_ladder(key.alpha, key.n, &key.levels, budget(ctx))?),
    }
}
