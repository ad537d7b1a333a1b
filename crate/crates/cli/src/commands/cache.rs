use std::path::PathBuf;

use fracspec_core::{CacheKey, OperatorCache};

use crate::config;
use crate::error::{CliError, Result};
use crate::output::num;
use crate::Context;

fn store(ctx: &Context) -> OperatorCache {
    let dir = ctx.config.cache.dir.clone().unwrap_or_else(|| PathBuf::from(".fracspec-cache"));
    OperatorCache::new(dir).with_budget(super::budget(ctx))
}

fn keys(ctx: &Context) -> Result<Vec<CacheKey>> {
    ctx.config
        .cache
        .keys
        .iter()
        .map(|k| {
            config::check_alpha(k.alpha)?;
            config::check_n(k.n)?;
            config::check_levels(&k.levels)?;
            Ok(CacheKey::new(k.alpha, k.n, k.levels.clone()))
        })
        .collect()
}

fn levels(key: &CacheKey) -> String {
    key.levels.iter().map(u32::to_string).collect::<Vec<_>>().join("-")
}

pub fn list(ctx: &Context) -> Result<()> {
    let cache = store(ctx);
    for e in cache.list()? {
        println!(
            "alpha={} n={} levels={} sha256={} {}",
            num(e.key.alpha),
            e.key.n,
            levels(&e.key),
            e.checksum_hex(),
            e.path.display()
        );
    }
    Ok(())
}

pub fn build(ctx: &Context) -> Result<()> {
    let cache = store(ctx);
    let keys = keys(ctx)?;
    if keys.is_empty() {
        return Err(CliError::Config("cache build needs [[cache.keys]] entries".into()));
    }
    for key in keys {
        let info = cache.store(&cache.build(&key)?)?;
        println!("built {key} sha256={} {}", info.checksum_hex(), info.path.display());
    }
    Ok(())
}

/// Removes the configured keys, or the whole store when none are given.
pub fn purge(ctx: &Context) -> Result<()> {
    let cache = store(ctx);
    let keys = keys(ctx)?;
    let removed = if keys.is_empty() {
        cache.purge(None)?
    } else {
        keys.iter().map(|k| cache.purge(Some(k))).sum::<fracspec_core::Result<usize>>()?
    };
    println!("removed {removed} entries from {}", cache.dir().display());
    Ok(())
}
