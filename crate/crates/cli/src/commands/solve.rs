use std::sync::Arc;

use fracspec_core::evolve::{front_speed, wave_diagnostics, EvolutionParams, Evolver, WaveDiagnostics};
use fracspec_core::fracderiv::write_coefficients;
use fracspec_core::oracles::TestFunction;
use fracspec_core::{CacheKey, Error as CoreError};

use crate::config;
use crate::error::{CliError, Result};
use crate::output::{ensure_dir, num, Table};
use crate::Context;

/// Largest number of time steps taken without `--full-scale`.
pub const DESK_STEPS: usize = 1_000_000;

struct Snapshot {
    step: usize,
    values: Vec<f64>,
    diagnostics: Option<WaveDiagnostics>,
}

pub fn run(ctx: &Context) -> Result<()> {
    let cfg = &ctx.config.solve;
    config::check_alpha(cfg.alpha)?;
    config::check_n(cfg.n)?;
    config::check_positive("tau", cfg.tau)?;
    config::check_positive("l", cfg.l)?;
    config::check_positive("dt", cfg.dt)?;
    config::check_levels(&cfg.levels)?;
    if !(cfg.t_end >= 0.0 && cfg.t_end.is_finite()) {
        return Err(CliError::Config(format!("t_end must be >= 0, got {}", cfg.t_end)));
    }
    if cfg.stride == 0 {
        return Err(CliError::Config("stride must be >= 1".into()));
    }
    let datum = TestFunction::get(config::function(&cfg.datum)?);

    let mut params = EvolutionParams::new(cfg.alpha, cfg.tau, cfg.dt, cfg.l);
    params.dealias = cfg.dealias;
    params.cleaning = cfg.cleaning.policy()?;
    // Budget refusals come before any assembly work.
    super::budget(ctx).check(cfg.n, *cfg.levels.last().unwrap())?;
    let key = CacheKey::new(cfg.alpha, cfg.n, cfg.levels.clone());
    let op = Arc::new(super::operator(ctx, &key)?);
    let ev = Evolver::new(params, op)?;
    let total = ev.steps_to(cfg.t_end)?;
    if !ctx.full_scale && total > DESK_STEPS {
        return Err(CliError::Budget(format!("{total} time steps exceeds {DESK_STEPS}")));
    }

    let mut snaps = Vec::new();
    let end = ev.run(ev.initial_field(datum.v)?, cfg.t_end, |step, field| {
        if step % cfg.stride == 0 || step == total {
            let diagnostics = match wave_diagnostics(field, cfg.l, cfg.front_level) {
                Ok(d) => Some(d),
                Err(CoreError::NoCrossing(_)) => None,
                Err(e) => return Err(e),
            };
            snaps.push(Snapshot { step, values: ev.physical_values(field)?, diagnostics });
        }
        Ok(())
    })?;

    ensure_dir(&ctx.out)?;
    let mut profile = Table::create(&ctx.out, "snapshots.csv", &["t", "x", "v"])?;
    let mut diag = Table::create(
        &ctx.out,
        "diagnostics.csv",
        &["step", "t", "position", "speed", "overshoot", "undershoot"],
    )?;
    let nodes = &ev.grid().x_nodes()[..cfg.n];
    let mut last: Option<(f64, f64)> = None;
    for snap in &snaps {
        let t = snap.step as f64 * cfg.dt;
        for (&x, &v) in nodes.iter().zip(&snap.values) {
            profile.row([num(t), num(x), num(v)])?;
        }
        let row = match snap.diagnostics {
            Some(d) => {
                let speed = last.map(|p| num(front_speed(p, (t, d.position)))).unwrap_or_default();
                last = Some((t, d.position));
                [snap.step.to_string(), num(t), num(d.position), speed, num(d.overshoot), num(d.undershoot)]
            }
            None => [snap.step.to_string(), num(t), String::new(), String::new(), String::new(), String::new()],
        };
        diag.row(row)?;
    }
    println!("wrote {}", profile.finish()?.display());
    println!("wrote {}", diag.finish()?.display());
    if cfg.dump_coefficients {
        let path = ctx.out.join("final.fop");
        write_coefficients(&path, &end, cfg.alpha, &cfg.levels)?;
        println!("wrote {}", path.display());
    }
    if let Some(s) = snaps.last().and_then(|s| s.diagnostics) {
        println!("t={} front={} overshoot={}", num(total as f64 * cfg.dt), num(s.position), num(s.overshoot));
    }
    Ok(())
}
