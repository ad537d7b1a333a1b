use fracspec_core::oracles::FunctionId;
use fracspec_core::validation::{alpha_grid, error_curves, ErrorCurves, ErrorTable, Experiment, RowFamily};

use crate::config::TableKind;
use crate::error::{CliError, Result};
use crate::output::{ensure_dir, num, Table};
use crate::Context;

/// Largest `points · N · 2^m` swept without `--full-scale`.
pub const DESK_SWEEP_WORK: u64 = 1 << 21;

const SMOOTH: [FunctionId; 3] = [FunctionId::V1, FunctionId::V2, FunctionId::V3];
const REGULARITY: [FunctionId; 4] = [FunctionId::V4, FunctionId::V5, FunctionId::V6, FunctionId::V7];

fn check_sweep(ctx: &Context, id: FunctionId, points: usize) -> Result<()> {
    let exp = Experiment::recommended(id);
    let work = (points as u64).saturating_mul(exp.n as u64) << exp.max_level;
    if !ctx.full_scale && work > DESK_SWEEP_WORK {
        return Err(CliError::Budget(format!(
            "{id}: {points} alpha values x N = {} x 2^{} = {work} exceeds {DESK_SWEEP_WORK}",
            exp.n, exp.max_level
        )));
    }
    Ok(())
}

fn curves(ids: &[FunctionId], alphas: &[f64]) -> Result<Vec<ErrorCurves>> {
    ids.iter().map(|&id| Ok(error_curves(Experiment::recommended(id), alphas)?)).collect()
}

fn write_table(ctx: &Context, file: &str, table: &ErrorTable) -> Result<()> {
    let mut header = vec!["levels"];
    header.extend(table.columns.iter().map(String::as_str));
    let mut out = Table::create(&ctx.out, file, &header)?;
    for (row, values) in table.rows.iter().zip(&table.values) {
        let mut fields = vec![row.label()];
        fields.extend(values.iter().map(|&v| num(v)));
        out.row(fields)?;
    }
    println!("wrote {}", out.finish()?.display());
    Ok(())
}

/// `log₂(E(coarse)/E(fine))` per α for consecutive rows of one family.
fn write_rates(ctx: &Context, file: &str, family: RowFamily, curves: &[ErrorCurves]) -> Result<()> {
    let rows = family.rows();
    let mut header = vec!["alpha".to_string()];
    let mut columns = Vec::new();
    for c in curves {
        for pair in rows.windows(2) {
            header.push(format!("{} {}/{}", c.experiment.function, pair[0].label(), pair[1].label()));
            columns.push(c.rate_curve(pair[0], pair[1]).expect("rows are computed"));
        }
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = Table::create(&ctx.out, file, &header)?;
    for (i, &alpha) in curves[0].alphas.iter().enumerate() {
        let mut fields = vec![num(alpha)];
        fields.extend(columns.iter().map(|c| num(c[i])));
        out.row(fields)?;
    }
    println!("wrote {}", out.finish()?.display());
    Ok(())
}

pub fn run(ctx: &Context) -> Result<()> {
    let cfg = &ctx.config.validate;
    let default_points = if ctx.full_scale { 1001 } else { 101 };
    let points = ctx.alpha_grid.or(cfg.alpha_points).unwrap_or(default_points);
    if points < 2 {
        return Err(CliError::Config(format!("alpha grid needs at least 2 points, got {points}")));
    }
    let alphas = alpha_grid(points);
    let wants = |k: TableKind| cfg.tables.contains(&k);
    let smooth_tables = [TableKind::Single, TableKind::Pairs, TableKind::Triples, TableKind::Higher];
    let need_smooth = smooth_tables.iter().any(|&k| wants(k));

    if need_smooth {
        for id in SMOOTH {
            check_sweep(ctx, id, points)?;
        }
    }
    if wants(TableKind::V8) {
        check_sweep(ctx, FunctionId::V8, points)?;
    }
    ensure_dir(&ctx.out)?;

    if need_smooth {
        let smooth = curves(&SMOOTH, &alphas)?;
        let families = [
            (TableKind::Single, RowFamily::Single, "single"),
            (TableKind::Pairs, RowFamily::Pairs, "pairs"),
            (TableKind::Triples, RowFamily::Triples, "triples"),
            (TableKind::Higher, RowFamily::Higher, "higher"),
        ];
        for (kind, family, name) in families {
            if !wants(kind) {
                continue;
            }
            let table = ErrorTable::from_curves(name, family, &smooth)?;
            write_table(ctx, &format!("table_{name}.csv"), &table)?;
            if kind != TableKind::Higher {
                write_rates(ctx, &format!("rates_{name}.csv"), family, &smooth)?;
            }
        }
    }
    if wants(TableKind::Regularity) {
        let endpoints = curves(&REGULARITY, &[0.0, 1.0])?;
        let table = ErrorTable::per_alpha("regularity", RowFamily::Prefixes, &endpoints)?;
        write_table(ctx, "table_regularity.csv", &table)?;
    }
    if wants(TableKind::V8) {
        let v8 = curves(&[FunctionId::V8], &alphas)?;
        let table = ErrorTable::from_curves("v8", RowFamily::Prefixes, &v8)?;
        write_table(ctx, "table_v8.csv", &table)?;
    }
    println!("alpha grid: {points} points");
    Ok(())
}
