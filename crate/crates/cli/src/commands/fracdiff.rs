use rayon::prelude::*;

use fracspec_core::oracles::TestFunction;
use fracspec_core::validation::alpha_grid;
use fracspec_core::{CacheKey, FourierTransform, SpectralGrid};

use crate::config::{self, FracdiffConfig};
use crate::error::{CliError, Result};
use crate::output::{ensure_dir, num, Table};
use crate::Context;

enum Source {
    Function(TestFunction),
    /// Values at the physical nodes.
    Samples(Vec<f64>),
}

fn read_samples(cfg: &FracdiffConfig, path: &std::path::Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::Reader::from_path(path).map_err(CliError::csv(path))?;
    let headers = reader.headers().map_err(CliError::csv(path))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::Config(format!("{}: missing column '{name}'", path.display())))
    };
    let (cx, cv) = (col("x")?, col("v")?);
    let (mut xs, mut vs) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(CliError::csv(path))?;
        let parse = |c: usize| {
            record.get(c).and_then(|s| s.trim().parse::<f64>().ok()).ok_or_else(|| {
                CliError::Config(format!("{}: row {}: bad number", path.display(), i + 1))
            })
        };
        xs.push(parse(cx)?);
        vs.push(parse(cv)?);
    }
    if let Some(n) = cfg.n {
        if n != vs.len() {
            return Err(CliError::Config(format!("{}: {} rows, config says N = {n}", path.display(), vs.len())));
        }
    }
    Ok((xs, vs))
}

pub fn run(ctx: &Context) -> Result<()> {
    let cfg = &ctx.config.fracdiff;
    config::check_levels(&cfg.levels)?;
    let (source, name, n, scale) = match (&cfg.function, &cfg.samples) {
        (Some(f), None) => {
            let f = TestFunction::get(config::function(f)?);
            let n = cfg.n.unwrap_or(f.recommended_n);
            let l = cfg.l.unwrap_or(f.recommended_l);
            (Source::Function(f), f.id.name().to_string(), n, l)
        }
        (None, Some(path)) => {
            let l = cfg.l.ok_or_else(|| CliError::Config("sample input needs an explicit l".into()))?;
            let (xs, vs) = read_samples(cfg, path)?;
            config::check_n(vs.len())?;
            let grid = SpectralGrid::new(vs.len(), l)?;
            for (j, (x, node)) in xs.iter().zip(grid.x_nodes()).enumerate() {
                if (x - node).abs() > 1e-9 * node.abs().max(1.0) {
                    return Err(CliError::Config(format!(
                        "{}: row {} has x = {x}, node {j} is at {node}",
                        path.display(),
                        j + 1
                    )));
                }
            }
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("samples").to_string();
            let n = vs.len();
            (Source::Samples(vs), stem, n, l)
        }
        _ => return Err(CliError::Config("[fracdiff] needs exactly one of 'function' or 'samples'".into())),
    };
    config::check_n(n)?;
    config::check_positive("l", scale)?;

    let alphas = match ctx.alpha_grid.or(cfg.alpha_grid) {
        Some(points) if points >= 1 => alpha_grid(points),
        Some(_) => return Err(CliError::Config("alpha grid needs at least one point".into())),
        None => cfg.alphas.clone(),
    };
    if alphas.is_empty() {
        return Err(CliError::Config("no alpha values given".into()));
    }
    for &a in &alphas {
        config::check_alpha(a)?;
    }

    let grid = SpectralGrid::new(n, scale)?;
    let samples = match &source {
        Source::Function(f) => grid.sample_even_extension(f.v)?,
        Source::Samples(vs) => vs.iter().chain(vs.iter().rev()).copied().collect(),
    };
    let field = FourierTransform::new(n)?.with_cleaning(cfg.cleaning.policy()?).forward_real(&samples)?;

    let results: Vec<(Vec<f64>, Option<Vec<f64>>)> = alphas
        .par_iter()
        .map(|&alpha| -> Result<_> {
            let op = super::operator(ctx, &CacheKey::new(alpha, n, cfg.levels.clone()))?;
            let mut values = op.apply_real(&field, scale)?;
            values.truncate(n);
            let exact = match &source {
                Source::Function(f) => grid.x_nodes()[..n]
                    .iter()
                    .map(|&x| f.exact(x, alpha).transpose())
                    .collect::<fracspec_core::Result<Option<Vec<f64>>>>()?,
                Source::Samples(_) => None,
            };
            Ok((values, exact))
        })
        .collect::<Result<_>>()?;

    ensure_dir(&ctx.out)?;
    let mut table = Table::create(&ctx.out, &format!("fracdiff_{name}.csv"), &["alpha", "x", "numerical", "exact", "abs_error"])?;
    for (&alpha, (values, exact)) in alphas.iter().zip(&results) {
        let mut worst: f64 = 0.0;
        for (j, (&x, &v)) in grid.x_nodes().iter().zip(values).enumerate() {
            let (e, err) = match exact {
                Some(e) => {
                    let err = (v - e[j]).abs();
                    worst = worst.max(err);
                    (num(e[j]), num(err))
                }
                None => (String::new(), String::new()),
            };
            table.row([num(alpha), num(x), num(v), e, err])?;
        }
        match exact {
            Some(_) => println!("{name} alpha={} max_error={}", num(alpha), num(worst)),
            None => {
                let peak = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
                println!("{name} alpha={} max_abs={}", num(alpha), num(peak));
            }
        }
    }
    let path = table.finish()?;
    println!("wrote {}", path.display());
    Ok(())
}
