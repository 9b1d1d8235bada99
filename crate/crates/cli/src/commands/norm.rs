use super::{extrapolate, f, fit_cells, hash, CliError, CliResult, Ctx, FIT_HEADER};
use crate::config::NormFluctConfig;
use rbment::ensemble::{
    norm_fluctuation_statistic, run_sweep, Quantity, SweepConfig, DEFAULT_BUDGET,
};
use rbment::output::CsvTable;
use rbment::rbm::{average_norm_squared_analytic, DEFAULT_MAX_SPINS};
use rbment::statmech::{z0_log_average, ModelParams};
use std::path::PathBuf;

pub fn run(ctx: &Ctx, mut cfg: NormFluctConfig) -> CliResult<Vec<PathBuf>> {
    cfg.seed = ctx.seed(cfg.seed);
    if cfg.samples < 2 {
        return Err(CliError::Config("samples must be at least 2".into()));
    }
    let sweep = SweepConfig {
        n: cfg.n.clone(),
        m: None,
        lambda: Some(cfg.lambda.clone()),
        u: vec![cfg.u],
        v: vec![cfg.v],
        samples: cfg.samples,
        master_seed: cfg.seed,
        subregions: Default::default(),
        quantities: vec![Quantity::LogNorm],
        budget: cfg.budget.unwrap_or(DEFAULT_BUDGET),
        keep_raw: true,
        max_spins: DEFAULT_MAX_SPINS,
    };
    let records = run_sweep(&sweep)?;
    let h = hash(&cfg)?;
    let mut table = CsvTable::new(&[
        "n",
        "m",
        "lambda",
        "u",
        "v",
        "statistic",
        "stderr",
        "analytic_large_n",
    ]);
    let mut by_lambda: Vec<Vec<(usize, f64, f64)>> = vec![Vec::new(); cfg.lambda.len()];
    for r in &records {
        let p = r.point.params;
        let raw = r
            .get(Quantity::LogNorm, None)
            .and_then(|c| c.raw.as_ref())
            .expect("keep_raw");
        let s = norm_fluctuation_statistic(p.n_visible, raw)?;
        // (1/N) log E[Z²] − (2/N) log E[Z] from the replica model at λ = M/N
        let analytic = z0_log_average(&ModelParams::new(p.u, p.v, p.lambda())?)
            - 2.0 * average_norm_squared_analytic(&p);
        table.push(vec![
            p.n_visible.to_string(),
            p.n_hidden.to_string(),
            f(r.lambda),
            f(p.u),
            f(p.v),
            f(s.value),
            f(s.stderr),
            f(analytic),
        ])?;
        by_lambda[r.point.index % cfg.lambda.len()].push((p.n_visible, s.value, s.stderr));
    }
    let mut files = vec![ctx.csv("norm_fluct.csv", &table, &h)?];

    let mut header = vec!["lambda"];
    header.extend(FIT_HEADER);
    let mut fits = CsvTable::new(&header);
    for (l, pts) in cfg.lambda.iter().zip(&by_lambda) {
        if pts.iter().any(|p| !(p.2 > 0.0)) {
            continue;
        }
        if let Some(fit) = extrapolate(pts)? {
            let mut row = vec![f(*l)];
            row.extend(fit_cells(&fit, pts.len()));
            fits.push(row)?;
        }
    }
    if !fits.is_empty() {
        files.push(ctx.csv("norm_fluct_fit.csv", &fits, &h)?);
    }
    Ok(files)
}
