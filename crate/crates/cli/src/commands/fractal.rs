use super::{f, hash, CliError, CliResult, Ctx};
use crate::config::FractalConfig;
use rbment::ensemble::{run_sweep, Quantity, SweepConfig, DEFAULT_BUDGET};
use rbment::output::CsvTable;
use rbment::rbm::DEFAULT_MAX_SPINS;
use rbment::statmech::{dq_validity_threshold, fractal_dimension_dq};
use std::f64::consts::LN_2;
use std::path::PathBuf;

fn numeric_quantity(q: u32) -> Option<Quantity> {
    match q {
        2 => Some(Quantity::D2),
        3 => Some(Quantity::D3),
        4 => Some(Quantity::D4),
        _ => None,
    }
}

pub fn run(ctx: &Ctx, mut cfg: FractalConfig) -> CliResult<Vec<PathBuf>> {
    cfg.seed = ctx.seed(cfg.seed);
    if cfg.q.is_empty() {
        return Err(CliError::Config("q must be nonempty".into()));
    }
    let h = hash(&cfg)?;
    let mut analytic = CsvTable::new(&["q", "lambda", "dq", "valid", "validity_threshold"]);
    for &q in &cfg.q {
        let threshold = dq_validity_threshold(q)?;
        for &l in &cfg.lambda {
            let d = fractal_dimension_dq(q, l)?;
            analytic.push(vec![
                q.to_string(),
                f(l),
                f(d.value),
                d.valid.to_string(),
                f(threshold),
            ])?;
        }
    }
    let mut files = vec![ctx.csv("fractal_analytic.csv", &analytic, &h)?];

    let Some(num) = &cfg.numeric else {
        return Ok(files);
    };
    let mut quantities = Vec::new();
    for &q in &cfg.q {
        quantities.push(numeric_quantity(q).ok_or_else(|| {
            CliError::Config(format!(
                "numeric fractal dimensions support q in 2..=4, got {q}"
            ))
        })?);
    }
    quantities.push(Quantity::Renyi2);
    let sweep = SweepConfig {
        n: num.n.clone(),
        m: None,
        lambda: Some(num.lambda.clone()),
        u: vec![num.u],
        v: vec![num.v],
        samples: num.samples,
        master_seed: cfg.seed,
        subregions: Default::default(),
        quantities,
        budget: num.budget.unwrap_or(DEFAULT_BUDGET),
        keep_raw: false,
        max_spins: DEFAULT_MAX_SPINS,
    };
    let records = run_sweep(&sweep)?;
    let mut table = CsvTable::new(&[
        "n",
        "m",
        "lambda",
        "q",
        "dq_mean",
        "dq_stderr",
        "s2_half_over_n_log2",
        "s2_half_stderr",
    ]);
    for r in &records {
        let n = r.point.params.n_visible;
        let s2 = r.get(Quantity::Renyi2, Some(n / 2)).expect("half schedule");
        let scale = n as f64 * LN_2;
        for &q in &cfg.q {
            let d = r
                .get(numeric_quantity(q).expect("checked"), None)
                .expect("requested");
            table.push(vec![
                n.to_string(),
                r.point.params.n_hidden.to_string(),
                f(r.lambda),
                q.to_string(),
                f(d.mean),
                f(d.stderr),
                f(s2.mean / scale),
                f(s2.stderr / scale),
            ])?;
        }
    }
    files.push(ctx.csv("fractal_numeric.csv", &table, &h)?);
    Ok(files)
}
