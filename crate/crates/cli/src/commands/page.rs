use super::{extrapolate, f, fit_cells, hash, label, CliError, CliResult, Ctx, FIT_HEADER};
use crate::config::{AnalyticPage, PageCurveConfig};
use rbment::ensemble::{
    run_sweep, NamedSchedule, Quantity, ResultsStore, SubregionSchedule, SweepConfig, SweepRecord,
    DEFAULT_BUDGET,
};
use rbment::output::CsvTable;
use rbment::statmech::{limit_page_curve, s2_estimate, ModelParams, LAMBDA_C};
use std::f64::consts::LN_2;
use std::path::PathBuf;

fn analytic(ctx: &Ctx, h: &str, lambda: f64, a: &AnalyticPage) -> CliResult<PathBuf> {
    let v = a.v.value().map_err(CliError::Config)?;
    if a.points < 2 {
        return Err(CliError::Config(
            "analytic.points must be at least 2".into(),
        ));
    }
    let mut table = CsvTable::new(&["a", "s2_density", "s2_over_log2", "regime", "warning"]);
    if v.is_infinite() && a.u == 0.0 && lambda > 0.0 && lambda < LAMBDA_C {
        for p in limit_page_curve(lambda, a.points)?.points {
            table.push(vec![
                f(p.a),
                f(p.entropy_density),
                f(p.entropy_density / LN_2),
                label(&p.regime),
                String::new(),
            ])?;
        }
    } else {
        // Outside the closed form: minimize directly and flag unreliable points.
        let p = ModelParams::new(a.u, v, lambda)?;
        for k in 0..a.points {
            let x = k as f64 / (a.points - 1) as f64;
            let (s2, warn) = if k == 0 || k + 1 == a.points {
                (0.0, false)
            } else {
                let e = s2_estimate(x, &p)?;
                (e.value, e.large_fluctuation)
            };
            table.push(vec![
                f(x),
                f(s2),
                f(s2 / LN_2),
                String::new(),
                if warn {
                    "large_norm_fluctuation".into()
                } else {
                    String::new()
                },
            ])?;
        }
    }
    ctx.csv(&format!("page_analytic_lambda{}.csv", f(lambda)), &table, h)
}

pub fn run(ctx: &Ctx, mut cfg: PageCurveConfig) -> CliResult<Vec<PathBuf>> {
    cfg.seed = ctx.seed(cfg.seed);
    if cfg.lambda.is_empty() || (cfg.analytic.is_none() && cfg.numeric.is_none()) {
        return Err(CliError::Config(
            "need a nonempty lambda list and at least one of analytic, numeric".into(),
        ));
    }
    let h = hash(&cfg)?;
    let mut files = Vec::new();
    if let Some(a) = &cfg.analytic {
        for &l in &cfg.lambda {
            files.push(analytic(ctx, &h, l, a)?);
        }
    }
    let Some(num) = &cfg.numeric else {
        return Ok(files);
    };
    let sweep = SweepConfig {
        n: num.n.clone(),
        m: None,
        lambda: Some(cfg.lambda.clone()),
        u: vec![num.u],
        v: vec![num.v],
        samples: num.samples,
        master_seed: cfg.seed,
        subregions: SubregionSchedule::Named(NamedSchedule::Page),
        quantities: vec![Quantity::Renyi2, Quantity::VonNeumann],
        budget: num.budget.unwrap_or(DEFAULT_BUDGET),
        keep_raw: num.keep_raw,
        max_spins: num.max_spins,
    };
    let records = run_sweep(&sweep)?;
    for r in &records {
        files.push(numeric_table(ctx, &h, r)?);
    }
    files.extend(deficit_fits(ctx, &h, &cfg.lambda, &records)?);
    let summary: Vec<SweepRecord> = records
        .iter()
        .cloned()
        .map(|mut r| {
            r.columns.iter_mut().for_each(|c| c.raw = None);
            r
        })
        .collect();
    files.push(ctx.json("page_numeric_records.json", &h, &summary)?);
    if num.keep_raw {
        let store = ResultsStore::open(&ctx.dir().join("raw"), &h, &cfg)?;
        for r in &records {
            store.append(r)?;
        }
        files.push(store.dir().to_path_buf());
    }
    Ok(files)
}

fn numeric_table(ctx: &Ctx, h: &str, r: &SweepRecord) -> CliResult<PathBuf> {
    let n = r.point.params.n_visible;
    let nf = n as f64;
    let mut t = CsvTable::new(&["a", "s2_density", "s2_stderr", "svn_density", "svn_stderr"]);
    t.push(vec![
        "0".into(),
        "0".into(),
        "0".into(),
        "0".into(),
        "0".into(),
    ])?;
    for a in 1..n {
        let s2 = r.get(Quantity::Renyi2, Some(a)).expect("page schedule");
        let vn = r.get(Quantity::VonNeumann, Some(a)).expect("page schedule");
        t.push(vec![
            f(a as f64 / nf),
            f(s2.mean / nf),
            f(s2.stderr / nf),
            f(vn.mean / nf),
            f(vn.stderr / nf),
        ])?;
    }
    t.push(vec![
        "1".into(),
        "0".into(),
        "0".into(),
        "0".into(),
        "0".into(),
    ])?;
    ctx.csv(
        &format!("page_numeric_n{n}_lambda{}.csv", f(r.lambda)),
        &t,
        h,
    )
}

/// Half-system deficits `(N/2) log 2 − S̄(N/2)` extrapolated in `1/N` (even `N` only).
fn deficit_fits(
    ctx: &Ctx,
    h: &str,
    lambdas: &[f64],
    records: &[SweepRecord],
) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for (k, &l) in lambdas.iter().enumerate() {
        let mine: Vec<&SweepRecord> = records
            .iter()
            .filter(|r| r.point.index % lambdas.len() == k && r.point.params.n_visible % 2 == 0)
            .collect();
        let mut header = vec!["quantity"];
        header.extend(FIT_HEADER);
        let mut fits = CsvTable::new(&header);
        let mut pts = CsvTable::new(&["n", "quantity", "deficit", "stderr"]);
        for q in [Quantity::Renyi2, Quantity::VonNeumann] {
            let data: Vec<(usize, f64, f64)> = mine
                .iter()
                .map(|r| {
                    let n = r.point.params.n_visible;
                    let c = r.get(q, Some(n / 2)).expect("page schedule");
                    (n, (n / 2) as f64 * LN_2 - c.mean, c.stderr)
                })
                .collect();
            for &(n, d, e) in &data {
                pts.push(vec![n.to_string(), q.name().into(), f(d), f(e)])?;
            }
            if data.iter().any(|p| !(p.2 > 0.0)) {
                continue;
            }
            if let Some(fit) = extrapolate(&data)? {
                let mut row = vec![q.name().to_string()];
                row.extend(fit_cells(&fit, data.len()));
                fits.push(row)?;
            }
        }
        if !pts.is_empty() {
            files.push(ctx.csv(&format!("page_deficit_lambda{}.csv", f(l)), &pts, h)?);
        }
        if !fits.is_empty() {
            files.push(ctx.csv(&format!("page_deficit_fit_lambda{}.csv", f(l)), &fits, h)?);
        }
    }
    Ok(files)
}
