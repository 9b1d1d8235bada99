use super::{f, hash, CliError, CliResult, Ctx};
use crate::config::LevelStatsConfig;
use rbment::ensemble::map_samples;
use rbment::entanglement::{
    goe_surrogate, level_spacing_ratios, poisson_reference, reduced_density_matrix,
    sector_spectrum, windowed_mean_reduced_ratio, Histogram, LevelStatistics, SubregionMask,
    POISSON_MEAN_REDUCED_RATIO, RATIO_BIN_WIDTH,
};
use rbment::output::CsvTable;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Serialize)]
struct Summary {
    ratios: usize,
    mean_reduced_ratio: f64,
    poisson_mean: f64,
    goe_surrogate_mean: f64,
}

pub fn run(ctx: &Ctx, mut cfg: LevelStatsConfig) -> CliResult<Vec<PathBuf>> {
    cfg.seed = ctx.seed(cfg.seed);
    if cfg.sector != 1 && cfg.sector != -1 {
        return Err(CliError::Config("sector must be 1 or -1".into()));
    }
    if !(cfg.half_width > 0.0 && cfg.window_step > 0.0) || cfg.samples == 0 {
        return Err(CliError::Config(
            "half_width, window_step and samples must be positive".into(),
        ));
    }
    let p = cfg.ensemble.params()?;
    let n = p.n_visible;
    let mask = SubregionMask::contiguous(n, cfg.subregion.unwrap_or(n / 2))?;
    let stats: Vec<LevelStatistics> =
        map_samples(&p, 0, cfg.samples, cfg.seed, cfg.ensemble.max_spins, |s| {
            let rho = reduced_density_matrix(s, &mask)?;
            level_spacing_ratios(&sector_spectrum(&rho, &mask)?, Some(cfg.sector))
        })?;
    let h = hash(&cfg)?;

    let reduced: Vec<f64> = stats
        .iter()
        .flat_map(|s| s.reduced.iter().copied())
        .collect();
    let numeric = Histogram::unit_interval(&reduced, RATIO_BIN_WIDTH);
    let poisson = poisson_reference(RATIO_BIN_WIDTH);
    let goe = goe_surrogate(cfg.goe_samples.max(1), cfg.seed ^ 0x9E37_79B9);
    let mut hist = CsvTable::new(&["r_lo", "r_hi", "p_numeric", "p_poisson", "p_goe"]);
    for k in 0..numeric.centers.len() {
        hist.push(vec![
            f(k as f64 * RATIO_BIN_WIDTH),
            f((k + 1) as f64 * RATIO_BIN_WIDTH),
            f(numeric.density[k]),
            f(poisson.density[k]),
            f(goe.histogram.density[k]),
        ])?;
    }

    let positions: Vec<f64> = stats
        .iter()
        .flat_map(|s| s.positions.iter().copied())
        .collect();
    let lo = positions.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = positions.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut windows = CsvTable::new(&["eps_center", "mean_reduced_ratio", "stderr", "count"]);
    let mut c = lo;
    while c <= hi {
        if let Ok(w) = windowed_mean_reduced_ratio(&stats, c, cfg.half_width) {
            if w.count >= 2 {
                windows.push(vec![f(c), f(w.mean), f(w.stderr), w.count.to_string()])?;
            }
        }
        c += cfg.window_step;
    }
    let summary = Summary {
        ratios: reduced.len(),
        mean_reduced_ratio: reduced.iter().sum::<f64>() / reduced.len() as f64,
        poisson_mean: POISSON_MEAN_REDUCED_RATIO,
        goe_surrogate_mean: goe.mean,
    };
    Ok(vec![
        ctx.csv("ratio_histogram.csv", &hist, &h)?,
        ctx.csv("windowed_ratio.csv", &windows, &h)?,
        ctx.json("level_stats_summary.json", &h, &summary)?,
    ])
}
