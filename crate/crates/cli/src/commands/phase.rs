use super::{f, hash, label, CliError, CliResult, Ctx};
use crate::config::PhaseDiagramConfig;
use rayon::prelude::*;
use rbment::output::CsvTable;
use rbment::statmech::{minimize_z0, s2_estimate_with, ModelParams, Z1Options};
use std::path::PathBuf;

const HEADER: [&str; 12] = [
    "u",
    "v",
    "lambda",
    "phi_star",
    "z0_phase",
    "free_energy_z0",
    "phi_a_star",
    "phi_b_star",
    "free_energy",
    "s2_density",
    "phase_label",
    "reliable_flag",
];

pub fn run(ctx: &Ctx, cfg: PhaseDiagramConfig) -> CliResult<Vec<PathBuf>> {
    let vs = cfg
        .v
        .iter()
        .map(|s| s.value())
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Config)?;
    if cfg.u.is_empty() || vs.is_empty() || cfg.lambda.is_empty() {
        return Err(CliError::Config("u, v and lambda must be nonempty".into()));
    }
    let opts = match cfg.grid_step {
        Some(grid_step) => Z1Options { grid_step },
        None => Z1Options::default(),
    };
    let mut grid = Vec::new();
    for &u in &cfg.u {
        for &v in &vs {
            for &l in &cfg.lambda {
                grid.push(ModelParams::new(u, v, l)?);
            }
        }
    }
    let rows = grid
        .par_iter()
        .map(|p| {
            let z0 = minimize_z0(p);
            let est = s2_estimate_with(cfg.a, p, &opts)?;
            Ok(vec![
                f(p.u),
                f(p.v),
                f(p.lambda),
                f(z0.phi),
                label(&z0.phase),
                f(z0.free_energy),
                f(est.z1.point.phi_a),
                f(est.z1.point.phi_b),
                f(est.z1.free_energy),
                f(est.value),
                label(&est.z1.symmetry),
                (!est.large_fluctuation).to_string(),
            ])
        })
        .collect::<rbment::Result<Vec<_>>>()?;
    let mut table = CsvTable::new(&HEADER);
    for r in rows {
        table.push(r)?;
    }
    let h = hash(&cfg)?;
    Ok(vec![ctx.csv("phase_diagram.csv", &table, &h)?])
}
