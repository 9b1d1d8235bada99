use super::{f, hash, CliError, CliResult, Ctx};
use crate::config::DesignCheckConfig;
use rbment::ensemble::{
    design_obstruction_check, haar_symmetric_control, offdiagonal_prediction, DesignReport,
};
use rbment::output::CsvTable;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Serialize)]
struct Summary<'a> {
    symmetry_exact: bool,
    symmetry_failures: usize,
    null_residual: f64,
    null_vectors_ok: bool,
    test_states: usize,
    test_mean: f64,
    test_min: f64,
    test_max: f64,
    fraction_positive: f64,
    leading_order_prediction: f64,
    rbm: &'a DesignReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    haar_control: Option<&'a DesignReport>,
}

pub fn run(ctx: &Ctx, mut cfg: DesignCheckConfig) -> CliResult<Vec<PathBuf>> {
    cfg.seed = ctx.seed(cfg.seed);
    if cfg.samples < 2 {
        return Err(CliError::Config("samples must be at least 2".into()));
    }
    let p = cfg.ensemble.params()?;
    let report = design_obstruction_check(&p, cfg.samples, cfg.seed)?;
    let control = if cfg.haar_control {
        Some(haar_symmetric_control(p.n_visible, cfg.samples, cfg.seed)?)
    } else {
        None
    };
    let h = hash(&cfg)?;

    let mut header = vec!["test_state", "value", "stderr"];
    if control.is_some() {
        header.extend(["haar_value", "haar_stderr"]);
    }
    let mut t = CsvTable::new(&header);
    for k in 0..report.test_values.len() {
        let mut row = vec![
            k.to_string(),
            f(report.test_values[k]),
            f(report.test_stderrs[k]),
        ];
        if let Some(c) = &control {
            row.extend([f(c.test_values[k]), f(c.test_stderrs[k])]);
        }
        t.push(row)?;
    }
    let summary = Summary {
        symmetry_exact: report.symmetry_exact,
        symmetry_failures: report.symmetry_failures,
        null_residual: report.null_residual,
        null_vectors_ok: report.null_vectors_ok,
        test_states: report.test_values.len(),
        test_mean: report.test_mean,
        test_min: report.test_min,
        test_max: report.test_max,
        fraction_positive: report.fraction_positive,
        leading_order_prediction: offdiagonal_prediction(&p),
        rbm: &report,
        haar_control: control.as_ref(),
    };
    eprintln!(
        "symmetry: {}  null vectors: {} (residual {:.1e})  rescaled test mean {:.4e} (leading order {:.4e})",
        if report.symmetry_exact { "pass" } else { "FAIL" },
        if report.null_vectors_ok { "pass" } else { "FAIL" },
        report.null_residual,
        report.test_mean,
        summary.leading_order_prediction
    );
    Ok(vec![
        ctx.csv("design_values.csv", &t, &h)?,
        ctx.json("design_report.json", &h, &summary)?,
    ])
}
