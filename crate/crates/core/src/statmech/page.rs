//! Rényi-2 estimates, limiting Page curves and half-system phase diagrams.

use super::z0::{minimize_z0, Z0Minimum, Z0Phase};
use super::z1::{minimize_z1_with, SymmetryLabel, Z1Minimum, Z1Options};
use super::{ModelParams, LAMBDA_C};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct S2Estimate {
    /// `S̄₂/N ≈ 𝓕₁* − 𝓕₀*`.
    pub value: f64,
    pub z1: Z1Minimum,
    pub z0: Z0Minimum,
    /// Set when the squared-norm model sits in its broken phase, where
    /// norm fluctuations are no longer negligible and the estimate is suspect.
    pub large_fluctuation: bool,
}

pub fn s2_estimate(a: f64, p: &ModelParams) -> Result<S2Estimate> {
    s2_estimate_with(a, p, &Z1Options::default())
}

pub fn s2_estimate_with(a: f64, p: &ModelParams, opts: &Z1Options) -> Result<S2Estimate> {
    let z1 = minimize_z1_with(a, p, opts)?;
    let z0 = minimize_z0(p);
    Ok(S2Estimate {
        value: z1.free_energy - z0.free_energy,
        large_fluctuation: z0.phase == Z0Phase::Broken,
        z1,
        z0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PageRegime {
    Ramp,
    Plateau,
    SymmetryBroken,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageCurvePoint {
    pub a: f64,
    pub entropy_density: f64,
    pub regime: PageRegime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageCurve {
    pub lambda: f64,
    pub points: Vec<PageCurvePoint>,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < LAMBDA_C) {
        return Err(Error::Domain(format!(
            "lambda={lambda} outside (0, {LAMBDA_C:.6})"
        )));
    }
    Ok(())
}

/// Plateau height `p(λ)` in units of `log 2`.
pub fn page_plateau_height(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(if lambda < 0.5 {
        lambda
    } else if lambda <= LAMBDA_C / 2.0 {
        0.5
    } else {
        1.0 - lambda / LAMBDA_C
    })
}

/// Closed-form `(u, v) = (0, ∞)` Page curve on `n_points ≥ 2` evenly spaced `a ∈ [0, 1]`.
pub fn limit_page_curve(lambda: f64, n_points: usize) -> Result<PageCurve> {
    let p = page_plateau_height(lambda)?;
    if n_points < 2 {
        return Err(Error::InvalidParameters("need at least two points".into()));
    }
    let tent = (0.5..=LAMBDA_C / 2.0).contains(&lambda);
    let points = (0..n_points)
        .map(|k| {
            let last = n_points - 1;
            // Mirror the upper half so the grid is exactly symmetric about 1/2.
            let (a, m) = if 2 * k <= last {
                let a = k as f64 / last as f64;
                (a, a)
            } else {
                let m = (last - k) as f64 / last as f64;
                (1.0 - m, m)
            };
            let regime = if tent && (a - 0.5).abs() < 1e-12 {
                PageRegime::SymmetryBroken
            } else if m < p {
                PageRegime::Ramp
            } else {
                PageRegime::Plateau
            };
            PageCurvePoint {
                a,
                entropy_density: m.min(p) * LN_2,
                regime,
            }
        })
        .collect();
    Ok(PageCurve { lambda, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagramRow {
    pub u: f64,
    pub v: f64,
    pub lambda: f64,
    pub phi_a: f64,
    pub phi_b: f64,
    pub phi_sum: f64,
    pub s2: f64,
    pub symmetry: SymmetryLabel,
    /// False above the squared-norm transition.
    pub reliable: bool,
}

/// Half-system (`a = 1/2`) minimization over a `v × λ` grid, `v`-major.
pub fn half_system_phase_diagram(
    u: f64,
    vs: &[f64],
    lambdas: &[f64],
    opts: &Z1Options,
) -> Result<Vec<PhaseDiagramRow>> {
    let mut rows = Vec::with_capacity(vs.len() * lambdas.len());
    for &v in vs {
        for &lambda in lambdas {
            let p = ModelParams::new(u, v, lambda)?;
            let est = s2_estimate_with(0.5, &p, opts)?;
            rows.push(PhaseDiagramRow {
                u,
                v,
                lambda,
                phi_a: est.z1.point.phi_a,
                phi_b: est.z1.point.phi_b,
                phi_sum: est.z1.point.phi_a + est.z1.point.phi_b,
                s2: est.value,
                symmetry: est.z1.symmetry,
                reliable: !est.large_fluctuation,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2(a: f64, p: &ModelParams) -> f64 {
        s2_estimate(a, p).unwrap().value
    }

    #[test]
    fn limit_half_system_values() {
        assert!((s2(0.5, &ModelParams::limit(0.25)) - 0.25 * LN_2).abs() < 1e-9);
        assert!((s2(0.5, &ModelParams::limit(0.75)) - 0.5 * LN_2).abs() < 1e-9);
        let l = 1.25;
        let e = s2_estimate(0.5, &ModelParams::limit(l)).unwrap();
        assert!((e.value - (1.0 - l / LAMBDA_C) * LN_2).abs() < 1e-9);
        assert!(((1.0 - l / LAMBDA_C) * LN_2 - 0.1863).abs() < 1e-4);
        assert!(!e.large_fluctuation);
        assert!(
            s2_estimate(0.5, &ModelParams::limit(2.0))
                .unwrap()
                .large_fluctuation
        );
    }

    #[test]
    fn complement_symmetry() {
        for p in [
            ModelParams::limit(0.6),
            ModelParams::new(0.2, 3.0, 0.9).unwrap(),
        ] {
            for a in [0.1, 0.3, 0.45] {
                let opts = Z1Options { grid_step: 5e-3 };
                let x = s2_estimate_with(a, &p, &opts).unwrap().value;
                let y = s2_estimate_with(1.0 - a, &p, &opts).unwrap().value;
                assert!((x - y).abs() < 1e-9, "a={a}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn page_curve_shapes() {
        let c = limit_page_curve(0.25, 101).unwrap();
        for pt in &c.points {
            assert!(pt.entropy_density <= pt.a.min(1.0 - pt.a).min(0.25) * LN_2 + 1e-15);
            if (0.25..=0.75).contains(&pt.a) {
                assert!((pt.entropy_density - 0.25 * LN_2).abs() < 1e-15);
            }
        }
        let c = limit_page_curve(0.75, 11).unwrap();
        assert_eq!(c.points[5].regime, PageRegime::SymmetryBroken);
        assert!((c.points[5].entropy_density - 0.5 * LN_2).abs() < 1e-15);
        assert_eq!(c.points[3].regime, PageRegime::Ramp);
        let c = limit_page_curve(1.0, 201).unwrap();
        let h = (1.0 - 1.0 / LAMBDA_C) * LN_2;
        assert!((h - 0.2876).abs() < 1e-4);
        assert!((c.points[100].entropy_density - h).abs() < 1e-15);
        let n = c.points.len();
        for k in 0..n {
            assert_eq!(
                c.points[k].entropy_density,
                c.points[n - 1 - k].entropy_density
            );
        }
        assert!(limit_page_curve(0.0, 5).is_err());
        assert!(limit_page_curve(LAMBDA_C, 5).is_err());
    }

    #[test]
    fn phase_diagram_boundaries_in_limit() {
        let opts = Z1Options { grid_step: 1e-2 };
        let ls = [0.45, 0.55, 0.8, 0.9];
        let rows = half_system_phase_diagram(0.0, &[f64::INFINITY], &ls, &opts).unwrap();
        let labels: Vec<_> = rows.iter().map(|r| r.symmetry).collect();
        assert_eq!(
            labels,
            vec![
                SymmetryLabel::Symmetric,
                SymmetryLabel::Broken,
                SymmetryLabel::Broken,
                SymmetryLabel::Symmetric
            ]
        );
        assert!(rows.iter().all(|r| r.reliable));
    }

    #[test]
    fn phase_diagram_finite_v() {
        let rows =
            half_system_phase_diagram(0.0, &[4.0], &[0.25, 0.75], &Z1Options::default()).unwrap();
        assert_eq!(rows[0].symmetry, SymmetryLabel::Symmetric);
        assert!(rows[0].phi_a.abs() < 1e-2 && rows[0].phi_b.abs() < 1e-2);
        assert_eq!(rows[1].symmetry, SymmetryLabel::Broken);
    }
}
